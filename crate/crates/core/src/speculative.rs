//! Speculative cash as a one-day option.
//!
//! Holding cash for one more day keeps the right to buy an asset tomorrow.
//! If the price drops by one standard deviation the firm buys below the
//! long-term value and gains `sigma * price * units`; if it rises the firm
//! simply does not buy. The expected discounted gain is compared with the
//! daily cost of the capital tied up.

use serde::{Deserialize, Serialize};

use crate::reserves::DEFAULT_DAY_COUNT;
use crate::scalar::{check_finite, check_non_negative, check_positive};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeculativeInputs<T> {
    /// Quantity of the asset the cash can buy.
    pub units: T,
    /// Current price per unit, taken as the long-term value.
    pub price: T,
    /// Daily relative price standard deviation, e.g. 0.04.
    pub daily_price_stddev: T,
    /// Probability of the up move; the down move has the complement.
    pub up_probability: T,
    pub annual_rate: T,
    pub day_count: u32,
}

impl<T: Real> SpeculativeInputs<T> {
    /// Symmetric moves, 360-day year.
    pub fn new(units: T, price: T, daily_price_stddev: T, annual_rate: T) -> Self {
        Self {
            units,
            price,
            daily_price_stddev,
            up_probability: T::lit(0.5),
            annual_rate,
            day_count: DEFAULT_DAY_COUNT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("units", self.units)?;
        check_positive("price", self.price)?;
        check_non_negative("daily_price_stddev", self.daily_price_stddev)?;
        check_non_negative("annual_rate", self.annual_rate)?;
        check_finite("up_probability", self.up_probability)?;
        if self.up_probability < T::zero() || self.up_probability > T::one() {
            return Err(Error::input("up_probability must lie in [0, 1]"));
        }
        if self.day_count == 0 {
            return Err(Error::input("day_count must be > 0"));
        }
        Ok(())
    }

    fn daily_rate(&self) -> T {
        self.annual_rate / T::lit(f64::from(self.day_count))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeculativeVerdict<T> {
    pub expected_benefit: T,
    pub daily_cost: T,
    /// `expected_benefit > daily_cost`.
    pub hold: bool,
}

/// Expected one-day benefit of keeping the cash.
pub fn expected_benefit<T: Real>(inputs: &SpeculativeInputs<T>) -> Result<T> {
    inputs.validate()?;
    let down_payoff =
        inputs.daily_price_stddev * inputs.price * inputs.units / (T::one() + inputs.daily_rate());
    let up_payoff = T::zero();
    let down_probability = T::one() - inputs.up_probability;
    Ok(down_payoff * down_probability + up_payoff * inputs.up_probability)
}

/// Cost of financing `units * price` for one day.
pub fn daily_capital_cost<T: Real>(
    units: T,
    price: T,
    annual_rate: T,
    day_count: u32,
) -> Result<T> {
    check_non_negative("units", units)?;
    check_non_negative("price", price)?;
    check_non_negative("annual_rate", annual_rate)?;
    if day_count == 0 {
        return Err(Error::input("day_count must be > 0"));
    }
    Ok(annual_rate * units * price / T::lit(f64::from(day_count)))
}

pub fn speculative_verdict<T: Real>(
    inputs: &SpeculativeInputs<T>,
) -> Result<SpeculativeVerdict<T>> {
    let expected_benefit = expected_benefit(inputs)?;
    let daily_cost = daily_capital_cost(
        inputs.units,
        inputs.price,
        inputs.annual_rate,
        inputs.day_count,
    )?;
    Ok(SpeculativeVerdict {
        expected_benefit,
        daily_cost,
        hold: expected_benefit > daily_cost,
    })
}

/// Daily volatility at which holding exactly pays for itself; `None` when
/// the down move has zero probability.
pub fn break_even_volatility<T: Real>(inputs: &SpeculativeInputs<T>) -> Result<Option<T>> {
    inputs.validate()?;
    let down_probability = T::one() - inputs.up_probability;
    if down_probability == T::zero() {
        return Ok(None);
    }
    let cost = daily_capital_cost(
        inputs.units,
        inputs.price,
        inputs.annual_rate,
        inputs.day_count,
    )?;
    Ok(Some(
        cost * (T::one() + inputs.daily_rate()) / (inputs.price * inputs.units * down_probability),
    ))
}
