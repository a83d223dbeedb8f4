//! Precautionary reserves: inventory safety stock, the low cash level (LCL)
//! built on the same formula, and the value impact of holding that cash.
//!
//! Both levels have the form `sqrt(-2 s^2 ln(x))` where `x` compares the
//! holding cost of the buffer with the shortage cost it prevents. When
//! `x >= 1` holding anything costs more than it saves; the level is then 0
//! and the result carries `degenerate = true` so callers can keep going.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::scalar::{check_non_negative, check_positive};
use crate::valuation::{delta_value, ValuationContext};
use crate::{Error, Real, Result};

/// Days per year used to turn annual rates into daily ones.
pub const DEFAULT_DAY_COUNT: u32 = 360;

/// Period over which a flow total is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodBasis {
    Day,
    Week,
    #[default]
    Month,
    Year,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SafetyStockInputs<T> {
    /// Holding cost as a fraction of inventory value per period.
    pub holding_cost_rate: T,
    pub order_quantity: T,
    pub unit_price: T,
    /// Demand per period, units.
    pub demand: T,
    /// Standard deviation of usage, units.
    pub usage_stddev: T,
    pub stockout_cost: T,
}

impl<T: Real> SafetyStockInputs<T> {
    pub fn validate(&self) -> Result<()> {
        check_positive("holding_cost_rate", self.holding_cost_rate)?;
        check_positive("order_quantity", self.order_quantity)?;
        check_positive("unit_price", self.unit_price)?;
        check_positive("demand", self.demand)?;
        check_non_negative("usage_stddev", self.usage_stddev)?;
        check_positive("stockout_cost", self.stockout_cost)
    }

    /// `C Q s v sqrt(2 pi) / (P K)`.
    pub fn log_argument(&self) -> T {
        self.holding_cost_rate
            * self.order_quantity
            * self.usage_stddev
            * self.unit_price
            * sqrt_two_pi()
            / (self.demand * self.stockout_cost)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LclInputs<T> {
    /// Cost of capital per day (annual rate / day count).
    pub capital_rate_per_day: T,
    /// Average size of one cash transfer.
    pub avg_transfer: T,
    /// Sum of all cash inflows and outflows over `flow_basis`.
    pub flow_sum: T,
    /// Standard deviation of daily net cash flows.
    pub daily_flow_stddev: T,
    /// Cost of running short of cash.
    pub cash_shortage_cost: T,
    /// Period `flow_sum` covers. Anything but `Day` mixes bases with the
    /// daily rate; the result is computed as given and flagged.
    #[serde(default)]
    pub flow_basis: PeriodBasis,
}

impl<T: Real> LclInputs<T> {
    /// Builds inputs from an annual rate using `day_count` days per year.
    pub fn from_annual_rate(
        annual_rate: T,
        day_count: u32,
        avg_transfer: T,
        flow_sum: T,
        daily_flow_stddev: T,
        cash_shortage_cost: T,
    ) -> Self {
        Self {
            capital_rate_per_day: annual_rate / T::lit(f64::from(day_count)),
            avg_transfer,
            flow_sum,
            daily_flow_stddev,
            cash_shortage_cost,
            flow_basis: PeriodBasis::Month,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("capital_rate_per_day", self.capital_rate_per_day)?;
        check_positive("avg_transfer", self.avg_transfer)?;
        check_positive("flow_sum", self.flow_sum)?;
        check_non_negative("daily_flow_stddev", self.daily_flow_stddev)?;
        check_positive("cash_shortage_cost", self.cash_shortage_cost)
    }

    /// `k G* s sqrt(2 pi) / (P K)`.
    pub fn log_argument(&self) -> T {
        self.capital_rate_per_day * self.avg_transfer * self.daily_flow_stddev * sqrt_two_pi()
            / (self.flow_sum * self.cash_shortage_cost)
    }

    /// `-2 s^2 ln(x)`; negative or zero in the degenerate domain.
    pub fn radicand(&self) -> T {
        radicand(self.daily_flow_stddev, self.log_argument())
    }

    /// Same formula seen as a safety stock with `C = k`, `Q = G*`, `v = 1`.
    pub fn as_safety_stock(&self) -> SafetyStockInputs<T> {
        SafetyStockInputs {
            holding_cost_rate: self.capital_rate_per_day,
            order_quantity: self.avg_transfer,
            unit_price: T::one(),
            demand: self.flow_sum,
            usage_stddev: self.daily_flow_stddev,
            stockout_cost: self.cash_shortage_cost,
        }
    }
}

/// A reserve level with its domain flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReserveLevel<T> {
    pub value: T,
    /// Log argument >= 1: no reserve pays for itself.
    pub degenerate: bool,
    /// Rate and flow total measured over different periods.
    #[serde(default)]
    pub mixed_basis: bool,
}

fn sqrt_two_pi<T: Real>() -> T {
    T::lit((2.0 * PI).sqrt())
}

fn radicand<T: Real>(stddev: T, log_argument: T) -> T {
    -T::lit(2.0) * stddev * stddev * log_argument.ln()
}

fn buffer_level<T: Real>(stddev: T, log_argument: T) -> ReserveLevel<T> {
    if stddev == T::zero() {
        return ReserveLevel {
            value: T::zero(),
            degenerate: false,
            mixed_basis: false,
        };
    }
    if log_argument >= T::one() {
        return ReserveLevel {
            value: T::zero(),
            degenerate: true,
            mixed_basis: false,
        };
    }
    ReserveLevel {
        value: radicand(stddev, log_argument).sqrt(),
        degenerate: false,
        mixed_basis: false,
    }
}

/// Inventory safety stock, in units.
pub fn safety_stock<T: Real>(inputs: &SafetyStockInputs<T>) -> Result<ReserveLevel<T>> {
    inputs.validate()?;
    Ok(buffer_level(inputs.usage_stddev, inputs.log_argument()))
}

/// Low (precautionary) cash level.
pub fn lcl<T: Real>(inputs: &LclInputs<T>) -> Result<ReserveLevel<T>> {
    inputs.validate()?;
    let mut level = buffer_level(inputs.daily_flow_stddev, inputs.log_argument());
    level.mixed_basis = inputs.flow_basis != PeriodBasis::Day;
    Ok(level)
}

/// Net working capital growth, its yearly carrying cost, and the change in
/// firm value caused by moving the precautionary level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueImpact<T> {
    pub nwc_growth: T,
    pub yearly_alt_cost: T,
    pub value_change: T,
}

/// Value impact of moving the precautionary cash level from `lcl_old` to
/// `lcl_new`.
///
/// The extra cash is an outflow at time zero; its after-tax carrying cost
/// recurs every year and is capitalised at `annual_rate`.
pub fn lcl_value_impact<T: Real>(
    lcl_new: T,
    lcl_old: T,
    annual_rate: T,
    tax_rate: T,
) -> Result<ValueImpact<T>> {
    if annual_rate.is_nan() || annual_rate <= T::zero() {
        return Err(Error::domain("annual_rate must be > 0"));
    }
    if !(tax_rate >= T::zero() && tax_rate <= T::one()) {
        return Err(Error::input("tax_rate must lie in [0, 1]"));
    }
    let nwc_growth = lcl_new - lcl_old;
    let yearly_alt_cost = nwc_growth * annual_rate;
    let level = -yearly_alt_cost * (T::one() - tax_rate);
    let value_change = delta_value(
        &[-nwc_growth, level],
        &ValuationContext::perpetuity(annual_rate),
    )?;
    Ok(ValueImpact {
        nwc_growth,
        yearly_alt_cost,
        value_change,
    })
}
