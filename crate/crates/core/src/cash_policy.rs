//! Cash-balance control models.
//!
//! | situation                          | model      |
//! |------------------------------------|------------|
//! | predictable, outflows dominate     | Baumol     |
//! | predictable, inflows dominate      | Beranek    |
//! | predictable a few days ahead only  | Stone      |
//! | unpredictable                      | Miller-Orr |
//!
//! Each model has a parameter calculator and a step function. Step
//! functions are pure: they take the current balance and return a
//! [`PolicyAction`]; the caller owns the state.
//!
//! Baumol uses `C* = sqrt(2 F P / k)`, so one transfer is twice the average
//! balance and `P / C*` transfers happen per period. Miller-Orr uses
//! `C* = L + (3 F sigma^2 / 4k)^(1/3)` and `U* = 3 C* - 2 L`.

use serde::{Deserialize, Serialize};

use crate::scalar::{check_finite, check_non_negative, check_positive};
use crate::{Error, Real, Result};

/// Default inward scaling of the Stone inner band.
pub const DEFAULT_INNER_FRACTION: f64 = 0.8;
/// Default Stone look-ahead, days.
pub const DEFAULT_LOOKAHEAD_DAYS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaumolParams<T> {
    /// Total cash demand (Baumol) or total inflow (Beranek) over the period.
    pub period_demand: T,
    /// Fixed cost of one securities transaction.
    pub transfer_cost: T,
    /// Opportunity rate for the same period.
    pub rate: T,
}

impl<T: Real> BaumolParams<T> {
    pub fn validate(&self) -> Result<()> {
        check_positive("period_demand", self.period_demand)?;
        check_positive("transfer_cost", self.transfer_cost)?;
        check_positive("rate", self.rate)
    }

    /// Transaction plus holding cost of transfers of size `transfer`:
    /// `F P / C + k C / 2`.
    pub fn total_cost(&self, transfer: T) -> T {
        self.transfer_cost * self.period_demand / transfer + self.rate * transfer / T::lit(2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaumolSolution<T> {
    /// Optimal transfer size, which is also the peak balance.
    pub optimal_cash: T,
    /// `P / C*`, not rounded.
    pub transfers_per_period: T,
    pub avg_balance: T,
}

impl<T: Real> BaumolSolution<T> {
    pub fn transfer_size(&self) -> T {
        self.optimal_cash
    }
}

fn square_root_rule<T: Real>(p: &BaumolParams<T>) -> Result<BaumolSolution<T>> {
    p.validate()?;
    let optimal_cash = (T::lit(2.0) * p.transfer_cost * p.period_demand / p.rate).sqrt();
    Ok(BaumolSolution {
        optimal_cash,
        transfers_per_period: p.period_demand / optimal_cash,
        avg_balance: optimal_cash / T::lit(2.0),
    })
}

/// Optimal replenishment when outflows dominate.
pub fn baumol_optimal<T: Real>(p: &BaumolParams<T>) -> Result<BaumolSolution<T>> {
    square_root_rule(p)
}

/// Optimal sweep size when inflows dominate; `period_demand` is the total
/// inflow of the period.
pub fn beranek_optimal<T: Real>(p: &BaumolParams<T>) -> Result<BaumolSolution<T>> {
    square_root_rule(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    None,
    TransferToCash,
    TransferFromCash,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyAction<T> {
    pub kind: ActionKind,
    /// Always >= 0; direction is in `kind`.
    pub amount: T,
    pub resulting_balance: T,
}

impl<T: Real> PolicyAction<T> {
    pub fn none(balance: T) -> Self {
        Self {
            kind: ActionKind::None,
            amount: T::zero(),
            resulting_balance: balance,
        }
    }

    /// Moves `balance` to `target` with a single transfer.
    pub fn restore(balance: T, target: T) -> Self {
        if balance < target {
            Self {
                kind: ActionKind::TransferToCash,
                amount: target - balance,
                resulting_balance: target,
            }
        } else if balance > target {
            Self {
                kind: ActionKind::TransferFromCash,
                amount: balance - target,
                resulting_balance: target,
            }
        } else {
            Self::none(balance)
        }
    }

    pub fn is_transfer(&self) -> bool {
        self.kind != ActionKind::None
    }

    /// Amount as a change to the cash balance.
    pub fn signed_amount(&self) -> T {
        match self.kind {
            ActionKind::None => T::zero(),
            ActionKind::TransferToCash => self.amount,
            ActionKind::TransferFromCash => -self.amount,
        }
    }
}

/// One Baumol day. `balance` is the opening balance and `daily_outflow` the
/// cash spent today; when the outflow would exhaust the balance, `c_star`
/// is raised first.
pub fn baumol_step<T: Real>(balance: T, daily_outflow: T, c_star: T) -> PolicyAction<T> {
    let after = balance - daily_outflow;
    if after <= T::zero() {
        PolicyAction {
            kind: ActionKind::TransferToCash,
            amount: c_star,
            resulting_balance: after + c_star,
        }
    } else {
        PolicyAction::none(after)
    }
}

/// One Beranek day: once the balance after today's inflow reaches `c_star`
/// everything is swept into securities.
pub fn beranek_step<T: Real>(balance: T, daily_inflow: T, c_star: T) -> PolicyAction<T> {
    let after = balance + daily_inflow;
    if after >= c_star && after > T::zero() {
        PolicyAction {
            kind: ActionKind::TransferFromCash,
            amount: after,
            resulting_balance: T::zero(),
        }
    } else {
        PolicyAction::none(after)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MillerOrrParams<T> {
    /// Floor set by management.
    pub lower_limit: T,
    /// Fixed cost per transfer.
    pub transfer_cost: T,
    pub daily_rate: T,
    /// Variance of daily net operating flows (before policy actions).
    pub daily_variance: T,
}

impl<T: Real> MillerOrrParams<T> {
    /// A zero variance is allowed and collapses the band onto the floor.
    pub fn validate(&self) -> Result<()> {
        check_non_negative("lower_limit", self.lower_limit)?;
        check_positive("transfer_cost", self.transfer_cost)?;
        check_positive("daily_rate", self.daily_rate)?;
        check_non_negative("daily_variance", self.daily_variance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MillerOrrLevels<T> {
    pub lower: T,
    pub target: T,
    pub upper: T,
}

impl<T: Real> MillerOrrLevels<T> {
    /// Distance from the floor to the target.
    pub fn spread(&self) -> T {
        self.target - self.lower
    }
}

pub fn miller_orr_levels<T: Real>(p: &MillerOrrParams<T>) -> Result<MillerOrrLevels<T>> {
    p.validate()?;
    let spread =
        (T::lit(3.0) * p.transfer_cost * p.daily_variance / (T::lit(4.0) * p.daily_rate)).cbrt();
    let target = p.lower_limit + spread;
    let upper = T::lit(3.0) * target - T::lit(2.0) * p.lower_limit;
    Ok(MillerOrrLevels {
        lower: p.lower_limit,
        target,
        upper,
    })
}

/// Restores the target whenever the balance touches either limit.
pub fn miller_orr_step<T: Real>(balance: T, levels: &MillerOrrLevels<T>) -> PolicyAction<T> {
    if balance >= levels.upper || balance <= levels.lower {
        PolicyAction::restore(balance, levels.target)
    } else {
        PolicyAction::none(balance)
    }
}

/// Miller-Orr band with outer trigger limits, inner tolerance limits and a
/// look-ahead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoneParams<T> {
    pub miller_orr: MillerOrrParams<T>,
    pub outer_upper: T,
    pub outer_lower: T,
    pub inner_upper: T,
    pub inner_lower: T,
    /// 0 disables the look-ahead (the projected level is the balance itself).
    pub lookahead_days: usize,
}

impl<T: Real> StoneParams<T> {
    /// Outer limits at the Miller-Orr floor and ceiling; inner limits pulled
    /// toward the target by `inner_fraction` of each half-band.
    pub fn from_miller_orr(
        miller_orr: MillerOrrParams<T>,
        inner_fraction: T,
        lookahead_days: usize,
    ) -> Result<Self> {
        if !(inner_fraction >= T::zero() && inner_fraction <= T::one()) {
            return Err(Error::input("inner_fraction must lie in [0, 1]"));
        }
        let levels = miller_orr_levels(&miller_orr)?;
        let params = Self {
            miller_orr,
            outer_upper: levels.upper,
            outer_lower: levels.lower,
            inner_upper: levels.target + inner_fraction * (levels.upper - levels.target),
            inner_lower: levels.target - inner_fraction * (levels.target - levels.lower),
            lookahead_days,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn target(&self) -> Result<T> {
        Ok(miller_orr_levels(&self.miller_orr)?.target)
    }

    pub fn validate(&self) -> Result<()> {
        let target = self.target()?;
        for (name, v) in [
            ("outer_upper", self.outer_upper),
            ("outer_lower", self.outer_lower),
            ("inner_upper", self.inner_upper),
            ("inner_lower", self.inner_lower),
        ] {
            check_finite(name, v)?;
        }
        let ordered = self.outer_lower <= self.inner_lower
            && self.inner_lower <= target
            && target <= self.inner_upper
            && self.inner_upper <= self.outer_upper;
        if !ordered {
            return Err(Error::input(
                "Stone limits must satisfy outer_lower <= inner_lower <= target <= inner_upper <= outer_upper",
            ));
        }
        Ok(())
    }
}

/// One Stone day.
///
/// Inside the outer band nothing happens. On touching an outer limit the
/// balance is projected `lookahead_days` ahead with `forecast`; only when
/// that projection is still at or beyond an inner limit is the target
/// restored.
pub fn stone_step<T: Real>(
    balance: T,
    p: &StoneParams<T>,
    forecast: &[T],
) -> Result<PolicyAction<T>> {
    if forecast.len() < p.lookahead_days {
        return Err(Error::input(format!(
            "forecast covers {} days, look-ahead needs {}",
            forecast.len(),
            p.lookahead_days
        )));
    }
    if balance > p.outer_lower && balance < p.outer_upper {
        return Ok(PolicyAction::none(balance));
    }
    let projected = forecast[..p.lookahead_days]
        .iter()
        .fold(balance, |acc, f| acc + *f);
    if projected >= p.inner_upper || projected <= p.inner_lower {
        Ok(PolicyAction::restore(balance, p.target()?))
    } else {
        Ok(PolicyAction::none(balance))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference_baumol() -> BaumolParams<f64> {
        BaumolParams {
            period_demand: 1_000_000.0,
            transfer_cost: 100.0,
            rate: 0.10,
        }
    }

    /// Unit-step grid search of `F P / C + k C / 2`.
    fn grid_minimiser(p: &BaumolParams<f64>, lo: f64, hi: f64, step: f64) -> f64 {
        let mut best = (f64::INFINITY, lo);
        let mut c = lo;
        while c <= hi {
            let cost = p.transfer_cost * p.period_demand / c + p.rate * c / 2.0;
            if cost < best.0 {
                best = (cost, c);
            }
            c += step;
        }
        best.1
    }

    #[test]
    fn baumol_reference_values() {
        let p = reference_baumol();
        let s = baumol_optimal(&p).unwrap();
        assert_relative_eq!(s.optimal_cash, 44_721.359_549_995_8, max_relative = 1e-12);
        assert_relative_eq!(s.avg_balance, 22_360.679_774_997_9, max_relative = 1e-12);
        assert_relative_eq!(
            s.transfers_per_period,
            22.360_679_774_997_9,
            max_relative = 1e-12
        );
        let grid = grid_minimiser(&p, 1.0, 100_000.0, 1.0);
        assert!((grid - s.optimal_cash).abs() <= 1.0);
        assert_eq!(s.transfer_size(), 2.0 * s.avg_balance);
    }

    #[test]
    fn baumol_scales_with_square_root_of_demand() {
        let p = reference_baumol();
        let mut q = p;
        q.period_demand *= 4.0;
        let (a, b) = (baumol_optimal(&p).unwrap(), baumol_optimal(&q).unwrap());
        assert_relative_eq!(b.optimal_cash, 2.0 * a.optimal_cash, max_relative = 1e-15);
    }

    #[test]
    fn baumol_rejects_non_positive() {
        let mut p = reference_baumol();
        p.rate = 0.0;
        assert!(matches!(baumol_optimal(&p), Err(Error::Input(_))));
        p.rate = 0.1;
        p.transfer_cost = -1.0;
        assert!(beranek_optimal(&p).is_err());
    }

    #[test]
    fn beranek_matches_baumol_numbers() {
        let p = reference_baumol();
        let s = beranek_optimal(&p).unwrap();
        assert_relative_eq!(s.optimal_cash, 44_721.359_549_995_8, max_relative = 1e-12);
        // Sweeping: same cost curve, so the same grid oracle applies.
        let grid = grid_minimiser(&p, 1.0, 100_000.0, 1.0);
        assert!((grid - s.optimal_cash).abs() <= 1.0);
    }

    #[test]
    fn beranek_continuous_sweep_in_the_limit() {
        let mut p = reference_baumol();
        p.transfer_cost = 1e-15;
        assert!(beranek_optimal(&p).unwrap().optimal_cash < 1e-3);
    }

    #[test]
    fn baumol_step_examples() {
        assert_eq!(baumol_step(50.0, 10.0, 100.0), PolicyAction::none(40.0));
        let a = baumol_step(5.0, 10.0, 100.0);
        assert_eq!(a.kind, ActionKind::TransferToCash);
        assert_eq!(a.amount, 100.0);
        assert_eq!(a.resulting_balance, 95.0);
        // Next day by hand: 95 - 10 = 85, no action.
        assert_eq!(
            baumol_step(a.resulting_balance, 10.0, 100.0),
            PolicyAction::none(85.0)
        );
    }

    #[test]
    fn baumol_refill_cadence() {
        // 30 days of outflow 10 starting from C* = 100: refills on days 10, 20, 30.
        let (c_star, d): (f64, f64) = (100.0, 10.0);
        let mut balance = c_star;
        let mut refills = Vec::new();
        for day in 1..=30 {
            let a = baumol_step(balance, d, c_star);
            if a.is_transfer() {
                refills.push(day);
            }
            balance = a.resulting_balance;
        }
        let cadence = (c_star / d).ceil() as usize;
        assert_eq!(refills, vec![cadence, 2 * cadence, 3 * cadence]);
        assert!(balance > 0.0);
    }

    #[test]
    fn beranek_sweep_by_hand() {
        // Inflow 30/day, C* = 100: balances 30, 60, 90, 120 -> sweep on day 4.
        let mut balance = 0.0;
        let mut log = Vec::new();
        for _ in 0..10 {
            let a = beranek_step(balance, 30.0, 100.0);
            log.push((a.kind, a.amount, a.resulting_balance));
            balance = a.resulting_balance;
        }
        let sweeps: Vec<usize> = log
            .iter()
            .enumerate()
            .filter(|(_, l)| l.0 != ActionKind::None)
            .map(|(i, _)| i + 1)
            .collect();
        assert_eq!(sweeps, vec![4, 8]);
        assert_eq!(log[3], (ActionKind::TransferFromCash, 120.0, 0.0));
        assert_eq!(log[9].2, 60.0);
    }

    fn reference_miller_orr() -> MillerOrrParams<f64> {
        MillerOrrParams {
            lower_limit: 5_000.0,
            transfer_cost: 10.0,
            daily_rate: 0.0004,
            daily_variance: 1_000_000.0,
        }
    }

    #[test]
    fn miller_orr_reference_levels() {
        let levels = miller_orr_levels(&reference_miller_orr()).unwrap();
        // cbrt(3 * 10 * 1e6 / 0.0016) = cbrt(1.875e10)
        assert_relative_eq!(levels.target, 7_656.646_422_956_526, max_relative = 1e-12);
        assert_relative_eq!(levels.upper, 12_969.939_268_869_58, max_relative = 1e-12);
        assert_eq!(levels.upper, 3.0 * levels.target - 2.0 * levels.lower);
    }

    #[test]
    fn miller_orr_collapses_without_volatility() {
        let mut p = reference_miller_orr();
        p.daily_variance = 0.0;
        let levels = miller_orr_levels(&p).unwrap();
        assert_eq!(levels.target, 5_000.0);
        assert_eq!(levels.upper, 5_000.0);
    }

    #[test]
    fn miller_orr_rejects_bad_params() {
        let mut p = reference_miller_orr();
        p.daily_variance = -1.0;
        assert!(miller_orr_levels(&p).is_err());
        let mut p = reference_miller_orr();
        p.daily_rate = 0.0;
        assert!(miller_orr_levels(&p).is_err());
        let mut p = reference_miller_orr();
        p.transfer_cost = 0.0;
        assert!(miller_orr_levels(&p).is_err());
    }

    #[test]
    fn miller_orr_step_examples() {
        let levels = miller_orr_levels(&reference_miller_orr()).unwrap();
        assert_eq!(
            miller_orr_step(levels.target, &levels),
            PolicyAction::none(levels.target)
        );

        let up = miller_orr_step(levels.upper, &levels);
        assert_eq!(up.kind, ActionKind::TransferFromCash);
        assert_eq!(up.amount, levels.upper - levels.target);
        assert_eq!(up.resulting_balance, levels.target);

        let down = miller_orr_step(levels.lower - 100.0, &levels);
        assert_eq!(down.kind, ActionKind::TransferToCash);
        assert_relative_eq!(
            down.amount,
            levels.target - levels.lower + 100.0,
            max_relative = 1e-15
        );
        assert_eq!(down.resulting_balance, levels.target);
    }

    fn reference_stone() -> StoneParams<f64> {
        StoneParams::from_miller_orr(reference_miller_orr(), DEFAULT_INNER_FRACTION, 3).unwrap()
    }

    #[test]
    fn stone_default_band_is_ordered() {
        let p = reference_stone();
        let levels = miller_orr_levels(&p.miller_orr).unwrap();
        assert_eq!(p.outer_lower, levels.lower);
        assert_eq!(p.outer_upper, levels.upper);
        assert!(p.inner_lower > p.outer_lower && p.inner_upper < p.outer_upper);
        assert_relative_eq!(
            p.inner_upper - levels.target,
            0.8 * (levels.upper - levels.target),
            max_relative = 1e-12
        );
    }

    #[test]
    fn stone_interior_does_nothing() {
        let p = reference_stone();
        let a = stone_step(8_000.0, &p, &[1e6, 1e6, 1e6]).unwrap();
        assert_eq!(a, PolicyAction::none(8_000.0));
    }

    #[test]
    fn stone_rides_out_when_forecast_returns_inside() {
        let p = reference_stone();
        let balance = p.outer_upper + 500.0;
        let a = stone_step(balance, &p, &[-3_000.0, -2_000.0, -1_000.0]).unwrap();
        assert!(balance - 6_000.0 < p.inner_upper);
        assert_eq!(a.kind, ActionKind::None);
    }

    #[test]
    fn stone_acts_when_forecast_stays_outside() {
        let p = reference_stone();
        let balance = p.outer_upper + 500.0;
        // S = balance + 0 + 0 + 0 > inner_upper.
        let a = stone_step(balance, &p, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(a.kind, ActionKind::TransferFromCash);
        assert_eq!(a.resulting_balance, p.target().unwrap());
        assert_relative_eq!(
            a.amount,
            balance - p.target().unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn stone_low_side() {
        let p = reference_stone();
        let balance = p.outer_lower - 10.0;
        let a = stone_step(balance, &p, &[-5.0, 0.0, 0.0]).unwrap();
        assert_eq!(a.kind, ActionKind::TransferToCash);
        let ride = stone_step(balance, &p, &[2_000.0, 500.0, 0.0]).unwrap();
        assert_eq!(ride.kind, ActionKind::None);
    }

    #[test]
    fn stone_short_forecast_is_an_error() {
        assert!(matches!(
            stone_step(0.0, &reference_stone(), &[1.0]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn stone_rejects_unordered_limits() {
        let mut p = reference_stone();
        p.inner_upper = p.outer_upper + 1.0;
        assert!(p.validate().is_err());
        assert!(StoneParams::from_miller_orr(reference_miller_orr(), 1.5, 3).is_err());
    }

    proptest! {
        #[test]
        fn baumol_closed_form_matches_grid(
            p in 1e4..1e7f64, f in 1.0..500.0f64, k in 0.01..0.3f64,
        ) {
            let params = BaumolParams { period_demand: p, transfer_cost: f, rate: k };
            let s = baumol_optimal(&params).unwrap();
            let step = s.optimal_cash * 1e-3;
            let grid = grid_minimiser(&params, s.optimal_cash * 0.5, s.optimal_cash * 1.5, step);
            prop_assert!((grid - s.optimal_cash).abs() <= step);
            prop_assert_eq!(s.transfer_size(), 2.0 * s.avg_balance);
            prop_assert!((s.transfers_per_period * s.optimal_cash - p).abs() <= 4.0 * f64::EPSILON * p);
        }

        #[test]
        fn miller_orr_scale_equivariance(
            l in 0.0..1e5f64, f in 1.0..100.0f64, k in 1e-5..1e-2f64, var in 1.0..1e8f64, c in 0.1..10.0f64,
        ) {
            let p = MillerOrrParams { lower_limit: l, transfer_cost: f, daily_rate: k, daily_variance: var };
            let q = MillerOrrParams { lower_limit: c * l, transfer_cost: c * f, daily_rate: k, daily_variance: c * c * var };
            let (a, b) = (miller_orr_levels(&p).unwrap(), miller_orr_levels(&q).unwrap());
            prop_assert!((b.target - c * a.target).abs() <= 1e-10 * b.target.abs().max(1.0));
            prop_assert!((b.upper - c * a.upper).abs() <= 1e-10 * b.upper.abs().max(1.0));
        }

        #[test]
        fn miller_orr_step_stays_in_band(
            balance in -1e5..1e5f64,
        ) {
            let levels = miller_orr_levels(&reference_miller_orr()).unwrap();
            let a = miller_orr_step(balance, &levels);
            prop_assert!(a.resulting_balance >= levels.lower && a.resulting_balance <= levels.upper);
            if a.is_transfer() {
                prop_assert_eq!(a.resulting_balance, levels.target);
            }
        }

        #[test]
        fn stone_without_lookahead_is_miller_orr(
            flows in proptest::collection::vec(-3_000.0..3_000.0f64, 1..200),
        ) {
            let mo = reference_miller_orr();
            let levels = miller_orr_levels(&mo).unwrap();
            let stone = StoneParams {
                miller_orr: mo,
                outer_upper: levels.upper,
                outer_lower: levels.lower,
                inner_upper: levels.upper,
                inner_lower: levels.lower,
                lookahead_days: 0,
            };
            let (mut b1, mut b2) = (levels.target, levels.target);
            for f in flows {
                let a1 = miller_orr_step(b1 + f, &levels);
                let a2 = stone_step(b2 + f, &stone, &[]).unwrap();
                prop_assert_eq!(a1, a2);
                b1 = a1.resulting_balance;
                b2 = a2.resulting_balance;
            }
        }
    }
}
