//! Firm-value calculus: net working capital, free cash flow to firm, and the
//! discounted value change of a stream of cash-flow deltas.
//!
//! A cash decision changes net working capital, which changes free cash
//! flow, which changes firm value. Every function here is a pure function of
//! its inputs.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::scalar::{check_finite, check_non_negative, check_positive};
use crate::{Error, Real, Result};

/// Tolerance for `current_assets = receivables + inventory + cash`.
pub const BALANCE_TOLERANCE: f64 = 0.01;

/// Working-capital lines of a balance sheet at one date.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceSheetSnapshot<T> {
    pub current_assets: T,
    pub current_liabilities: T,
    pub receivables: T,
    pub inventory: T,
    pub cash: T,
    pub payables: T,
}

impl<T: Real> BalanceSheetSnapshot<T> {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("current_assets", self.current_assets)?;
        check_non_negative("current_liabilities", self.current_liabilities)?;
        check_non_negative("receivables", self.receivables)?;
        check_non_negative("inventory", self.inventory)?;
        check_non_negative("cash", self.cash)?;
        check_non_negative("payables", self.payables)?;
        let parts = self.receivables + self.inventory + self.cash;
        if (self.current_assets - parts).abs() > T::lit(BALANCE_TOLERANCE) {
            return Err(Error::input(format!(
                "current_assets ({:?}) differs from receivables + inventory + cash ({:?})",
                self.current_assets, parts
            )));
        }
        Ok(())
    }

    /// Working capital from the component lines: receivables + inventory +
    /// cash - payables.
    pub fn component_nwc(&self) -> T {
        self.receivables + self.inventory + self.cash - self.payables
    }
}

/// Net working capital, current assets less current liabilities.
pub fn net_working_capital<T: Real>(snapshot: &BalanceSheetSnapshot<T>) -> Result<T> {
    snapshot.validate()?;
    Ok(snapshot.current_assets - snapshot.current_liabilities)
}

/// One period of operating figures feeding free cash flow to firm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodFinancials<T> {
    pub cash_revenue: T,
    pub fixed_costs: T,
    pub variable_costs: T,
    /// Depreciation and other non-cash charges.
    pub non_cash_expenses: T,
    /// Effective tax rate in `[0, 1]`.
    pub tax_rate: T,
    /// Growth of net working capital in the period.
    pub nwc_growth: T,
    pub capex: T,
}

impl<T: Real> PeriodFinancials<T> {
    pub fn validate(&self) -> Result<()> {
        check_finite("cash_revenue", self.cash_revenue)?;
        check_finite("fixed_costs", self.fixed_costs)?;
        check_finite("variable_costs", self.variable_costs)?;
        check_non_negative("non_cash_expenses", self.non_cash_expenses)?;
        check_finite("nwc_growth", self.nwc_growth)?;
        check_finite("capex", self.capex)?;
        check_finite("tax_rate", self.tax_rate)?;
        if self.tax_rate < T::zero() || self.tax_rate > T::one() {
            return Err(Error::input("tax_rate must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Multiplies every money field by `factor`, leaving the tax rate alone.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            cash_revenue: self.cash_revenue * factor,
            fixed_costs: self.fixed_costs * factor,
            variable_costs: self.variable_costs * factor,
            non_cash_expenses: self.non_cash_expenses * factor,
            tax_rate: self.tax_rate,
            nwc_growth: self.nwc_growth * factor,
            capex: self.capex * factor,
        }
    }
}

/// Free cash flow to firm:
/// `(CR - FC - VC - NCE)(1 - T) + NCE - dNWC - Capex`.
pub fn fcff<T: Real>(p: &PeriodFinancials<T>) -> Result<T> {
    p.validate()?;
    let ebit = p.cash_revenue - p.fixed_costs - p.variable_costs - p.non_cash_expenses;
    Ok(ebit * (T::one() - p.tax_rate) + p.non_cash_expenses - p.nwc_growth - p.capex)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizon {
    /// Deltas for periods `1..=n`.
    Finite(usize),
    /// Level delta repeated forever, plus an optional time-zero delta.
    Perpetuity,
}

/// Discount rate (the weighted average cost of capital) and horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValuationContext<T> {
    pub discount_rate: T,
    pub horizon: Horizon,
}

impl<T: Real> ValuationContext<T> {
    pub fn finite(discount_rate: T, periods: usize) -> Self {
        Self {
            discount_rate,
            horizon: Horizon::Finite(periods),
        }
    }

    pub fn perpetuity(discount_rate: T) -> Self {
        Self {
            discount_rate,
            horizon: Horizon::Perpetuity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("discount_rate", self.discount_rate)?;
        if self.discount_rate <= T::zero() {
            return Err(Error::domain("discount_rate must be > 0"));
        }
        if self.horizon == Horizon::Finite(0) {
            return Err(Error::input("finite horizon needs at least one period"));
        }
        Ok(())
    }
}

/// Present value of cash-flow deltas.
///
/// With a finite horizon `deltas[i]` is the delta of period `i + 1` and the
/// slice length must equal the horizon. In perpetuity mode `deltas` is
/// either `[level]` or `[time_zero, level]`, giving `time_zero + level / k`.
/// Any tax scaling of the level delta is the caller's job.
pub fn delta_value<T: Real>(deltas: &[T], ctx: &ValuationContext<T>) -> Result<T> {
    ctx.validate()?;
    for d in deltas {
        check_finite("cash-flow delta", *d)?;
    }
    let k = ctx.discount_rate;
    match ctx.horizon {
        Horizon::Finite(n) => {
            if deltas.is_empty() {
                return Err(Error::input("finite horizon needs at least one delta"));
            }
            if deltas.len() != n {
                return Err(Error::input(format!(
                    "expected {n} deltas for the finite horizon, got {}",
                    deltas.len()
                )));
            }
            let growth = T::one() + k;
            let mut total = T::zero();
            for (i, d) in deltas.iter().enumerate() {
                let t = i32::try_from(i + 1).map_err(|_| Error::input("horizon too long"))?;
                total = total + *d / growth.powi(t);
            }
            Ok(total)
        }
        Horizon::Perpetuity => match *deltas {
            [level] => Ok(level / k),
            [time_zero, level] => Ok(time_zero + level / k),
            _ => Err(Error::input(
                "perpetuity takes [level] or [time_zero, level]",
            )),
        },
    }
}

/// A working-capital strategy (aggressive, moderate, conservative, ...)
/// with its own projected financials and cost of capital.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyVariant<T> {
    pub label: String,
    pub periods: Vec<PeriodFinancials<T>>,
    /// Riskier policies typically carry a higher rate.
    pub discount_rate: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedStrategy<T> {
    pub label: String,
    pub delta_value: T,
    pub discount_rate: T,
}

/// Values each variant as the discounted sum of its per-period FCFF at its
/// own rate and ranks them best first.
///
/// Ties go to the lower discount rate, then to the lexicographically
/// smaller label.
pub fn compare_strategies<T: Real>(
    variants: &[StrategyVariant<T>],
) -> Result<Vec<RankedStrategy<T>>> {
    if variants.len() < 2 {
        return Err(Error::input("need at least two strategy variants"));
    }
    let horizon = variants[0].periods.len();
    if horizon == 0 {
        return Err(Error::input(format!(
            "variant '{}' has no periods",
            variants[0].label
        )));
    }
    let mut ranked = Vec::with_capacity(variants.len());
    for v in variants {
        if v.periods.len() != horizon {
            return Err(Error::input(format!(
                "variant '{}' spans {} periods, expected {horizon}",
                v.label,
                v.periods.len()
            )));
        }
        check_positive("discount_rate", v.discount_rate)?;
        let flows = v.periods.iter().map(fcff).collect::<Result<Vec<_>>>()?;
        let value = delta_value(&flows, &ValuationContext::finite(v.discount_rate, horizon))?;
        ranked.push(RankedStrategy {
            label: v.label.clone(),
            delta_value: value,
            discount_rate: v.discount_rate,
        });
    }
    ranked.sort_by(|a, b| {
        b.delta_value
            .partial_cmp(&a.delta_value)
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                a.discount_rate
                    .partial_cmp(&b.discount_rate)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| a.label.cmp(&b.label))
    });
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn snapshot(ar: f64, inv: f64, cash: f64, cl: f64, ap: f64) -> BalanceSheetSnapshot<f64> {
        BalanceSheetSnapshot {
            current_assets: ar + inv + cash,
            current_liabilities: cl,
            receivables: ar,
            inventory: inv,
            cash,
            payables: ap,
        }
    }

    fn period(
        cr: f64,
        fc: f64,
        vc: f64,
        nce: f64,
        t: f64,
        dnwc: f64,
        capex: f64,
    ) -> PeriodFinancials<f64> {
        PeriodFinancials {
            cash_revenue: cr,
            fixed_costs: fc,
            variable_costs: vc,
            non_cash_expenses: nce,
            tax_rate: t,
            nwc_growth: dnwc,
            capex,
        }
    }

    #[test]
    fn nwc_examples() {
        assert_eq!(
            net_working_capital(&snapshot(60.0, 30.0, 10.0, 40.0, 40.0)).unwrap(),
            60.0
        );
        assert_eq!(
            net_working_capital(&snapshot(0.0, 0.0, 0.0, 0.0, 0.0)).unwrap(),
            0.0
        );

        // AAR=30, ZAP=20, G=10, AAP=25, CL=25: both sides give 35.
        let b = snapshot(30.0, 20.0, 10.0, 25.0, 25.0);
        assert_eq!(b.current_assets, 60.0);
        assert_eq!(net_working_capital(&b).unwrap(), 35.0);
        assert_eq!(b.component_nwc(), 35.0);
    }

    #[test]
    fn nwc_rejects_inconsistent_snapshot() {
        let mut b = snapshot(30.0, 20.0, 10.0, 25.0, 25.0);
        b.current_assets = 61.0;
        assert!(matches!(net_working_capital(&b), Err(Error::Input(_))));
        b.current_assets = 60.005;
        assert!(net_working_capital(&b).is_ok());
        let mut neg = snapshot(30.0, 20.0, 10.0, 25.0, 25.0);
        neg.payables = -1.0;
        assert!(net_working_capital(&neg).is_err());
    }

    #[test]
    fn fcff_examples() {
        assert_eq!(
            fcff(&period(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)).unwrap(),
            0.0
        );
        // (1000-200-300-100)*0.8 + 100 - 50 - 150 = 320 + 100 - 200 = 220
        assert_relative_eq!(
            fcff(&period(1000.0, 200.0, 300.0, 100.0, 0.2, 50.0, 150.0)).unwrap(),
            220.0,
            epsilon = 1e-9
        );
        assert_eq!(
            fcff(&period(1000.0, 200.0, 300.0, 100.0, 0.0, 0.0, 0.0)).unwrap(),
            500.0
        );
    }

    #[test]
    fn fcff_rejects_bad_tax() {
        assert!(fcff(&period(1.0, 0.0, 0.0, 0.0, 1.5, 0.0, 0.0)).is_err());
        assert!(fcff(&period(1.0, 0.0, 0.0, -1.0, 0.2, 0.0, 0.0)).is_err());
    }

    #[test]
    fn fcff_works_in_f32() {
        let p = PeriodFinancials::<f32> {
            cash_revenue: 1000.0,
            fixed_costs: 200.0,
            variable_costs: 300.0,
            non_cash_expenses: 100.0,
            tax_rate: 0.0,
            nwc_growth: 0.0,
            capex: 0.0,
        };
        assert_eq!(fcff(&p).unwrap(), 500.0);
    }

    #[test]
    fn delta_value_examples() {
        let ctx = ValuationContext::finite(0.1, 3);
        assert_eq!(delta_value(&[0.0, 0.0, 0.0], &ctx).unwrap(), 0.0);
        assert_relative_eq!(
            delta_value(&[110.0], &ValuationContext::finite(0.10, 1)).unwrap(),
            100.0,
            epsilon = 1e-9
        );
        // Precautionary-cash case: -142,961.42 up front, -25,733 * 0.8 forever at 18%.
        let v: f64 = delta_value(
            &[-142_961.42, -25_733.0 * 0.8],
            &ValuationContext::perpetuity(0.18),
        )
        .unwrap();
        assert!((v - -257_330.0).abs() <= 5.0, "{v}");
    }

    #[test]
    fn delta_value_errors() {
        assert!(matches!(
            delta_value(&[1.0], &ValuationContext::finite(0.0, 1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            delta_value(&[1.0], &ValuationContext::perpetuity(-0.1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            delta_value::<f64>(&[], &ValuationContext::finite(0.1, 1)),
            Err(Error::Input(_))
        ));
        assert!(delta_value(&[1.0, 2.0], &ValuationContext::finite(0.1, 3)).is_err());
        assert!(delta_value(&[1.0, 2.0, 3.0], &ValuationContext::perpetuity(0.1)).is_err());
    }

    /// Brute-force DCF, kept apart from `delta_value`.
    fn brute_dcf(v: &StrategyVariant<f64>) -> f64 {
        let mut factor = 1.0;
        let mut total = 0.0;
        for p in &v.periods {
            factor /= 1.0 + v.discount_rate;
            let f = (p.cash_revenue - p.fixed_costs - p.variable_costs - p.non_cash_expenses)
                * (1.0 - p.tax_rate)
                + p.non_cash_expenses
                - p.nwc_growth
                - p.capex;
            total += f * factor;
        }
        total
    }

    fn variant(label: &str, cr: f64, k: f64, n: usize) -> StrategyVariant<f64> {
        StrategyVariant {
            label: label.to_string(),
            periods: vec![period(cr, 200.0, 0.3 * cr, 50.0, 0.19, 0.05 * cr, 40.0); n],
            discount_rate: k,
        }
    }

    #[test]
    fn identical_variants_tie_break_on_label() {
        let ranked =
            compare_strategies(&[variant("b", 1000.0, 0.1, 4), variant("a", 1000.0, 0.1, 4)])
                .unwrap();
        assert_eq!(ranked[0].delta_value, ranked[1].delta_value);
        assert_eq!(ranked[0].label, "a");
    }

    #[test]
    fn equal_value_prefers_lower_rate() {
        // 150 / 1.5 and 125 / 1.25 are both exactly 100.
        let one = |label: &str, cr: f64, k: f64| StrategyVariant {
            label: label.to_string(),
            periods: vec![period(cr, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)],
            discount_rate: k,
        };
        let ranked = compare_strategies(&[one("a", 150.0, 0.5), one("b", 125.0, 0.25)]).unwrap();
        assert_eq!(ranked[0].delta_value, 100.0);
        assert_eq!(ranked[1].delta_value, 100.0);
        assert_eq!(ranked[0].label, "b");
    }

    #[test]
    fn ranking_matches_brute_force() {
        let a = variant("high-revenue", 1300.0, 0.16, 5);
        let b = variant("low-revenue", 1000.0, 0.08, 5);
        let ranked = compare_strategies(&[a.clone(), b.clone()]).unwrap();
        let (va, vb) = (brute_dcf(&a), brute_dcf(&b));
        let expected_first = if va > vb {
            "high-revenue"
        } else {
            "low-revenue"
        };
        assert_eq!(ranked[0].label, expected_first);
        for r in &ranked {
            let oracle = if r.label == "high-revenue" { va } else { vb };
            assert_relative_eq!(r.delta_value, oracle, max_relative = 1e-12);
        }
    }

    #[test]
    fn medium_liquidity_wins() {
        // Low liquidity loses sales, high liquidity ties up capital and costs.
        let mk = |label: &str, cr: f64, vc: f64, dnwc: f64, k: f64| StrategyVariant {
            label: label.to_string(),
            periods: vec![period(cr, 300.0, vc, 80.0, 0.19, dnwc, 60.0); 6],
            discount_rate: k,
        };
        let variants = vec![
            mk("aggressive", 900.0, 300.0, 10.0, 0.14),
            mk("medium", 1100.0, 380.0, 40.0, 0.12),
            mk("conservative", 1200.0, 520.0, 110.0, 0.11),
        ];
        let oracle: Vec<f64> = variants.iter().map(brute_dcf).collect();
        assert!(oracle[1] > oracle[0] && oracle[1] > oracle[2], "{oracle:?}");
        let ranked = compare_strategies(&variants).unwrap();
        assert_eq!(ranked[0].label, "medium");
    }

    #[test]
    fn compare_errors() {
        assert!(compare_strategies(&[variant("a", 1.0, 0.1, 2)]).is_err());
        assert!(
            compare_strategies(&[variant("a", 1.0, 0.1, 2), variant("b", 1.0, 0.1, 3)]).is_err()
        );
        assert!(
            compare_strategies(&[variant("a", 1.0, 0.1, 2), variant("b", 1.0, 0.0, 2)]).is_err()
        );
    }

    proptest! {
        #[test]
        fn nwc_decompositions_agree(
            ar in 0.0..1e6f64, inv in 0.0..1e6f64, cash in 0.0..1e6f64, ap in 0.0..1e6f64,
        ) {
            let b = snapshot(ar, inv, cash, ap, ap);
            prop_assert_eq!(net_working_capital(&b).unwrap(), (ar + inv + cash) - ap);
            prop_assert!((net_working_capital(&b).unwrap() - b.component_nwc()).abs() <= 1e-9 * (1.0 + b.current_assets));
        }

        #[test]
        fn fcff_linear_in_revenue(
            cr in -1e6..1e6f64, x in -1e6..1e6f64, t in 0.0..=1.0f64,
            fc in 0.0..1e5f64, vc in 0.0..1e5f64, nce in 0.0..1e5f64,
        ) {
            let p = period(cr, fc, vc, nce, t, 10.0, 20.0);
            let mut q = p;
            q.cash_revenue += x;
            let diff = fcff(&q).unwrap() - fcff(&p).unwrap();
            prop_assert!((diff - x * (1.0 - t)).abs() <= 1e-9 * (1.0 + cr.abs() + x.abs()));
        }

        #[test]
        fn delta_value_is_linear(
            a in proptest::collection::vec(-1e5..1e5f64, 1..20),
            b_seed in -1e5..1e5f64,
            k in 0.01..0.5f64,
        ) {
            let b: Vec<f64> = a.iter().enumerate().map(|(i, x)| b_seed - x * (i as f64)).collect();
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let ctx = ValuationContext::finite(k, a.len());
            let lhs = delta_value(&sum, &ctx).unwrap();
            let rhs = delta_value(&a, &ctx).unwrap() + delta_value(&b, &ctx).unwrap();
            let scale: f64 = sum.iter().chain(&a).chain(&b).map(|x| x.abs()).sum::<f64>() + 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn ranking_invariant_under_common_scaling(
            crs in proptest::collection::vec(500.0..2000.0f64, 3),
            ks in proptest::collection::vec(0.05..0.2f64, 3),
            factor in 0.01..100.0f64,
        ) {
            let variants: Vec<_> = crs.iter().zip(&ks).enumerate()
                .map(|(i, (cr, k))| variant(&format!("v{i}"), *cr, *k, 4))
                .collect();
            let scaled: Vec<_> = variants.iter().map(|v| StrategyVariant {
                label: v.label.clone(),
                periods: v.periods.iter().map(|p| p.scaled(factor)).collect(),
                discount_rate: v.discount_rate,
            }).collect();
            let a: Vec<String> = compare_strategies(&variants).unwrap().into_iter().map(|r| r.label).collect();
            let b: Vec<String> = compare_strategies(&scaled).unwrap().into_iter().map(|r| r.label).collect();
            prop_assert_eq!(a, b);
        }
    }
}
