//! Closed-form calculators: valuation, reserves, policies, speculation.

use serde::{Deserialize, Serialize};
use treasury_core::cash_policy::{
    baumol_optimal, beranek_optimal, miller_orr_levels, DEFAULT_INNER_FRACTION,
    DEFAULT_LOOKAHEAD_DAYS,
};
use treasury_core::reserves::{self, PeriodBasis};
use treasury_core::speculative::speculative_verdict;
use treasury_core::valuation::{
    compare_strategies, delta_value, fcff as core_fcff, net_working_capital, Horizon,
};
use treasury_core::{
    BalanceSheetSnapshot, BaumolParams, LclInputs, MillerOrrParams, PeriodFinancials, ReserveLevel,
    SafetyStockInputs, SpeculativeInputs, StoneParams, StrategyVariant, ValuationContext,
};

use super::required;
use crate::args::{
    BaumolArgs, FcffArgs, FlowBasis, LclFlags, LclImpactArgs, MillerOrrArgs, NwcArgs,
    SafetyStockArgs, SpeculateArgs, StoneArgs, ValueArgs,
};
use crate::config::{check_day_count, Settings};
use crate::error::{CliError, CliResult};
use crate::input::read_json;
use crate::output::{cents, money, Report};

#[derive(Debug, Serialize, Deserialize)]
pub struct NwcReport {
    pub snapshot: BalanceSheetSnapshot,
    pub net_working_capital: f64,
}

pub fn nwc(a: &NwcArgs) -> CliResult<Report> {
    let snapshot = BalanceSheetSnapshot {
        current_assets: a
            .current_assets
            .unwrap_or(a.receivables + a.inventory + a.cash),
        current_liabilities: a.current_liabilities.unwrap_or(a.payables),
        receivables: a.receivables,
        inventory: a.inventory,
        cash: a.cash,
        payables: a.payables,
    };
    let value = cents(net_working_capital(&snapshot)?);
    Report::fields(
        &NwcReport {
            snapshot,
            net_working_capital: value,
        },
        vec![
            ("current_assets", money(snapshot.current_assets)),
            ("current_liabilities", money(snapshot.current_liabilities)),
            ("net_working_capital", money(value)),
        ],
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FcffReport {
    pub financials: PeriodFinancials,
    pub fcff: f64,
}

pub fn fcff(a: &FcffArgs, s: &Settings) -> CliResult<Report> {
    let financials = PeriodFinancials {
        cash_revenue: a.cash_revenue,
        fixed_costs: a.fixed_costs,
        variable_costs: a.variable_costs,
        non_cash_expenses: a.non_cash,
        tax_rate: s.tax_rate(a.tax_rate)?,
        nwc_growth: a.nwc_growth,
        capex: a.capex,
    };
    let value = cents(core_fcff(&financials)?);
    Report::fields(
        &FcffReport {
            financials,
            fcff: value,
        },
        vec![("fcff", money(value))],
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ValueReport {
    pub context: ValuationContext,
    pub deltas: Vec<f64>,
    pub delta_value: f64,
}

pub fn value(a: &ValueArgs, s: &Settings) -> CliResult<Report> {
    if let Some(path) = &a.strategies {
        let variants: Vec<StrategyVariant> = read_json(path)?;
        let mut ranked = compare_strategies(&variants)?;
        for r in &mut ranked {
            r.delta_value = cents(r.delta_value);
        }
        let rows = ranked
            .iter()
            .enumerate()
            .map(|(i, r)| {
                vec![
                    (i + 1).to_string(),
                    r.label.clone(),
                    money(r.delta_value),
                    r.discount_rate.to_string(),
                ]
            })
            .collect();
        return Report::table(
            &ranked,
            &["rank", "label", "delta_value", "discount_rate"],
            rows,
        );
    }
    let deltas = a
        .deltas
        .clone()
        .ok_or_else(|| CliError::usage("value needs --deltas or --strategies"))?;
    let rate = s.discount_rate(a.rate)?;
    let context = if a.perpetuity {
        ValuationContext::perpetuity(rate)
    } else {
        let periods = a
            .periods
            .or(s.config.horizon.periods)
            .unwrap_or(deltas.len());
        ValuationContext::finite(rate, periods)
    };
    let v = cents(delta_value(&deltas, &context)?);
    let horizon = match context.horizon {
        Horizon::Finite(n) => n.to_string(),
        Horizon::Perpetuity => "perpetuity".to_string(),
    };
    Report::fields(
        &ValueReport {
            context,
            deltas,
            delta_value: v,
        },
        vec![
            ("discount_rate", rate.to_string()),
            ("horizon", horizon),
            ("delta_value", money(v)),
        ],
    )
}

pub fn baumol(a: &BaumolArgs, s: &Settings, sweep: bool) -> CliResult<Report> {
    let p = BaumolParams {
        period_demand: a.demand,
        transfer_cost: a.transfer_cost,
        rate: s.annual_rate(a.rate)?,
    };
    let mut sol = if sweep {
        beranek_optimal(&p)?
    } else {
        baumol_optimal(&p)?
    };
    sol.optimal_cash = cents(sol.optimal_cash);
    sol.avg_balance = cents(sol.avg_balance);
    Report::fields(
        &sol,
        vec![
            ("optimal_cash", money(sol.optimal_cash)),
            (
                "transfers_per_period",
                format!("{:.4}", sol.transfers_per_period),
            ),
            ("avg_balance", money(sol.avg_balance)),
            ("total_cost", money(p.total_cost(sol.optimal_cash))),
        ],
    )
}

fn miller_orr_params(a: &MillerOrrArgs, s: &Settings) -> CliResult<MillerOrrParams> {
    let daily_variance = match (a.variance, a.stddev) {
        (Some(v), _) => v,
        (None, Some(sd)) => sd * sd,
        (None, None) => return Err(CliError::usage("missing --variance or --stddev")),
    };
    Ok(MillerOrrParams {
        lower_limit: a.lower,
        transfer_cost: a.transfer_cost,
        daily_rate: s.daily_rate(a.daily_rate, a.rate)?,
        daily_variance,
    })
}

pub fn miller_orr(a: &MillerOrrArgs, s: &Settings) -> CliResult<Report> {
    let mut levels = miller_orr_levels(&miller_orr_params(a, s)?)?;
    levels.lower = cents(levels.lower);
    levels.target = cents(levels.target);
    levels.upper = cents(levels.upper);
    Report::fields(
        &levels,
        vec![
            ("lower", money(levels.lower)),
            ("target", money(levels.target)),
            ("upper", money(levels.upper)),
            ("spread", money(levels.spread())),
        ],
    )
}

pub fn stone(a: &StoneArgs, s: &Settings) -> CliResult<Report> {
    let inner = a
        .inner_fraction
        .or(s.config.horizon.inner_fraction)
        .unwrap_or(DEFAULT_INNER_FRACTION);
    let lookahead = a
        .lookahead
        .or(s.config.horizon.lookahead_days)
        .unwrap_or(DEFAULT_LOOKAHEAD_DAYS);
    let p = StoneParams::from_miller_orr(miller_orr_params(&a.band, s)?, inner, lookahead)?;
    let target = p.target()?;
    let rounded = StoneParams {
        outer_upper: cents(p.outer_upper),
        outer_lower: cents(p.outer_lower),
        inner_upper: cents(p.inner_upper),
        inner_lower: cents(p.inner_lower),
        ..p
    };
    Report::fields(
        &rounded,
        vec![
            ("outer_lower", money(p.outer_lower)),
            ("inner_lower", money(p.inner_lower)),
            ("target", money(target)),
            ("inner_upper", money(p.inner_upper)),
            ("outer_upper", money(p.outer_upper)),
            ("lookahead_days", p.lookahead_days.to_string()),
        ],
    )
}

fn lcl_inputs(f: &LclFlags, s: &Settings) -> CliResult<LclInputs> {
    let basis = check_day_count(f.basis.unwrap_or(s.day_count))?;
    let mut inputs = LclInputs::from_annual_rate(
        s.annual_rate(f.rate)?,
        basis,
        required(f.avg_transfer, "--avg-transfer")?,
        required(f.flow_sum, "--flow-sum")?,
        required(f.stddev, "--stddev")?,
        required(f.shortage_cost, "--shortage-cost")?,
    );
    inputs.flow_basis = match f.flow_basis {
        FlowBasis::Day => PeriodBasis::Day,
        FlowBasis::Week => PeriodBasis::Week,
        FlowBasis::Month => PeriodBasis::Month,
        FlowBasis::Year => PeriodBasis::Year,
    };
    Ok(inputs)
}

/// Warnings go to stderr; the level is still reported.
fn warn_level(level: &ReserveLevel) {
    if level.degenerate {
        eprintln!(
            "warning: log argument >= 1, no precautionary balance pays for itself; level set to 0"
        );
    }
    if level.mixed_basis {
        eprintln!("warning: daily rate combined with a non-daily flow sum; result follows the inputs as given");
    }
}

fn level_report(level: ReserveLevel) -> CliResult<Report> {
    let level = ReserveLevel {
        value: cents(level.value),
        ..level
    };
    Report::fields(
        &level,
        vec![
            ("value", money(level.value)),
            ("degenerate", level.degenerate.to_string()),
            ("mixed_basis", level.mixed_basis.to_string()),
        ],
    )
}

pub fn lcl(f: &LclFlags, s: &Settings) -> CliResult<Report> {
    let level = reserves::lcl(&lcl_inputs(f, s)?)?;
    warn_level(&level);
    level_report(level)
}

pub fn safety_stock(a: &SafetyStockArgs) -> CliResult<Report> {
    let inputs = SafetyStockInputs {
        holding_cost_rate: a.holding_cost,
        order_quantity: a.order_quantity,
        unit_price: a.unit_price,
        demand: a.demand,
        usage_stddev: a.stddev,
        stockout_cost: a.stockout_cost,
    };
    let level = reserves::safety_stock(&inputs)?;
    warn_level(&level);
    level_report(level)
}

pub fn lcl_impact(a: &LclImpactArgs, s: &Settings) -> CliResult<Report> {
    let new_level = match a.new_level {
        Some(v) => v,
        None => {
            let level = reserves::lcl(&lcl_inputs(&a.lcl, s)?)?;
            warn_level(&level);
            level.value
        }
    };
    let rate = s.annual_rate(a.lcl.rate)?;
    let impact = reserves::lcl_value_impact(new_level, a.old_level, rate, s.tax_rate(a.tax_rate)?)?;
    let impact = treasury_core::ValueImpact {
        nwc_growth: cents(impact.nwc_growth),
        yearly_alt_cost: cents(impact.yearly_alt_cost),
        value_change: cents(impact.value_change),
    };
    Report::fields(
        &impact,
        vec![
            ("nwc_growth", money(impact.nwc_growth)),
            ("yearly_alt_cost", money(impact.yearly_alt_cost)),
            ("value_change", money(impact.value_change)),
        ],
    )
}

pub fn speculate(a: &SpeculateArgs, s: &Settings) -> CliResult<Report> {
    let inputs = SpeculativeInputs {
        units: a.units,
        price: a.price,
        daily_price_stddev: a.sigma,
        up_probability: a.up_probability,
        annual_rate: s.annual_rate(a.rate)?,
        day_count: s.day_count,
    };
    let mut v = speculative_verdict(&inputs)?;
    v.expected_benefit = cents(v.expected_benefit);
    v.daily_cost = cents(v.daily_cost);
    Report::fields(
        &v,
        vec![
            ("expected_benefit", money(v.expected_benefit)),
            ("daily_cost", money(v.daily_cost)),
            (
                "verdict",
                if v.hold { "HOLD" } else { "DEPLOY" }.to_string(),
            ),
        ],
    )
}
