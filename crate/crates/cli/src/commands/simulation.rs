//! `simulate`, `generate`, `advise`, `compare`.

use std::path::{Path, PathBuf};

use treasury_core::cash_policy::{
    miller_orr_levels, ActionKind, DEFAULT_INNER_FRACTION, DEFAULT_LOOKAHEAD_DAYS,
};
use treasury_core::simulator::{
    advise_model, compare_policies, generate_stream, simulate as run_simulation, BandSpec,
    CashFlowStream, FlowEntry, ForecastSource, Forecastability, GeneratorParams, PolicySpec,
    SimulationConfig, SimulationReport, StreamKind, TransferSize, DEFAULT_LONG_HORIZON_DAYS,
};
use treasury_core::{BaumolParams, MillerOrrParams, StoneParams};

use super::required;
use crate::args::{
    AdviseArgs, CompareArgs, ForecastArg, GenerateArgs, PolicyKind, SimulateArgs, StreamKindArg,
};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::input::{read_flows, read_json};
use crate::output::{cents, money, Report};

fn flows_path(flag: &Option<PathBuf>, s: &Settings) -> CliResult<PathBuf> {
    required(
        flag.clone().or_else(|| s.config.paths.flows.clone()),
        "--flows",
    )
}

fn action_name(kind: ActionKind) -> &'static str {
    match kind {
        ActionKind::None => "none",
        ActionKind::TransferToCash => "transfer_to_cash",
        ActionKind::TransferFromCash => "transfer_from_cash",
    }
}

fn policy_spec(
    a: &SimulateArgs,
    s: &Settings,
    stream: &CashFlowStream,
    daily_rate: Option<f64>,
) -> CliResult<(PolicySpec, f64)> {
    let band_params = || -> CliResult<MillerOrrParams> {
        Ok(MillerOrrParams {
            lower_limit: a.lower,
            transfer_cost: a.transfer_cost,
            daily_rate: daily_rate
                .ok_or_else(|| CliError::usage("band policies need --daily-rate or --rate"))?,
            daily_variance: a.variance.unwrap_or_else(|| stream.stats().variance()),
        })
    };
    let transfer = || -> CliResult<TransferSize> {
        match (a.transfer_size, a.demand) {
            (Some(c_star), _) => Ok(TransferSize::Fixed { c_star }),
            (None, Some(demand)) => Ok(TransferSize::Optimal(BaumolParams {
                period_demand: demand,
                transfer_cost: a.transfer_cost,
                rate: s.annual_rate(a.rate)?,
            })),
            (None, None) => Err(CliError::usage(
                "baumol/beranek need --transfer-size or --demand",
            )),
        }
    };
    Ok(match a.policy {
        PolicyKind::Passive => (PolicySpec::Passive, 0.0),
        PolicyKind::Baumol => {
            let transfer = transfer()?;
            (PolicySpec::Baumol { transfer }, transfer.resolve()?)
        }
        PolicyKind::Beranek => (
            PolicySpec::Beranek {
                transfer: transfer()?,
            },
            0.0,
        ),
        PolicyKind::MillerOrr => {
            let p = band_params()?;
            (
                PolicySpec::MillerOrr {
                    band: BandSpec::Params(p),
                },
                miller_orr_levels(&p)?.target,
            )
        }
        PolicyKind::Stone => {
            let inner = a
                .inner_fraction
                .or(s.config.horizon.inner_fraction)
                .unwrap_or(DEFAULT_INNER_FRACTION);
            let lookahead = a
                .lookahead
                .or(s.config.horizon.lookahead_days)
                .unwrap_or(DEFAULT_LOOKAHEAD_DAYS);
            let params = StoneParams::from_miller_orr(band_params()?, inner, lookahead)?;
            let forecast = if a.forecast == "oracle" {
                ForecastSource::Oracle
            } else {
                ForecastSource::Series {
                    values: read_flows(Path::new(&a.forecast))?.flows().collect(),
                }
            };
            (
                PolicySpec::Stone {
                    params,
                    forecast: Some(forecast),
                },
                params.target()?,
            )
        }
    })
}

pub fn simulate(a: &SimulateArgs, s: &Settings) -> CliResult<Report> {
    let path = flows_path(&a.flows, s)?;
    let stream = read_flows(&path)?;
    let daily_rate = match (a.daily_rate, a.rate.or(s.config.rates.annual_rate)) {
        (Some(d), _) => Some(d),
        (None, Some(r)) => Some(r / f64::from(s.day_count)),
        (None, None) => None,
    };
    let (policy, default_opening) = policy_spec(a, s, &stream, daily_rate)?;
    let cfg = SimulationConfig {
        label: a.label.clone().unwrap_or_else(|| policy.name().to_string()),
        policy,
        opening_balance: a.opening.unwrap_or(default_opening),
        holding_rate: a.holding_rate.or(daily_rate).unwrap_or(0.0),
        transfer_cost: a.transfer_cost,
        shortage_cost: a.shortage_cost,
        shortage_rate: a.shortage_rate,
        lcl_floor: a.floor,
    };
    let report = run_simulation(&stream, &cfg)?.rounded();
    if let Some(out) = a
        .trajectory
        .clone()
        .or_else(|| s.config.paths.trajectory.clone())
    {
        write_trajectory(&out, &report)?;
    }
    Report::fields(
        &report,
        vec![
            ("label", report.label.clone()),
            ("policy", report.policy.clone()),
            ("days", report.trajectory.len().to_string()),
            ("transfers", report.transfer_count.to_string()),
            ("days_below_floor", report.days_below_floor.to_string()),
            ("average_balance", money(report.average_balance)),
            ("final_balance", money(report.final_balance())),
            ("holding_cost", money(report.costs.holding)),
            ("transfer_cost", money(report.costs.transfer)),
            ("shortage_cost", money(report.costs.shortage)),
            ("total_cost", money(report.costs.total)),
        ],
    )
}

/// Tidy `day,flow,balance,action,amount` rows for plotting.
fn write_trajectory(path: &Path, report: &SimulationReport) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    w.write_record(["day", "flow", "balance", "action", "amount"])?;
    for d in &report.trajectory {
        w.write_record([
            d.day.to_string(),
            money(d.flow),
            money(d.balance),
            action_name(d.action).to_string(),
            money(d.amount),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Prints nothing when the stream goes to `--out`.
pub fn generate(a: &GenerateArgs) -> CliResult<Option<Report>> {
    let name = match a.kind {
        StreamKindArg::ConstantOut => "constant-out",
        StreamKindArg::ConstantIn => "constant-in",
        StreamKindArg::Seasonal => "seasonal",
        StreamKindArg::Gaussian => "gaussian",
        StreamKindArg::MeanReverting => "mean-reverting",
    };
    let params = GeneratorParams {
        amount: a.amount,
        mean: a.mean,
        stddev: a.stddev,
        lump: a.lump,
        every_days: a.every,
        reversion: a.reversion,
    };
    let mut stream = generate_stream(&StreamKind::from_name(name, &params)?, a.seed, a.days)?;
    for e in &mut stream.entries {
        e.net_flow = cents(e.net_flow);
    }
    if let Some(out) = &a.out {
        let mut w = csv::Writer::from_path(out)
            .map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
        w.write_record(["day", "net_flow"])?;
        for FlowEntry { day, net_flow } in &stream.entries {
            w.write_record([day.to_string(), money(*net_flow)])?;
        }
        w.flush()?;
        return Ok(None);
    }
    let rows = stream
        .entries
        .iter()
        .map(|e| vec![e.day.to_string(), money(e.net_flow)])
        .collect();
    Ok(Some(Report::table(&stream, &["day", "net_flow"], rows)?))
}

pub fn advise(a: &AdviseArgs, s: &Settings) -> CliResult<Report> {
    let stream = read_flows(&flows_path(&a.flows, s)?)?;
    let long = a
        .long_horizon
        .or(s.config.horizon.long_horizon_days)
        .unwrap_or(DEFAULT_LONG_HORIZON_DAYS);
    let forecastable = match (a.forecastable, a.horizon_days) {
        (Some(ForecastArg::Full), _) => Forecastability::Full,
        (Some(ForecastArg::Short), _) => Forecastability::ShortHorizon,
        (Some(ForecastArg::None), _) => Forecastability::None,
        (None, Some(days)) => Forecastability::from_horizon_days(Some(days), long),
        (None, None) => {
            return Err(CliError::usage(
                "advise needs --forecastable or --horizon-days",
            ))
        }
    };
    let mut advice = advise_model(&stream, forecastable)?;
    advice.net_flow = cents(advice.net_flow);
    let model = serde_json::to_value(advice.model)?
        .as_str()
        .unwrap_or_default()
        .to_string();
    Report::fields(
        &advice,
        vec![
            ("model", model),
            (
                "situation",
                advice
                    .situation
                    .map_or_else(|| "-".to_string(), |n| n.to_string()),
            ),
            ("net_flow", money(advice.net_flow)),
            ("rationale", advice.rationale.clone()),
        ],
    )
}

pub fn compare(a: &CompareArgs, s: &Settings) -> CliResult<Report> {
    let stream = read_flows(&flows_path(&a.flows, s)?)?;
    let configs_path = required(
        a.configs.clone().or_else(|| s.config.paths.configs.clone()),
        "--configs",
    )?;
    let configs: Vec<SimulationConfig> = read_json(&configs_path)?;
    let reports: Vec<SimulationReport> = compare_policies(&stream, &configs)?
        .iter()
        .map(|r| r.rounded())
        .collect();
    let rows = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (i + 1).to_string(),
                r.label.clone(),
                r.policy.clone(),
                r.transfer_count.to_string(),
                r.days_below_floor.to_string(),
                money(r.costs.holding),
                money(r.costs.transfer),
                money(r.costs.shortage),
                money(r.costs.total),
            ]
        })
        .collect();
    Report::table(
        &reports,
        &[
            "rank",
            "label",
            "policy",
            "transfers",
            "days_below_floor",
            "holding",
            "transfer",
            "shortage",
            "total",
        ],
        rows,
    )
}
