//! Day-by-day policy simulation over cash-flow streams.
//!
//! Each simulated day:
//!
//! 1. the day's net flow hits the balance,
//! 2. the policy looks at the balance and may transfer,
//! 3. costs accrue on the end-of-day balance.
//!
//! Holding cost is charged on positive balances only. A balance below
//! `max(0, lcl_floor)` is a shortage day instead.
//!
//! Synthetic streams use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, and `rand_distr::StandardNormal` for Gaussian draws.
//! Both are fully specified algorithms, so a given seed produces the same
//! stream on every platform.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cash_policy::{
    baumol_optimal, baumol_step, beranek_step, miller_orr_levels, miller_orr_step, stone_step,
    ActionKind, BaumolParams, MillerOrrLevels, MillerOrrParams, PolicyAction, StoneParams,
};
use crate::{round_cents, Error, Result};

/// Forecast horizon (days) separating full from short-horizon forecasting.
pub const DEFAULT_LONG_HORIZON_DAYS: u32 = 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowEntry {
    pub day: i64,
    pub net_flow: f64,
}

/// Dated net daily flows, days strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CashFlowStream {
    pub source: String,
    pub entries: Vec<FlowEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamStats {
    pub days: usize,
    pub total: f64,
    pub total_inflow: f64,
    pub total_outflow: f64,
    pub mean: f64,
    /// Sample standard deviation (n - 1); 0 for a single day.
    pub stddev: f64,
}

impl StreamStats {
    pub fn variance(&self) -> f64 {
        self.stddev * self.stddev
    }
}

impl CashFlowStream {
    /// Numbers `flows` as days 1, 2, 3, ...
    pub fn from_flows(source: impl Into<String>, flows: impl IntoIterator<Item = f64>) -> Self {
        let entries = flows
            .into_iter()
            .zip(1i64..)
            .map(|(net_flow, day)| FlowEntry { day, net_flow })
            .collect();
        Self {
            source: source.into(),
            entries,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for w in self.entries.windows(2) {
            if w[1].day <= w[0].day {
                return Err(Error::input(format!(
                    "day {} does not follow day {}",
                    w[1].day, w[0].day
                )));
            }
        }
        if let Some(e) = self.entries.iter().find(|e| !e.net_flow.is_finite()) {
            return Err(Error::input(format!("non-finite flow on day {}", e.day)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn flows(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.net_flow)
    }

    pub fn total(&self) -> f64 {
        self.flows().sum()
    }

    pub fn stats(&self) -> StreamStats {
        let n = self.len();
        let total = self.total();
        let mean = if n == 0 { 0.0 } else { total / n as f64 };
        let ss: f64 = self.flows().map(|f| (f - mean).powi(2)).sum();
        StreamStats {
            days: n,
            total,
            total_inflow: self.flows().filter(|f| *f > 0.0).sum(),
            total_outflow: -self.flows().filter(|f| *f < 0.0).sum::<f64>(),
            mean,
            stddev: if n > 1 {
                (ss / (n - 1) as f64).sqrt()
            } else {
                0.0
            },
        }
    }
}

/// Synthetic stream families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamKind {
    /// `-amount` every day.
    ConstantOut { amount: f64 },
    /// `+amount` every day.
    ConstantIn { amount: f64 },
    /// `lump` on the first day of every `every_days` block, `-daily_outflow`
    /// every day.
    Seasonal {
        lump: f64,
        every_days: u32,
        daily_outflow: f64,
    },
    /// i.i.d. normal flows.
    Gaussian { mean: f64, stddev: f64 },
    /// Flows pull the cumulative position back to zero:
    /// `flow_t = -reversion * X_{t-1} + stddev * e_t`, `X_t = X_{t-1} + flow_t`.
    MeanReverting { stddev: f64, reversion: f64 },
}

/// Loose parameter bag for building a [`StreamKind`] from a name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub amount: f64,
    pub mean: f64,
    pub stddev: f64,
    pub lump: f64,
    pub every_days: u32,
    pub reversion: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            amount: 0.0,
            mean: 0.0,
            stddev: 0.0,
            lump: 0.0,
            every_days: 30,
            reversion: 0.3,
        }
    }
}

impl StreamKind {
    pub fn from_name(name: &str, p: &GeneratorParams) -> Result<Self> {
        let kind = match name {
            "constant_out" | "constant-out" => StreamKind::ConstantOut { amount: p.amount },
            "constant_in" | "constant-in" => StreamKind::ConstantIn { amount: p.amount },
            "seasonal" => StreamKind::Seasonal {
                lump: p.lump,
                every_days: p.every_days,
                daily_outflow: p.amount,
            },
            "gaussian" => StreamKind::Gaussian {
                mean: p.mean,
                stddev: p.stddev,
            },
            "mean_reverting" | "mean-reverting" => StreamKind::MeanReverting {
                stddev: p.stddev,
                reversion: p.reversion,
            },
            other => return Err(Error::input(format!("unknown stream kind '{other}'"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        match self {
            StreamKind::ConstantOut { .. } => "constant_out",
            StreamKind::ConstantIn { .. } => "constant_in",
            StreamKind::Seasonal { .. } => "seasonal",
            StreamKind::Gaussian { .. } => "gaussian",
            StreamKind::MeanReverting { .. } => "mean_reverting",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            StreamKind::ConstantOut { amount } | StreamKind::ConstantIn { amount } => {
                amount.is_finite()
            }
            StreamKind::Seasonal {
                lump,
                every_days,
                daily_outflow,
            } => lump.is_finite() && daily_outflow.is_finite() && every_days > 0,
            StreamKind::Gaussian { mean, stddev } => {
                mean.is_finite() && stddev.is_finite() && stddev >= 0.0
            }
            StreamKind::MeanReverting { stddev, reversion } => {
                stddev.is_finite() && stddev >= 0.0 && (0.0..=2.0).contains(&reversion)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input(format!(
                "invalid parameters for {} stream",
                self.name()
            )))
        }
    }
}

/// Deterministic synthetic stream for `(kind, seed, days)`.
pub fn generate_stream(kind: &StreamKind, seed: u64, days: usize) -> Result<CashFlowStream> {
    if days == 0 {
        return Err(Error::input("days must be >= 1"));
    }
    kind.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flows: Vec<f64> = match *kind {
        StreamKind::ConstantOut { amount } => vec![-amount; days],
        StreamKind::ConstantIn { amount } => vec![amount; days],
        StreamKind::Seasonal {
            lump,
            every_days,
            daily_outflow,
        } => (0..days)
            .map(|i| {
                if i % every_days as usize == 0 {
                    lump - daily_outflow
                } else {
                    -daily_outflow
                }
            })
            .collect(),
        StreamKind::Gaussian { mean, stddev } => (0..days)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                mean + stddev * z
            })
            .collect(),
        StreamKind::MeanReverting { stddev, reversion } => {
            let mut position = 0.0;
            (0..days)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let flow = -reversion * position + stddev * z;
                    position += flow;
                    flow
                })
                .collect()
        }
    };
    Ok(CashFlowStream::from_flows(
        format!("{}:seed={seed}", kind.name()),
        flows,
    ))
}

/// How far ahead flows can be forecast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Forecastability {
    Full,
    ShortHorizon,
    None,
}

impl Forecastability {
    /// `None` days means nothing can be forecast; horizons shorter than
    /// `long_horizon_days` count as short.
    pub fn from_horizon_days(days: Option<u32>, long_horizon_days: u32) -> Self {
        match days {
            None | Some(0) => Forecastability::None,
            Some(d) if d >= long_horizon_days => Forecastability::Full,
            Some(_) => Forecastability::ShortHorizon,
        }
    }
}

impl std::str::FromStr for Forecastability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Forecastability::Full),
            "short_horizon" | "short-horizon" | "short" => Ok(Forecastability::ShortHorizon),
            "none" => Ok(Forecastability::None),
            other => Err(Error::input(format!("unknown forecastability '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CashModel {
    Baumol,
    Beranek,
    MillerOrr,
    Stone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Advice {
    pub model: CashModel,
    /// Cash-flow situation 1-4 when the stream fits one:
    /// 1 foreseeable with inflows dominating, 2 foreseeable with outflows
    /// dominating, 3 foreseeable without a dominant side, 4 unforeseeable.
    pub situation: Option<u8>,
    pub net_flow: f64,
    pub rationale: String,
}

/// Picks a control model from the stream's net direction and how far it
/// can be forecast.
pub fn advise_model(stream: &CashFlowStream, forecastable: Forecastability) -> Result<Advice> {
    if stream.is_empty() {
        return Err(Error::input("stream is empty"));
    }
    stream.validate()?;
    let net_flow = stream.total();
    let (model, situation, rationale) = match forecastable {
        Forecastability::Full if net_flow < 0.0 => (
            CashModel::Baumol,
            Some(2),
            "flows are foreseeable and outflows exceed inflows: replenish cash in optimal lots".to_string(),
        ),
        Forecastability::Full if net_flow > 0.0 => (
            CashModel::Beranek,
            Some(1),
            "flows are foreseeable and inflows exceed outflows: sweep surplus cash in optimal lots".to_string(),
        ),
        Forecastability::Full => (
            CashModel::MillerOrr,
            Some(3),
            "flows are foreseeable but neither side dominates (situation 3): control band around a target".to_string(),
        ),
        Forecastability::ShortHorizon => (
            CashModel::Stone,
            None,
            format!(
                "flows can only be forecast a few days ahead (less than about {DEFAULT_LONG_HORIZON_DAYS} days): \
                 control band with look-ahead before acting"
            ),
        ),
        Forecastability::None => (
            CashModel::MillerOrr,
            Some(4),
            "flows cannot be forecast: control band restoring the target at either limit".to_string(),
        ),
    };
    Ok(Advice {
        model,
        situation,
        net_flow,
        rationale,
    })
}

/// Transfer size for Baumol/Beranek simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TransferSize {
    Fixed { c_star: f64 },
    Optimal(BaumolParams<f64>),
}

impl TransferSize {
    pub fn resolve(&self) -> Result<f64> {
        match self {
            TransferSize::Fixed { c_star } if *c_star > 0.0 && c_star.is_finite() => Ok(*c_star),
            TransferSize::Fixed { .. } => Err(Error::config("c_star must be > 0")),
            TransferSize::Optimal(p) => Ok(baumol_optimal(p)?.optimal_cash),
        }
    }
}

/// Miller-Orr band given directly or computed from model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BandSpec {
    Levels(MillerOrrLevels<f64>),
    Params(MillerOrrParams<f64>),
}

impl BandSpec {
    pub fn resolve(&self) -> Result<MillerOrrLevels<f64>> {
        match self {
            BandSpec::Levels(l) => {
                if l.lower <= l.target && l.target <= l.upper {
                    Ok(*l)
                } else {
                    Err(Error::config("band must satisfy lower <= target <= upper"))
                }
            }
            BandSpec::Params(p) => miller_orr_levels(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ForecastSource {
    /// The simulator passes the stream's true future flows.
    Oracle,
    /// `values[i]` forecasts the flow of stream entry `i`.
    Series { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PolicySpec {
    /// Never transfers.
    Passive,
    Baumol {
        transfer: TransferSize,
    },
    Beranek {
        transfer: TransferSize,
    },
    MillerOrr {
        band: BandSpec,
    },
    Stone {
        params: StoneParams<f64>,
        #[serde(default)]
        forecast: Option<ForecastSource>,
    },
}

impl PolicySpec {
    pub fn name(&self) -> &'static str {
        match self {
            PolicySpec::Passive => "passive",
            PolicySpec::Baumol { .. } => "baumol",
            PolicySpec::Beranek { .. } => "beranek",
            PolicySpec::MillerOrr { .. } => "miller-orr",
            PolicySpec::Stone { .. } => "stone",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    #[serde(default)]
    pub label: String,
    pub policy: PolicySpec,
    pub opening_balance: f64,
    /// Holding (opportunity) cost per unit of positive balance per day.
    pub holding_rate: f64,
    /// Fixed cost per transfer.
    pub transfer_cost: f64,
    /// Charged once for every day ending below the floor.
    pub shortage_cost: f64,
    /// Charged per unit of shortfall per day.
    #[serde(default)]
    pub shortage_rate: f64,
    /// Precautionary floor; shortages are measured against `max(0, floor)`.
    #[serde(default)]
    pub lcl_floor: Option<f64>,
}

impl SimulationConfig {
    pub fn new(label: impl Into<String>, policy: PolicySpec, opening_balance: f64) -> Self {
        Self {
            label: label.into(),
            policy,
            opening_balance,
            holding_rate: 0.0,
            transfer_cost: 0.0,
            shortage_cost: 0.0,
            shortage_rate: 0.0,
            lcl_floor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            ("opening_balance", self.opening_balance),
            ("holding_rate", self.holding_rate),
            ("transfer_cost", self.transfer_cost),
            ("shortage_cost", self.shortage_cost),
            ("shortage_rate", self.shortage_rate),
        ];
        for (name, v) in values {
            if !v.is_finite() {
                return Err(Error::config(format!("{name} must be finite")));
            }
            if name != "opening_balance" && v < 0.0 {
                return Err(Error::config(format!("{name} must be >= 0")));
            }
        }
        if self.lcl_floor.is_some_and(|f| !f.is_finite()) {
            return Err(Error::config("lcl_floor must be finite"));
        }
        Ok(())
    }

    fn shortage_threshold(&self) -> f64 {
        self.lcl_floor.unwrap_or(0.0).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day: i64,
    pub flow: f64,
    /// End-of-day balance, after any action.
    pub balance: f64,
    pub action: ActionKind,
    pub amount: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub day: i64,
    pub kind: ActionKind,
    pub amount: f64,
    pub resulting_balance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub holding: f64,
    pub transfer: f64,
    pub shortage: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub label: String,
    pub policy: String,
    pub trajectory: Vec<DayRecord>,
    pub actions: Vec<ActionRecord>,
    pub costs: CostBreakdown,
    pub transfer_count: usize,
    pub days_below_floor: usize,
    pub average_balance: f64,
}

impl SimulationReport {
    /// Copy with every money figure rounded to cents, for output.
    pub fn rounded(&self) -> Self {
        let costs = CostBreakdown {
            holding: round_cents(self.costs.holding),
            transfer: round_cents(self.costs.transfer),
            shortage: round_cents(self.costs.shortage),
            total: round_cents(self.costs.total),
        };
        Self {
            label: self.label.clone(),
            policy: self.policy.clone(),
            trajectory: self
                .trajectory
                .iter()
                .map(|d| DayRecord {
                    day: d.day,
                    flow: round_cents(d.flow),
                    balance: round_cents(d.balance),
                    action: d.action,
                    amount: round_cents(d.amount),
                })
                .collect(),
            actions: self
                .actions
                .iter()
                .map(|a| ActionRecord {
                    day: a.day,
                    kind: a.kind,
                    amount: round_cents(a.amount),
                    resulting_balance: round_cents(a.resulting_balance),
                })
                .collect(),
            costs,
            transfer_count: self.transfer_count,
            days_below_floor: self.days_below_floor,
            average_balance: round_cents(self.average_balance),
        }
    }

    pub fn final_balance(&self) -> f64 {
        self.trajectory.last().map_or(0.0, |d| d.balance)
    }
}

enum ResolvedPolicy<'a> {
    Passive,
    Baumol(f64),
    Beranek(f64),
    MillerOrr(MillerOrrLevels<f64>),
    Stone(&'a StoneParams<f64>, Forecaster<'a>),
}

enum Forecaster<'a> {
    Oracle(Vec<f64>),
    Series(&'a [f64]),
}

impl Forecaster<'_> {
    /// Forecast for the `n` entries after index `i`, zero past the end.
    fn window(&self, i: usize, n: usize) -> Vec<f64> {
        let values: &[f64] = match self {
            Forecaster::Oracle(v) => v,
            Forecaster::Series(v) => v,
        };
        (i + 1..i + 1 + n)
            .map(|j| values.get(j).copied().unwrap_or(0.0))
            .collect()
    }
}

fn resolve<'a>(policy: &'a PolicySpec, stream: &CashFlowStream) -> Result<ResolvedPolicy<'a>> {
    Ok(match policy {
        PolicySpec::Passive => ResolvedPolicy::Passive,
        PolicySpec::Baumol { transfer } => ResolvedPolicy::Baumol(transfer.resolve()?),
        PolicySpec::Beranek { transfer } => ResolvedPolicy::Beranek(transfer.resolve()?),
        PolicySpec::MillerOrr { band } => ResolvedPolicy::MillerOrr(band.resolve()?),
        PolicySpec::Stone { params, forecast } => {
            params
                .validate()
                .map_err(|e| Error::config(e.to_string()))?;
            let forecaster = match forecast {
                None => return Err(Error::config("Stone policy needs a forecast source")),
                Some(ForecastSource::Oracle) => Forecaster::Oracle(stream.flows().collect()),
                Some(ForecastSource::Series { values }) => {
                    if values.len() != stream.len() {
                        return Err(Error::config(format!(
                            "forecast series has {} values for a {}-day stream",
                            values.len(),
                            stream.len()
                        )));
                    }
                    Forecaster::Series(values)
                }
            };
            ResolvedPolicy::Stone(params, forecaster)
        }
    })
}

/// Replays `stream` under `cfg`.
pub fn simulate(stream: &CashFlowStream, cfg: &SimulationConfig) -> Result<SimulationReport> {
    if stream.is_empty() {
        return Err(Error::input("stream is empty"));
    }
    stream.validate()?;
    cfg.validate()?;
    let policy = resolve(&cfg.policy, stream)?;
    let threshold = cfg.shortage_threshold();

    let mut balance = cfg.opening_balance;
    let mut costs = CostBreakdown::default();
    let mut trajectory = Vec::with_capacity(stream.len());
    let mut actions = Vec::new();
    let mut days_below_floor = 0;
    let mut balance_sum = 0.0;

    for (i, entry) in stream.entries.iter().enumerate() {
        let flow = entry.net_flow;
        let action = match &policy {
            ResolvedPolicy::Passive => PolicyAction::none(balance + flow),
            ResolvedPolicy::Baumol(c_star) => baumol_step(balance, -flow, *c_star),
            ResolvedPolicy::Beranek(c_star) => beranek_step(balance, flow, *c_star),
            ResolvedPolicy::MillerOrr(levels) => miller_orr_step(balance + flow, levels),
            ResolvedPolicy::Stone(params, forecaster) => stone_step(
                balance + flow,
                params,
                &forecaster.window(i, params.lookahead_days),
            )?,
        };
        balance = action.resulting_balance;

        if balance > 0.0 {
            costs.holding += cfg.holding_rate * balance;
        }
        if action.is_transfer() {
            costs.transfer += cfg.transfer_cost;
            actions.push(ActionRecord {
                day: entry.day,
                kind: action.kind,
                amount: action.amount,
                resulting_balance: balance,
            });
        }
        if balance < threshold {
            costs.shortage += cfg.shortage_cost + cfg.shortage_rate * (threshold - balance);
            days_below_floor += 1;
        }
        balance_sum += balance;
        trajectory.push(DayRecord {
            day: entry.day,
            flow,
            balance,
            action: action.kind,
            amount: action.amount,
        });
    }
    costs.total = costs.holding + costs.transfer + costs.shortage;

    Ok(SimulationReport {
        label: cfg.label.clone(),
        policy: cfg.policy.name().to_string(),
        transfer_count: actions.len(),
        actions,
        costs,
        days_below_floor,
        average_balance: balance_sum / stream.len() as f64,
        trajectory,
    })
}

/// Simulates every config on the same stream (in parallel) and ranks the
/// reports by total cost, then by fewer transfers. Full ties keep input
/// order.
pub fn compare_policies(
    stream: &CashFlowStream,
    configs: &[SimulationConfig],
) -> Result<Vec<SimulationReport>> {
    if configs.len() < 2 {
        return Err(Error::input("need at least two configurations to compare"));
    }
    let mut reports = configs
        .par_iter()
        .map(|c| simulate(stream, c))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| {
        a.costs
            .total
            .partial_cmp(&b.costs.total)
            .unwrap_or(Ordering::Equal)
            .then(a.transfer_count.cmp(&b.transfer_count))
    });
    Ok(reports)
}
