use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "treasury",
    version,
    about = "Working-capital valuation and cash management calculators"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// JSON config file with defaults; command-line flags win
    #[arg(long, global = true, env = "TREASURY_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Day-count convention for annual-to-daily rates [days per year: 360 or 365]
    #[arg(long, global = true, value_name = "DAYS")]
    pub day_count: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Net working capital from balance-sheet items
    Nwc(NwcArgs),
    /// Free cash flow to the firm for one period
    Fcff(FcffArgs),
    /// Present value of cash-flow deltas, or rank strategy variants
    Value(ValueArgs),
    /// Optimal transfer sizes and control bands
    #[command(subcommand)]
    Policy(PolicyCommand),
    /// Precautionary cash balance (low control level)
    Lcl(LclArgs),
    /// Inventory safety stock
    SafetyStock(SafetyStockArgs),
    /// Change in firm value from moving the precautionary balance
    LclImpact(LclImpactArgs),
    /// Hold cash one more day for a possible price drop, or deploy it
    Speculate(SpeculateArgs),
    /// Multi-period cash budgets
    #[command(subcommand)]
    Budget(BudgetCommand),
    /// Replay a cash-flow stream through a cash policy
    Simulate(SimulateArgs),
    /// Write a seeded synthetic cash-flow stream
    Generate(GenerateArgs),
    /// Recommend a cash model for a stream
    Advise(AdviseArgs),
    /// Simulate several policy configurations on one stream and rank them
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct NwcArgs {
    /// Accounts receivable [currency]
    #[arg(long)]
    pub receivables: f64,
    /// Inventory [currency]
    #[arg(long)]
    pub inventory: f64,
    /// Cash and equivalents [currency]
    #[arg(long)]
    pub cash: f64,
    /// Accounts payable [currency]
    #[arg(long)]
    pub payables: f64,
    /// Current assets [currency]; defaults to receivables + inventory + cash
    #[arg(long)]
    pub current_assets: Option<f64>,
    /// Current liabilities [currency]; defaults to payables
    #[arg(long)]
    pub current_liabilities: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FcffArgs {
    /// Cash revenue [currency per period]
    #[arg(long)]
    pub cash_revenue: f64,
    /// Fixed costs [currency per period]
    #[arg(long)]
    pub fixed_costs: f64,
    /// Variable costs [currency per period]
    #[arg(long)]
    pub variable_costs: f64,
    /// Non-cash expenses such as depreciation [currency per period]
    #[arg(long, default_value_t = 0.0)]
    pub non_cash: f64,
    /// Income tax rate [decimal, e.g. 0.2]
    #[arg(long)]
    pub tax_rate: Option<f64>,
    /// Growth of net working capital [currency per period]
    #[arg(long, default_value_t = 0.0)]
    pub nwc_growth: f64,
    /// Capital expenditure [currency per period]
    #[arg(long, default_value_t = 0.0)]
    pub capex: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ValueArgs {
    /// Cash-flow deltas for periods 1..n [currency per period, comma separated].
    /// With --perpetuity: LEVEL or T0,LEVEL (T0 at time zero, LEVEL forever from period 1)
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "strategies"
    )]
    pub deltas: Option<Vec<f64>>,
    /// Discount rate [decimal per period, e.g. 0.1]
    #[arg(long)]
    pub rate: Option<f64>,
    /// Number of periods [count]; defaults to the number of deltas
    #[arg(long, conflicts_with = "perpetuity")]
    pub periods: Option<usize>,
    /// Value the level as a perpetuity [switch]
    #[arg(long)]
    pub perpetuity: bool,
    /// JSON array of strategy variants (label, periods of financials, discount_rate) to rank [path]
    #[arg(long, value_name = "PATH")]
    pub strategies: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PolicyCommand {
    /// Transfer size when outflows dominate and are predictable
    Baumol(BaumolArgs),
    /// Sweep size when inflows dominate and are predictable
    Beranek(BaumolArgs),
    /// Control band for unpredictable flows
    MillerOrr(MillerOrrArgs),
    /// Control band with inner limits and a look-ahead forecast
    Stone(StoneArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BaumolArgs {
    /// Cash used (or received) over the period [currency per period]
    #[arg(long)]
    pub demand: f64,
    /// Cost of one transfer [currency per transfer]
    #[arg(long)]
    pub transfer_cost: f64,
    /// Opportunity cost of holding cash over the same period [decimal per period]
    #[arg(long)]
    pub rate: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MillerOrrArgs {
    /// Lower limit [currency]
    #[arg(long, default_value_t = 0.0)]
    pub lower: f64,
    /// Cost of one transfer [currency per transfer]
    #[arg(long)]
    pub transfer_cost: f64,
    /// Opportunity cost of cash [decimal per day]; overrides --rate
    #[arg(long)]
    pub daily_rate: Option<f64>,
    /// Opportunity cost of cash [decimal per year], divided by the day count
    #[arg(long)]
    pub rate: Option<f64>,
    /// Variance of daily net cash flows [currency^2 per day]
    #[arg(long, conflicts_with = "stddev")]
    pub variance: Option<f64>,
    /// Standard deviation of daily net cash flows [currency per day]
    #[arg(long)]
    pub stddev: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct StoneArgs {
    #[command(flatten)]
    pub band: MillerOrrArgs,
    /// Inner limits sit this fraction of the way from the target to the outer limits [0..1, default 0.8]
    #[arg(long)]
    pub inner_fraction: Option<f64>,
    /// Forecast days added to the balance before acting [days, default 5]
    #[arg(long)]
    pub lookahead: Option<usize>,
}

/// Inputs of the precautionary balance. All optional here so that
/// `lcl-impact` can take a level directly instead.
#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LclFlags {
    /// Annual cost of capital [decimal per year, e.g. 0.18]
    #[arg(long)]
    pub rate: Option<f64>,
    /// Days per year used to turn --rate into a daily rate [360 or 365]; defaults to --day-count
    #[arg(long, value_name = "DAYS")]
    pub basis: Option<u32>,
    /// Average size of one transfer into cash [currency]
    #[arg(long)]
    pub avg_transfer: Option<f64>,
    /// Sum of cash flows over the flow period [currency per flow period]
    #[arg(long)]
    pub flow_sum: Option<f64>,
    /// Standard deviation of cash flows [currency]
    #[arg(long)]
    pub stddev: Option<f64>,
    /// Cost of running out of cash [currency per shortage]
    #[arg(long)]
    pub shortage_cost: Option<f64>,
    /// Period the flow sum is measured over
    #[arg(long, value_enum, default_value_t = FlowBasis::Month)]
    pub flow_basis: FlowBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlowBasis {
    Day,
    Week,
    Month,
    Year,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LclArgs {
    #[command(flatten)]
    pub lcl: LclFlags,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SafetyStockArgs {
    /// Holding cost rate [decimal per unit of value per period]
    #[arg(long)]
    pub holding_cost: f64,
    /// Order quantity [units]
    #[arg(long)]
    pub order_quantity: f64,
    /// Unit price [currency per unit]
    #[arg(long)]
    pub unit_price: f64,
    /// Demand over the period [units per period]
    #[arg(long)]
    pub demand: f64,
    /// Standard deviation of usage [units]
    #[arg(long)]
    pub stddev: f64,
    /// Cost of one stockout [currency per stockout]
    #[arg(long)]
    pub stockout_cost: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LclImpactArgs {
    /// New precautionary level [currency]; computed from the LCL flags when omitted
    #[arg(long = "new")]
    pub new_level: Option<f64>,
    /// Current precautionary level [currency]
    #[arg(long = "old", default_value_t = 0.0)]
    pub old_level: f64,
    /// Income tax rate [decimal, e.g. 0.2]
    #[arg(long)]
    pub tax_rate: Option<f64>,
    #[command(flatten)]
    pub lcl: LclFlags,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpeculateArgs {
    /// Quantity the cash can buy [units]
    #[arg(long)]
    pub units: f64,
    /// Current price, taken as the long-term value [currency per unit]
    #[arg(long)]
    pub price: f64,
    /// Daily relative price standard deviation [decimal per day, e.g. 0.04]
    #[arg(long)]
    pub sigma: f64,
    /// Annual cost of capital [decimal per year]
    #[arg(long)]
    pub rate: Option<f64>,
    /// Probability of an up move [0..1]
    #[arg(long, default_value_t = 0.5)]
    pub up_probability: f64,
}

#[derive(Debug, Subcommand)]
pub enum BudgetCommand {
    /// Build a budget from period assumptions
    Build(BudgetInput),
    /// Drop the oldest period and append the next one
    Roll(RollArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BudgetInput {
    /// Assumptions: CSV rows `period,granularity,sales,purchases[,tax,interest,other]`
    /// or a JSON budget-assumptions document (.json) [path, or - for stdin CSV]
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Opening cash balance [currency]; CSV input only
    #[arg(long)]
    pub opening: Option<f64>,
    /// Share of sales collected 0, 1, 2, ... periods after the sale
    /// [fractions, comma separated, sum <= 1]; CSV input only
    #[arg(long, value_delimiter = ',')]
    pub profile: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RollArgs {
    #[command(flatten)]
    pub current: BudgetInput,
    /// The incoming period, as a one-row CSV in the same format [path]
    #[arg(long, value_name = "PATH")]
    pub next: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    Passive,
    Baumol,
    Beranek,
    MillerOrr,
    Stone,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    /// Cash flows as CSV `day,net_flow` [path, or - for stdin]
    #[arg(long, value_name = "PATH")]
    pub flows: Option<PathBuf>,
    /// Cash policy to apply
    #[arg(long, value_enum)]
    pub policy: PolicyKind,
    /// Label for the report [text]
    #[arg(long)]
    pub label: Option<String>,
    /// Opening balance [currency]; defaults to the target (bands), C* (Baumol) or 0
    #[arg(long)]
    pub opening: Option<f64>,
    /// Baumol/Beranek transfer size C* [currency]; otherwise computed from --demand
    #[arg(long)]
    pub transfer_size: Option<f64>,
    /// Baumol/Beranek period demand used to compute C* [currency per period]
    #[arg(long)]
    pub demand: Option<f64>,
    /// Opportunity cost of cash [decimal per year]; used for C* and as the default holding rate
    #[arg(long)]
    pub rate: Option<f64>,
    /// Miller-Orr/Stone lower limit [currency]
    #[arg(long, default_value_t = 0.0)]
    pub lower: f64,
    /// Miller-Orr/Stone daily flow variance [currency^2 per day]; defaults to the stream's sample variance
    #[arg(long)]
    pub variance: Option<f64>,
    /// Opportunity cost of cash [decimal per day]; overrides --rate for the band and holding cost
    #[arg(long)]
    pub daily_rate: Option<f64>,
    /// Stone inner-limit fraction [0..1, default 0.8]
    #[arg(long)]
    pub inner_fraction: Option<f64>,
    /// Stone look-ahead [days, default 5]
    #[arg(long)]
    pub lookahead: Option<usize>,
    /// Stone forecast: `oracle` for the true future flows, or a CSV `day,net_flow` aligned with the stream
    #[arg(long, default_value = "oracle", value_name = "oracle|PATH")]
    pub forecast: String,
    /// Cost of one transfer [currency per transfer]
    #[arg(long, default_value_t = 0.0)]
    pub transfer_cost: f64,
    /// Holding cost on positive balances [decimal per day]; defaults to the daily rate if known, else 0
    #[arg(long)]
    pub holding_rate: Option<f64>,
    /// Charge for each day ending below the floor [currency per day]
    #[arg(long, default_value_t = 0.0)]
    pub shortage_cost: f64,
    /// Charge per unit of shortfall below the floor [currency per currency-day]
    #[arg(long, default_value_t = 0.0)]
    pub shortage_rate: f64,
    /// Precautionary floor for shortage accounting [currency]
    #[arg(long)]
    pub floor: Option<f64>,
    /// Write the daily trajectory as CSV `day,flow,balance,action,amount` [path]
    #[arg(long, value_name = "PATH")]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StreamKindArg {
    ConstantOut,
    ConstantIn,
    Seasonal,
    Gaussian,
    MeanReverting,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GenerateArgs {
    /// Stream family
    #[arg(long, value_enum)]
    pub kind: StreamKindArg,
    /// Length [days]
    #[arg(long, default_value_t = 365)]
    pub days: usize,
    /// PRNG seed (ChaCha8) [integer]
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Constant flow, or seasonal daily outflow [currency per day]
    #[arg(long, default_value_t = 0.0)]
    pub amount: f64,
    /// Gaussian mean [currency per day]
    #[arg(long, default_value_t = 0.0)]
    pub mean: f64,
    /// Gaussian or mean-reverting shock standard deviation [currency per day]
    #[arg(long, default_value_t = 0.0)]
    pub stddev: f64,
    /// Seasonal lump inflow [currency per cycle]
    #[arg(long, default_value_t = 0.0)]
    pub lump: f64,
    /// Seasonal cycle length [days]
    #[arg(long, default_value_t = 30)]
    pub every: u32,
    /// Mean-reversion strength [0..2, fraction of the cumulative position per day]
    #[arg(long, default_value_t = 0.3)]
    pub reversion: f64,
    /// Write the stream as CSV `day,net_flow` here instead of printing a report [path]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ForecastArg {
    Full,
    Short,
    None,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AdviseArgs {
    /// Cash flows as CSV `day,net_flow` [path, or - for stdin]
    #[arg(long, value_name = "PATH")]
    pub flows: Option<PathBuf>,
    /// How far ahead flows can be forecast
    #[arg(long, value_enum, conflicts_with = "horizon_days")]
    pub forecastable: Option<ForecastArg>,
    /// Reliable forecast horizon [days; 0 = none]
    #[arg(long)]
    pub horizon_days: Option<u32>,
    /// Horizon that counts as a full forecast [days, default 14]
    #[arg(long)]
    pub long_horizon: Option<u32>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CompareArgs {
    /// Cash flows as CSV `day,net_flow` [path, or - for stdin]
    #[arg(long, value_name = "PATH")]
    pub flows: Option<PathBuf>,
    /// JSON array of simulation configs [path]
    #[arg(long, value_name = "PATH")]
    pub configs: Option<PathBuf>,
}
