//! Corporate cash management toolkit.
//!
//! Computes operating, precautionary and speculative cash levels from
//! closed-form inventory-style models, ties each cash decision to firm value
//! through discounted free cash flow, builds rolling cash budgets, and
//! replays cash-flow streams through control policies day by day.
//!
//! The analytic modules are generic over the scalar type:
//!
//! - [`valuation`], [`reserves`], [`cash_policy`] and [`speculative`] need
//!   logarithms and roots and take any [`Real`] (`f32`, `f64`).
//! - [`budget`] only adds and multiplies, so it accepts any [`Scalar`],
//!   including exact rationals such as [`ExactMoney`].
//! - [`simulator`] works in `f64`.
//!
//! The aliases at the crate root pin the generic types to `f64`, which is
//! what the command-line front end uses.

pub mod budget;
pub mod cash_policy;
pub mod error;
pub mod reserves;
pub mod scalar;
pub mod simulator;
pub mod speculative;
pub mod valuation;

pub use error::{Error, Result};
pub use scalar::{round_cents, Real, Scalar};

/// Exact money for budget arithmetic.
pub type ExactMoney = num_rational::Ratio<i64>;

pub type BalanceSheetSnapshot = valuation::BalanceSheetSnapshot<f64>;
pub type PeriodFinancials = valuation::PeriodFinancials<f64>;
pub type ValuationContext = valuation::ValuationContext<f64>;
pub type StrategyVariant = valuation::StrategyVariant<f64>;
pub type RankedStrategy = valuation::RankedStrategy<f64>;

pub type SafetyStockInputs = reserves::SafetyStockInputs<f64>;
pub type LclInputs = reserves::LclInputs<f64>;
pub type ReserveLevel = reserves::ReserveLevel<f64>;
pub type ValueImpact = reserves::ValueImpact<f64>;

pub type BaumolParams = cash_policy::BaumolParams<f64>;
pub type BaumolSolution = cash_policy::BaumolSolution<f64>;
pub type MillerOrrParams = cash_policy::MillerOrrParams<f64>;
pub type MillerOrrLevels = cash_policy::MillerOrrLevels<f64>;
pub type StoneParams = cash_policy::StoneParams<f64>;
pub type PolicyAction = cash_policy::PolicyAction<f64>;

pub type SpeculativeInputs = speculative::SpeculativeInputs<f64>;
pub type SpeculativeVerdict = speculative::SpeculativeVerdict<f64>;

pub type BudgetAssumptions = budget::BudgetAssumptions<f64>;
pub type PeriodAssumption = budget::PeriodAssumption<f64>;
pub type FixedObligation = budget::FixedObligation<f64>;
pub type CashBudget = budget::CashBudget<f64>;
pub type RolledBudget = budget::RolledBudget<f64>;
pub type ExactBudgetAssumptions = budget::BudgetAssumptions<ExactMoney>;
pub type ExactCashBudget = budget::CashBudget<ExactMoney>;
