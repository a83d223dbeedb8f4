//! Rolling cash budgets.
//!
//! Sales are collected over later periods according to a collection
//! profile (fraction collected 0, 1, 2, ... periods after the sale).
//! Purchases and dated fixed obligations (tax, interest, other) are paid in
//! their period. Balances chain from the opening balance.
//!
//! Rolling drops the oldest period and appends a new one, so the horizon
//! length never changes. Receivables still outstanding from the dropped
//! period are carried forward in `carried_inflows`; a rolled budget is
//! therefore identical to the tail of a budget built over the longer
//! window.
//!
//! Everything here is ring arithmetic, so exact rationals work as well as
//! floats.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Periods kept by a rolling budget unless configured otherwise.
pub const DEFAULT_HORIZON: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    Week,
    Biweek,
    Month,
}

impl std::str::FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "week" | "weekly" => Ok(Granularity::Week),
            "biweek" | "biweekly" => Ok(Granularity::Biweek),
            "month" | "monthly" => Ok(Granularity::Month),
            other => Err(Error::input(format!("unknown granularity '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObligationKind {
    Tax,
    Interest,
    Other,
}

/// A known payment due in the period labelled `due_period`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedObligation<T> {
    pub kind: ObligationKind,
    pub amount: T,
    pub due_period: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodAssumption<T> {
    pub label: String,
    pub granularity: Granularity,
    pub sales: T,
    pub purchases: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetAssumptions<T> {
    pub periods: Vec<PeriodAssumption<T>>,
    /// `collection_profile[lag]` of each period's sales arrives `lag`
    /// periods later. Sums to at most 1; the shortfall is bad debt.
    pub collection_profile: Vec<T>,
    #[serde(default = "Vec::new")]
    pub fixed_obligations: Vec<FixedObligation<T>>,
    pub opening_balance: T,
    /// Collections from periods already rolled out of the window, indexed
    /// by position in the current window.
    #[serde(default = "Vec::new")]
    pub carried_inflows: Vec<T>,
}

impl<T: Scalar> BudgetAssumptions<T> {
    pub fn validate(&self) -> Result<()> {
        let first = self
            .periods
            .first()
            .ok_or_else(|| Error::input("budget needs at least one period"))?;
        if let Some(p) = self
            .periods
            .iter()
            .find(|p| p.granularity != first.granularity)
        {
            return Err(Error::input(format!(
                "period '{}' is {:?} but the budget is {:?}",
                p.label, p.granularity, first.granularity
            )));
        }
        let mut seen = HashSet::new();
        for p in &self.periods {
            if !seen.insert(p.label.as_str()) {
                return Err(Error::input(format!(
                    "duplicate period label '{}'",
                    p.label
                )));
            }
        }
        let mut mass = T::zero();
        for (lag, f) in self.collection_profile.iter().enumerate() {
            if *f < T::zero() || *f > T::one() {
                return Err(Error::input(format!(
                    "collection fraction at lag {lag} outside [0, 1]"
                )));
            }
            mass = mass + *f;
        }
        if mass > T::one() {
            return Err(Error::input("collection profile sums to more than 1"));
        }
        Ok(())
    }

    pub fn granularity(&self) -> Option<Granularity> {
        self.periods.first().map(|p| p.granularity)
    }

    pub fn profile_mass(&self) -> T {
        self.collection_profile
            .iter()
            .fold(T::zero(), |acc, f| acc + *f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetRow<T> {
    pub label: String,
    pub inflows: T,
    pub outflows: T,
    pub net_flow: T,
    pub closing_balance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CashBudget<T> {
    pub opening_balance: T,
    pub rows: Vec<BudgetRow<T>>,
    /// Sales that will never be collected (profile shortfall).
    pub bad_debt: T,
    /// In-window sales whose collection falls after the last period.
    pub collections_beyond_horizon: T,
}

impl<T: Scalar> CashBudget<T> {
    pub fn final_balance(&self) -> T {
        self.rows
            .last()
            .map_or(self.opening_balance, |r| r.closing_balance)
    }

    pub fn total_net_flow(&self) -> T {
        self.rows.iter().fold(T::zero(), |acc, r| acc + r.net_flow)
    }

    pub fn total_inflows(&self) -> T {
        self.rows.iter().fold(T::zero(), |acc, r| acc + r.inflows)
    }

    pub fn total_outflows(&self) -> T {
        self.rows.iter().fold(T::zero(), |acc, r| acc + r.outflows)
    }
}

/// Per-period inflows, outflows, net flow and closing balance.
pub fn build_budget<T: Scalar>(a: &BudgetAssumptions<T>) -> Result<CashBudget<T>> {
    a.validate()?;
    let n = a.periods.len();
    let mut inflows: Vec<T> = (0..n)
        .map(|t| a.carried_inflows.get(t).copied().unwrap_or_else(T::zero))
        .collect();
    let mut beyond = T::zero();
    for (t, period) in a.periods.iter().enumerate() {
        for (lag, fraction) in a.collection_profile.iter().enumerate() {
            let collected = period.sales * *fraction;
            match inflows.get_mut(t + lag) {
                Some(slot) => *slot = *slot + collected,
                None => beyond = beyond + collected,
            }
        }
    }

    let mut rows = Vec::with_capacity(n);
    let mut balance = a.opening_balance;
    for (period, inflow) in a.periods.iter().zip(inflows) {
        let obligations = a
            .fixed_obligations
            .iter()
            .filter(|o| o.due_period == period.label)
            .fold(T::zero(), |acc, o| acc + o.amount);
        let outflows = period.purchases + obligations;
        let net_flow = inflow - outflows;
        balance = balance + net_flow;
        rows.push(BudgetRow {
            label: period.label.clone(),
            inflows: inflow,
            outflows,
            net_flow,
            closing_balance: balance,
        });
    }

    let total_sales = a.periods.iter().fold(T::zero(), |acc, p| acc + p.sales);
    Ok(CashBudget {
        opening_balance: a.opening_balance,
        rows,
        bad_debt: total_sales * (T::one() - a.profile_mass()),
        collections_beyond_horizon: beyond,
    })
}

/// Assumptions and budget after one roll.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolledBudget<T> {
    pub assumptions: BudgetAssumptions<T>,
    pub budget: CashBudget<T>,
}

/// Drops the oldest period of `budget` and appends `new_period`, which must
/// hold exactly one period of the same granularity.
pub fn roll_budget<T: Scalar>(
    budget: &CashBudget<T>,
    assumptions: &BudgetAssumptions<T>,
    new_period: &[PeriodAssumption<T>],
) -> Result<RolledBudget<T>> {
    assumptions.validate()?;
    let [incoming] = new_period else {
        return Err(Error::input(format!(
            "rolling takes exactly one new period, got {}",
            new_period.len()
        )));
    };
    if Some(incoming.granularity) != assumptions.granularity() {
        return Err(Error::input(format!(
            "new period '{}' is {:?}, budget is {:?}",
            incoming.label,
            incoming.granularity,
            assumptions.granularity()
        )));
    }
    let labels_match = budget.rows.len() == assumptions.periods.len()
        && budget
            .rows
            .iter()
            .zip(&assumptions.periods)
            .all(|(r, p)| r.label == p.label);
    if !labels_match {
        return Err(Error::input(
            "budget rows do not match the assumptions' periods",
        ));
    }

    let dropped = &assumptions.periods[0];
    let carried_len = assumptions
        .carried_inflows
        .len()
        .saturating_sub(1)
        .max(assumptions.collection_profile.len().saturating_sub(1));
    let carried_inflows = (0..carried_len)
        .map(|j| {
            let older = assumptions
                .carried_inflows
                .get(j + 1)
                .copied()
                .unwrap_or_else(T::zero);
            let tail = assumptions
                .collection_profile
                .get(j + 1)
                .map_or_else(T::zero, |f| dropped.sales * *f);
            older + tail
        })
        .collect();

    let mut periods: Vec<_> = assumptions.periods[1..].to_vec();
    periods.push(incoming.clone());
    let next = BudgetAssumptions {
        periods,
        collection_profile: assumptions.collection_profile.clone(),
        fixed_obligations: assumptions
            .fixed_obligations
            .iter()
            .filter(|o| o.due_period != dropped.label)
            .cloned()
            .collect(),
        opening_balance: budget.rows[0].closing_balance,
        carried_inflows,
    };
    let budget = build_budget(&next)?;
    Ok(RolledBudget {
        assumptions: next,
        budget,
    })
}
