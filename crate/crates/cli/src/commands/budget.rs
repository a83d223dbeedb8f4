//! `budget build|roll`. Arithmetic is exact; amounts become `f64` cents
//! only on output.

use std::path::Path;

use treasury_core::budget::{
    build_budget, roll_budget, BudgetAssumptions, BudgetRow, CashBudget, FixedObligation,
    PeriodAssumption, RolledBudget,
};
use treasury_core::ExactMoney;

use crate::args::{BudgetCommand, BudgetInput, RollArgs};
use crate::error::{CliError, CliResult};
use crate::input::{exact_to_f64, f64_to_exact, read_budget_rows, read_json};
use crate::output::{cents, money, Report};

pub fn run(c: &BudgetCommand) -> CliResult<Report> {
    match c {
        BudgetCommand::Build(a) => build(a),
        BudgetCommand::Roll(a) => roll(a),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn load(a: &BudgetInput) -> CliResult<BudgetAssumptions<ExactMoney>> {
    if is_json(&a.input) {
        if a.opening.is_some() || a.profile.is_some() {
            return Err(CliError::usage(
                "--opening and --profile apply to CSV input only",
            ));
        }
        let doc: BudgetAssumptions<f64> = read_json(&a.input)?;
        return map_assumptions(&doc, f64_to_exact, f64_to_exact);
    }
    let rows = read_budget_rows(&a.input)?;
    let opening = a
        .opening
        .ok_or_else(|| CliError::usage("missing --opening"))?;
    let profile = a
        .profile
        .as_ref()
        .ok_or_else(|| CliError::usage("missing --profile"))?;
    Ok(BudgetAssumptions {
        periods: rows.periods,
        collection_profile: profile
            .iter()
            .map(|f| f64_to_exact(*f))
            .collect::<CliResult<_>>()?,
        fixed_obligations: rows.obligations,
        opening_balance: f64_to_exact(opening)?,
        carried_inflows: Vec::new(),
    })
}

fn build(a: &BudgetInput) -> CliResult<Report> {
    let assumptions = load(a)?;
    let budget = map_budget(&build_budget(&assumptions)?);
    budget_report(&budget, &budget)
}

fn roll(a: &RollArgs) -> CliResult<Report> {
    let mut assumptions = load(&a.current)?;
    let next = read_budget_rows(&a.next)?;
    let budget = build_budget(&assumptions)?;
    assumptions.fixed_obligations.extend(next.obligations);
    let rolled = roll_budget(&budget, &assumptions, &next.periods)?;
    let out = RolledBudget {
        // Money to cents so the document re-reads exactly; fractions as given.
        assumptions: map_assumptions(
            &rolled.assumptions,
            |x| Ok(money_of(x)),
            |x| Ok(exact_to_f64(x)),
        )?,
        budget: map_budget(&rolled.budget),
    };
    budget_report(&out, &out.budget)
}

fn budget_report<T: serde::Serialize>(value: &T, b: &CashBudget<f64>) -> CliResult<Report> {
    let rows = b
        .rows
        .iter()
        .map(|r| {
            vec![
                r.label.clone(),
                money(r.inflows),
                money(r.outflows),
                money(r.net_flow),
                money(r.closing_balance),
            ]
        })
        .collect();
    let notes = vec![
        String::new(),
        format!("opening balance            {}", money(b.opening_balance)),
        format!("bad debt                   {}", money(b.bad_debt)),
        format!(
            "collected after horizon    {}",
            money(b.collections_beyond_horizon)
        ),
    ];
    Ok(Report::table(
        value,
        &[
            "period",
            "inflows",
            "outflows",
            "net_flow",
            "closing_balance",
        ],
        rows,
    )?
    .with_notes(notes))
}

fn money_of(x: ExactMoney) -> f64 {
    cents(exact_to_f64(x))
}

fn map_budget(b: &CashBudget<ExactMoney>) -> CashBudget<f64> {
    CashBudget {
        opening_balance: money_of(b.opening_balance),
        rows: b
            .rows
            .iter()
            .map(|r| BudgetRow {
                label: r.label.clone(),
                inflows: money_of(r.inflows),
                outflows: money_of(r.outflows),
                net_flow: money_of(r.net_flow),
                closing_balance: money_of(r.closing_balance),
            })
            .collect(),
        bad_debt: money_of(b.bad_debt),
        collections_beyond_horizon: money_of(b.collections_beyond_horizon),
    }
}

fn map_assumptions<A: Copy, B>(
    a: &BudgetAssumptions<A>,
    f: impl Fn(A) -> CliResult<B>,
    fraction: impl Fn(A) -> CliResult<B>,
) -> CliResult<BudgetAssumptions<B>> {
    Ok(BudgetAssumptions {
        periods: a
            .periods
            .iter()
            .map(|p| {
                Ok(PeriodAssumption {
                    label: p.label.clone(),
                    granularity: p.granularity,
                    sales: f(p.sales)?,
                    purchases: f(p.purchases)?,
                })
            })
            .collect::<CliResult<_>>()?,
        collection_profile: a
            .collection_profile
            .iter()
            .map(|x| fraction(*x))
            .collect::<CliResult<_>>()?,
        fixed_obligations: a
            .fixed_obligations
            .iter()
            .map(|o| {
                Ok(FixedObligation {
                    kind: o.kind,
                    amount: f(o.amount)?,
                    due_period: o.due_period.clone(),
                })
            })
            .collect::<CliResult<_>>()?,
        opening_balance: f(a.opening_balance)?,
        carried_inflows: a
            .carried_inflows
            .iter()
            .map(|x| f(*x))
            .collect::<CliResult<_>>()?,
    })
}
