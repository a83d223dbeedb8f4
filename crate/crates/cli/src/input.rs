//! File and stdin ingestion.

use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use treasury_core::budget::{FixedObligation, ObligationKind, PeriodAssumption};
use treasury_core::simulator::{CashFlowStream, FlowEntry};
use treasury_core::ExactMoney;

use crate::error::{CliError, CliResult};

/// Opens `path`, or stdin when the path is `-`.
fn reader(path: &Path) -> CliResult<Box<dyn Read>> {
    if path == Path::new("-") {
        Ok(Box::new(std::io::stdin()))
    } else {
        let f = std::fs::File::open(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Ok(Box::new(f))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_reader(reader(path)?)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

/// `day,net_flow` CSV with a header row.
pub fn read_flows(path: &Path) -> CliResult<CashFlowStream> {
    let mut r = csv::Reader::from_reader(reader(path)?);
    let entries = r
        .deserialize::<FlowEntry>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let stream = CashFlowStream {
        source: path.display().to_string(),
        entries,
    };
    stream.validate()?;
    Ok(stream)
}

/// Plain decimal (`-1234.56`) as an exact rational.
pub fn parse_decimal(s: &str) -> CliResult<ExactMoney> {
    let bad = || {
        CliError::Core(treasury_core::Error::Input(format!(
            "'{s}' is not a decimal amount"
        )))
    };
    let t = s.trim();
    let (negative, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 9
    {
        return Err(bad());
    }
    let denom = 10i64.pow(frac.len() as u32);
    let mut numer: i64 = 0;
    for c in int.chars().chain(frac.chars()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i64::from(c as u8 - b'0')))
            .ok_or_else(bad)?;
    }
    Ok(ExactMoney::new(
        if negative { -numer } else { numer },
        denom,
    ))
}

pub fn exact_to_f64(x: ExactMoney) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Exact value of an `f64` as written in shortest form (`0.1` -> 1/10).
pub fn f64_to_exact(x: f64) -> CliResult<ExactMoney> {
    if !x.is_finite() {
        return Err(CliError::Core(treasury_core::Error::Input(format!(
            "{x} is not a finite amount"
        ))));
    }
    parse_decimal(&format!("{x}"))
}

#[derive(Debug, Deserialize)]
struct BudgetCsvRow {
    period: String,
    granularity: String,
    sales: String,
    purchases: String,
    #[serde(default)]
    tax: Option<String>,
    #[serde(default)]
    interest: Option<String>,
    #[serde(default)]
    other: Option<String>,
}

pub struct BudgetRows {
    pub periods: Vec<PeriodAssumption<ExactMoney>>,
    pub obligations: Vec<FixedObligation<ExactMoney>>,
}

/// `period,granularity,sales,purchases[,tax,interest,other]` CSV. Nonzero
/// tax/interest/other amounts become fixed obligations due that period.
pub fn read_budget_rows(path: &Path) -> CliResult<BudgetRows> {
    let mut r = csv::Reader::from_reader(reader(path)?);
    let mut periods = Vec::new();
    let mut obligations = Vec::new();
    for row in r.deserialize::<BudgetCsvRow>() {
        let row = row.map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        let kinds = [
            (ObligationKind::Tax, &row.tax),
            (ObligationKind::Interest, &row.interest),
            (ObligationKind::Other, &row.other),
        ];
        for (kind, cell) in kinds {
            let Some(cell) = cell.as_deref().filter(|c| !c.trim().is_empty()) else {
                continue;
            };
            let amount = parse_decimal(cell)?;
            if amount != ExactMoney::from_integer(0) {
                obligations.push(FixedObligation {
                    kind,
                    amount,
                    due_period: row.period.clone(),
                });
            }
        }
        periods.push(PeriodAssumption {
            label: row.period,
            granularity: row.granularity.parse()?,
            sales: parse_decimal(&row.sales)?,
            purchases: parse_decimal(&row.purchases)?,
        });
    }
    Ok(BudgetRows {
        periods,
        obligations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_decimal("0.1").unwrap(), ExactMoney::new(1, 10));
        assert_eq!(
            parse_decimal("-1234.56").unwrap(),
            ExactMoney::new(-123_456, 100)
        );
        assert_eq!(parse_decimal(" 42 ").unwrap(), ExactMoney::from_integer(42));
        assert_eq!(parse_decimal(".5").unwrap(), ExactMoney::new(1, 2));
        for bad in [
            "",
            "-",
            "1e5",
            "1,000",
            "abc",
            "1.2.3",
            "99999999999999999999",
        ] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn f64_round_trip_through_exact() {
        for x in [0.0, 0.1, 0.3, 1234.56, -7.25, 1e6] {
            assert_eq!(exact_to_f64(f64_to_exact(x).unwrap()), x);
        }
        assert!(f64_to_exact(f64::NAN).is_err());
    }
}
