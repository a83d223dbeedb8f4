//! Report rendering: JSON for round-tripping, CSV for tidy plot data,
//! aligned text tables for people.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use treasury_core::round_cents;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}

/// Money at the output boundary: cents, no negative zero.
pub fn cents(x: f64) -> f64 {
    let r = round_cents(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn money(x: f64) -> String {
    format!("{:.2}", cents(x))
}

pub struct Report {
    json: serde_json::Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Extra lines shown under the table only.
    notes: Vec<String>,
}

impl Report {
    pub fn table<T: Serialize>(
        value: &T,
        header: &[&str],
        rows: Vec<Vec<String>>,
    ) -> CliResult<Self> {
        Ok(Self {
            json: serde_json::to_value(value)?,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            notes: Vec::new(),
        })
    }

    /// Two-column `field,value` report.
    pub fn fields<T: Serialize>(value: &T, fields: Vec<(&str, String)>) -> CliResult<Self> {
        let rows = fields
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect();
        Self::table(value, &["field", "value"], rows)
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn emit(&self, format: Format, out: &mut impl Write) -> CliResult<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Format::Table => {
                write_table(out, &self.header, &self.rows)?;
                for note in &self.notes {
                    writeln!(out, "{note}")?;
                }
            }
        }
        Ok(())
    }
}

fn write_table(out: &mut impl Write, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    // Numbers right-aligned, text left-aligned.
    let numeric: Vec<bool> = (0..header.len())
        .map(|i| {
            !rows.is_empty()
                && rows
                    .iter()
                    .all(|r| r.get(i).is_some_and(|c| c.parse::<f64>().is_ok()))
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .zip(&numeric)
            .map(|((c, w), num)| {
                if *num {
                    format!("{c:>w$}")
                } else {
                    format!("{c:<w$}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(header).trim_end())?;
    writeln!(
        out,
        "{}",
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("  ")
    )?;
    for row in rows {
        writeln!(out, "{}", line(row).trim_end())?;
    }
    Ok(())
}
