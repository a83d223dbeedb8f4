//! JSON config file, merged under command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use treasury_core::reserves::DEFAULT_DAY_COUNT;

use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub day_count_convention: Option<u32>,
    pub format: Option<Format>,
    pub rates: RateDefaults,
    pub horizon: HorizonDefaults,
    pub paths: PathDefaults,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateDefaults {
    /// Annual cost of capital.
    pub annual_rate: Option<f64>,
    pub tax_rate: Option<f64>,
    /// Discount rate for `value`; falls back to `annual_rate`.
    pub discount_rate: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HorizonDefaults {
    /// Periods for finite-horizon valuation.
    pub periods: Option<usize>,
    pub lookahead_days: Option<usize>,
    pub inner_fraction: Option<f64>,
    /// Forecast horizon (days) that counts as "full" for `advise`.
    pub long_horizon_days: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathDefaults {
    pub flows: Option<PathBuf>,
    pub configs: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

impl AppConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Core(treasury_core::Error::Config(format!(
                "{}: {e}",
                path.display()
            )))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Core(treasury_core::Error::Config(format!(
                "{}: {e}",
                path.display()
            )))
        })
    }
}

/// Global settings after merging flags over the config file.
#[derive(Debug)]
pub struct Settings {
    pub day_count: u32,
    pub format: Format,
    pub config: AppConfig,
}

impl Settings {
    pub fn resolve(
        format: Option<Format>,
        day_count: Option<u32>,
        config_path: Option<&Path>,
    ) -> CliResult<Self> {
        let config = match config_path {
            Some(p) => AppConfig::load(p)?,
            None => AppConfig::default(),
        };
        let day_count = check_day_count(
            day_count
                .or(config.day_count_convention)
                .unwrap_or(DEFAULT_DAY_COUNT),
        )?;
        let format = format.or(config.format).unwrap_or_default();
        Ok(Self {
            day_count,
            format,
            config,
        })
    }

    pub fn annual_rate(&self, flag: Option<f64>) -> CliResult<f64> {
        flag.or(self.config.rates.annual_rate).ok_or_else(|| {
            CliError::usage("missing --rate (or rates.annual_rate in the config file)")
        })
    }

    pub fn tax_rate(&self, flag: Option<f64>) -> CliResult<f64> {
        flag.or(self.config.rates.tax_rate).ok_or_else(|| {
            CliError::usage("missing --tax-rate (or rates.tax_rate in the config file)")
        })
    }

    pub fn discount_rate(&self, flag: Option<f64>) -> CliResult<f64> {
        flag.or(self.config.rates.discount_rate)
            .or(self.config.rates.annual_rate)
            .ok_or_else(|| {
                CliError::usage("missing --rate (or rates.discount_rate in the config file)")
            })
    }

    /// Daily rate from an explicit daily flag or an annual one.
    pub fn daily_rate(&self, daily: Option<f64>, annual: Option<f64>) -> CliResult<f64> {
        match daily {
            Some(d) => Ok(d),
            None => Ok(self.annual_rate(annual)? / f64::from(self.day_count)),
        }
    }
}

pub fn check_day_count(days: u32) -> CliResult<u32> {
    match days {
        360 | 365 => Ok(days),
        other => Err(CliError::Core(treasury_core::Error::Config(format!(
            "day count must be 360 or 365, got {other}"
        )))),
    }
}
