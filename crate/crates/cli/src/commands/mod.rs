//! Subcommand dispatch.

mod analytic;
mod budget;
mod simulation;

use std::io::Write;

use crate::args::{Cli, Command, PolicyCommand};
use crate::config::Settings;
use crate::error::CliResult;
use crate::output::Report;

/// Parsed command line to printed report.
pub fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings::resolve(cli.format, cli.day_count, cli.config.as_deref())?;
    let report = dispatch(&cli.command, &settings)?;
    if let Some(report) = report {
        let mut buf = Vec::new();
        report.emit(settings.format, &mut buf)?;
        let mut out = std::io::stdout().lock();
        match out.write_all(&buf).and_then(|()| out.flush()) {
            // A closed pipe (`| head`) is not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        }
    }
    Ok(())
}

fn dispatch(command: &Command, s: &Settings) -> CliResult<Option<Report>> {
    let report = match command {
        Command::Nwc(a) => analytic::nwc(a)?,
        Command::Fcff(a) => analytic::fcff(a, s)?,
        Command::Value(a) => analytic::value(a, s)?,
        Command::Policy(PolicyCommand::Baumol(a)) => analytic::baumol(a, s, false)?,
        Command::Policy(PolicyCommand::Beranek(a)) => analytic::baumol(a, s, true)?,
        Command::Policy(PolicyCommand::MillerOrr(a)) => analytic::miller_orr(a, s)?,
        Command::Policy(PolicyCommand::Stone(a)) => analytic::stone(a, s)?,
        Command::Lcl(a) => analytic::lcl(&a.lcl, s)?,
        Command::SafetyStock(a) => analytic::safety_stock(a)?,
        Command::LclImpact(a) => analytic::lcl_impact(a, s)?,
        Command::Speculate(a) => analytic::speculate(a, s)?,
        Command::Budget(c) => budget::run(c)?,
        Command::Simulate(a) => simulation::simulate(a, s)?,
        Command::Generate(a) => return simulation::generate(a),
        Command::Advise(a) => simulation::advise(a, s)?,
        Command::Compare(a) => simulation::compare(a, s)?,
    };
    Ok(Some(report))
}

/// `Some(x)` or a usage error naming the flag.
fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| crate::error::CliError::usage(format!("missing {flag}")))
}
