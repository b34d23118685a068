//! Figure datasets, Onsager sweeps and the verification suite of the
//! `qrayleigh` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod sweep;

use std::path::PathBuf;

use qrayleigh::measures::LogUnit;

use crate::config::{Experiment, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Figure,
    Sweep,
    Checks,
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub units: Option<LogUnit>,
}

pub fn apply_overrides(mut cfg: RunConfig, o: &Overrides) -> RunConfig {
    if let Some(p) = &o.out {
        cfg.output = Some(p.clone());
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(u) = o.units {
        cfg.units = u;
    }
    cfg
}

/// Output of one command: the bytes to write and the lines for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub bytes: Vec<u8>,
    pub messages: Vec<String>,
    /// Set when a check inside the command failed.
    pub failure: Option<String>,
}

pub fn run(command: Command, cfg: &RunConfig) -> CliResult<RunOutput> {
    let expected = match cfg.experiment {
        Experiment::Sweep => Command::Sweep,
        Experiment::Checks => Command::Checks,
        _ => Command::Figure,
    };
    if command != expected {
        return Err(CliError::Config(format!(
            "experiment '{}' cannot run under this command",
            cfg.experiment.name()
        )));
    }
    match command {
        Command::Figure => Ok(RunOutput {
            bytes: figures::run_figure(cfg)?.to_bytes()?,
            messages: Vec::new(),
            failure: None,
        }),
        Command::Sweep => {
            let (table, report) = sweep::run_sweep(cfg)?;
            Ok(RunOutput {
                bytes: table.to_bytes()?,
                messages: report.lines(),
                failure: (!report.passed()).then(|| "sweep scaling checks failed".to_string()),
            })
        }
        Command::Checks => {
            let report = checks::run_checks(cfg)?;
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            Ok(RunOutput {
                bytes: checks::report_json(&report)?,
                messages: vec![format!(
                    "checks: {} passed, {} failed",
                    report.checks.len() - failed.len(),
                    failed.len()
                )],
                failure: (!failed.is_empty()).then(|| failed.join(", ")),
            })
        }
    }
}
