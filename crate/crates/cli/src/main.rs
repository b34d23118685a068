use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qrayleigh::measures::LogUnit;
use qrayleigh_cli::config::RunConfig;
use qrayleigh_cli::error::{CliError, CliResult};
use qrayleigh_cli::output::emit;
use qrayleigh_cli::{apply_overrides, run, Command, Overrides};

#[derive(Parser)]
#[command(
    name = "qrayleigh",
    version,
    about = "Quantum Rayleigh collision model: figures, sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a figure dataset as CSV.
    Figure(Args),
    /// Write the Onsager coefficient sweep as CSV and report the scaling checks.
    Sweep(Args),
    /// Run the verification suite and write a JSON report.
    Checks(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Nats,
    Bits,
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    units: Option<Units>,
}

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("QRAYLEIGH_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("QRAYLEIGH_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn execute(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let (command, args) = match cli.command {
        Cmd::Figure(a) => (Command::Figure, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Checks(a) => (Command::Checks, a),
    };
    let overrides = Overrides {
        out: args.out,
        seed: args.seed,
        units: args.units.map(|u| match u {
            Units::Nats => LogUnit::Nats,
            Units::Bits => LogUnit::Bits,
        }),
    };
    let cfg = apply_overrides(RunConfig::load(&args.config)?, &overrides);
    let result = run(command, &cfg)?;
    emit(&result.bytes, cfg.output.as_deref())?;
    for line in &result.messages {
        eprintln!("{line}");
    }
    match result.failure {
        Some(msg) => Err(CliError::CheckFailed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qrayleigh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
