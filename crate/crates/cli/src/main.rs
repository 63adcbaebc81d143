//! `sepvar`: batch front-end for the phase-space toolkit.
//!
//! Exit codes: 0 success, 2 invalid input, 3 classification unreliable,
//! 4 numerical failure (1 for I/O problems).

mod commands;
mod config;
mod figure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BisectArgs, CertifyArgs, ClassifyArgs, IntegrateArgs, ProfileArgs, ReportArgs, Status};
use config::{read_config_file, section, InputError, Overlay, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Names of the commands, also the section keys of a config file.
pub const COMMANDS: &[&str] = &["report", "integrate", "classify", "bisect", "certify", "profile", "figure"];

#[derive(Debug, Parser)]
#[command(name = "sepvar", version, about = "Phase-space analysis of blow-up profiles of u_t = Δu^m + |x|^σ u^m")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Constants, critical points, coefficients and certificate summary.
    Report(ReportArgs),
    /// Integrate one orbit (seeded or from an explicit state).
    Integrate(IntegrateArgs),
    /// Fate sweep over a σ or label grid.
    Classify(ClassifyArgs),
    /// Bracket a fate transition.
    Bisect(BisectArgs),
    /// Audit the sign claims of the existence and non-existence arguments.
    Certify(CertifyArgs),
    /// Reconstruct the profile f(ξ) carried by a seeded orbit.
    Profile(ProfileArgs),
    /// Emit the data of figure 1, 2 or 3.
    Figure {
        /// 1, 2 or 3.
        id: u8,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Report(_) => "report",
            Command::Integrate(_) => "integrate",
            Command::Classify(_) => "classify",
            Command::Bisect(_) => "bisect",
            Command::Certify(_) => "certify",
            Command::Profile(_) => "profile",
            Command::Figure { .. } => "figure",
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let name = cli.command.name();
    let (file, raw) = match &cli.config {
        Some(path) => read_config_file(path, name)?,
        None => (RunConfig::default(), serde_json::Value::Object(Default::default())),
    };
    let cfg = cli.run.overlay(file);
    match cli.command {
        Command::Report(a) => commands::report(&cfg, a.overlay(section(raw, name)?)),
        Command::Integrate(a) => commands::integrate_cmd(&cfg, a.overlay(section(raw, name)?)),
        Command::Classify(a) => commands::classify(&cfg, a.overlay(section(raw, name)?)),
        Command::Bisect(a) => commands::bisect(&cfg, a.overlay(section(raw, name)?)),
        Command::Certify(a) => commands::certify(&cfg, a.overlay(section(raw, name)?)),
        Command::Profile(a) => commands::profile(&cfg, a.overlay(section(raw, name)?)),
        Command::Figure { id } => figure::figure(&cfg, id),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<sepvar::Error>() {
        if e.is_invalid_input() {
            2
        } else if matches!(e, sepvar::Error::TooManyIndeterminate { .. }) {
            3
        } else {
            4
        }
    } else if err.downcast_ref::<InputError>().is_some() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Unreliable) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
