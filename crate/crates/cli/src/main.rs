mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use confined_aim::Error;
use std::process::ExitCode;

/// Energies, critical radii and exact solutions of a hydrogen-like atom in
/// an impenetrable sphere.
#[derive(Parser, Debug)]
#[command(name = "confined-aim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy of one state at one box radius.
    Solve(SolveArgs),
    /// Regenerate a reference table (1-4) with deviations from the published values.
    Table(TableArgs),
    /// Box radius at which a state reaches zero energy.
    Critical(CriticalArgs),
    /// Exactly solvable radii, energy and wavefunction factors.
    Exact(ExactArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Working precision in decimal digits (at least 16).
    #[arg(long, env = "CONFINED_AIM_DIGITS", default_value_t = 50)]
    pub digits: u32,
    /// Largest AIM iteration count.
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Coulomb strength (2 gives Rydberg units).
    #[arg(long = "A", default_value = "2", allow_hyphen_values = true)]
    pub coulomb: String,
    /// Box radius.
    #[arg(long = "R", allow_hyphen_values = true)]
    pub radius: String,
    /// State label such as 1s, 2p, 3d, or n,l.
    #[arg(long)]
    pub state: String,
    /// Cross-check with the shooting oracle.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub id: u32,
    /// Worker threads for the rows.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long = "A", default_value = "2", allow_hyphen_values = true)]
    pub coulomb: String,
    /// Cross-check with Bessel zeros and an E = 0 shooting run.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long = "A", default_value = "2", allow_hyphen_values = true)]
    pub coulomb: String,
    #[command(flatten)]
    pub run: RunConfig,
}

/// Failure reported to the shell.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    NotConverged(String),
    /// Exit 3.
    InvalidInput(String),
    /// Exit 1: output could not be written.
    Io(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPrecision(_)
            | Error::Parse(_)
            | Error::InvalidModel(_)
            | Error::IndexOutOfRange { .. }
            | Error::ExpansionPointOutOfDomain
            | Error::EmptyInterval => Failure::InvalidInput(e.to_string()),
            other => Failure::NotConverged(other.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::NotConverged(_) => 2,
            Failure::InvalidInput(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if informational { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
    };
    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Solve(args) => commands::solve(&args, &mut stdout),
        Command::Table(args) => commands::table(&args, &mut stdout),
        Command::Critical(args) => commands::critical(&args, &mut stdout),
        Command::Exact(args) => commands::exact(&args, &mut stdout),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::NotConverged(m) => eprintln!("error: {m}"),
                Failure::InvalidInput(m) => eprintln!("invalid input: {m}"),
                Failure::Io(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
