use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use glove_core::protocol::Measurement;
use glove_core::{Euler, SpaceSpec};

#[derive(Debug, Parser)]
#[command(name = "gloves", version, about = "Build, verify and exercise chirality-encoding quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; defaults to `table` on a terminal and `json` otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the document to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries with their states.
    Catalog {
        #[arg(long)]
        entry: Option<String>,
    },
    /// Run the invariant checks on one entry or on the whole catalog.
    Verify(VerifyArgs),
    /// Split a product space into rotation and parity blocks.
    Decompose {
        #[arg(long, value_parser = parse_space)]
        space: SpaceSpec,
    },
    /// Haar-average a glove (or a random state) and its parity image.
    Twirl(TwirlArgs),
    /// Monte-Carlo run of the chirality comparison protocol.
    Simulate(SimulateArgs),
    /// Search a space for the most distinguishable twirled pair.
    Search(SearchArgs),
    /// Qubit cost and angular-momentum footprint of catalog entries.
    Report {
        #[arg(long)]
        entry: Option<String>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["entry", "all"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub entry: Option<String>,
    #[arg(long)]
    pub all: bool,
    /// Comparison tolerance for state-level checks.
    #[arg(long, value_parser = parse_tolerance)]
    pub tolerance: Option<f64>,
    /// Number of Haar-random rotations used for invariance checks.
    #[arg(long, default_value_t = 100)]
    pub rotations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["entry", "space", "printed"])))]
pub struct TwirlArgs {
    #[arg(long)]
    pub entry: Option<String>,
    /// Twirl a seeded random density matrix on this space.
    #[arg(long, value_parser = parse_space)]
    pub space: Option<SpaceSpec>,
    /// Compare the printed averaged states of `(Y00 ± Y10)/√2` with the exact twirl.
    #[arg(long)]
    pub printed: bool,
    /// Rank of the random density matrix used with `--space`.
    #[arg(long, default_value_t = 1, requires = "space")]
    pub rank: usize,
    /// Monte-Carlo sample count; the exact average is used when absent.
    #[arg(long, conflicts_with = "printed")]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub entry: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Apply an independent Haar-random rotation on every trial.
    #[arg(long, conflicts_with = "fixed_rotation")]
    pub random_rotation: bool,
    /// Apply the same z-y-z rotation on every trial.
    #[arg(long, value_name = "A,B,C", value_parser = parse_angles, allow_hyphen_values = true)]
    pub fixed_rotation: Option<Euler>,
    /// Bob's frame has the opposite handedness.
    #[arg(long)]
    pub bob_opposite: bool,
    #[arg(long, value_enum, default_value_t = MeasurementArg::Glove)]
    pub measurement: MeasurementArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasurementArg {
    Glove,
    Helstrom,
}

impl From<MeasurementArg> for Measurement {
    fn from(m: MeasurementArg) -> Self {
        match m {
            MeasurementArg::Glove => Measurement::Glove,
            MeasurementArg::Helstrom => Measurement::Helstrom,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_space)]
    pub space: SpaceSpec,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_space(s: &str) -> Result<SpaceSpec, String> {
    s.parse().map_err(|e: glove_core::GloveError| e.to_string())
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_angles(s: &str) -> Result<Euler, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated angles, got {s:?}"));
    };
    let num = |t: &str| match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("bad angle {t:?}")),
    };
    Ok(Euler::new(num(a)?, num(b)?, num(c)?))
}
