use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctinv::zeros::ZeroKind;
use ctinv::BranchChoice;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "ctinv", version, about = "One-term Cox-Thompson inverse scattering at fixed energy")]
pub struct Cli {
    /// Format of the data written to --output (or stdout).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write data here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Run sweeps and tables on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build the potential for one phase shift and tabulate it.
    Invert(InvertArgs),
    /// Compare Wronskian roots with the nonsingularity criterion over a grid of order pairs.
    CheckTheorem(TheoremArgs),
    /// Check j_{nu+1,n} < j'_{nu,n+1} and the classical zero chains.
    CheckProposition(PropositionArgs),
    /// Sample W_Ll on (0, xmax] and locate its roots.
    ScanWronskian(ScanArgs),
    /// Tabulate positive zeros of J, Y or J'.
    Zeros(ZerosArgs),
    /// Invert a phase shift and recover it with the radial solver.
    VerifyRoundtrip(RoundTripArgs),
}

/// `auto` or an integer branch index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BranchArg {
    #[serde(serialize_with = "auto_str")]
    Auto,
    Index(i32),
}

fn auto_str<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("auto")
}

impl FromStr for BranchArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BranchArg::Auto);
        }
        s.parse::<i32>()
            .map(BranchArg::Index)
            .map_err(|_| format!("expected `auto` or an integer, got `{s}`"))
    }
}

impl From<BranchArg> for BranchChoice {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Auto => BranchChoice::Auto,
            BranchArg::Index(n) => BranchChoice::Index(n),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct InvertArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    /// Branch index n, or `auto` for the nonsingular branch.
    #[arg(long, default_value = "auto", allow_negative_numbers = true)]
    pub branch: BranchArg,
    #[arg(long, default_value_t = 0.01)]
    pub xmin: f64,
    #[arg(long, default_value_t = 30.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = 600)]
    pub points: usize,
    /// Upper end of the pole search; never below --xmax.
    #[arg(long, default_value_t = 100.0)]
    pub scan_xmax: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct TheoremArgs {
    /// Check a single pair instead of the grid (requires --L).
    #[arg(long, allow_negative_numbers = true, requires = "big_l")]
    pub l: Option<f64>,
    #[arg(long = "L", id = "big_l", allow_negative_numbers = true, requires = "l")]
    #[serde(rename = "L")]
    pub big_l: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
    #[arg(long, default_value_t = 100.0)]
    pub xmax: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PropositionArgs {
    #[arg(long, default_value_t = 0.1)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub nu_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub nu_step: f64,
    /// Largest zero index n.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub margin: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long = "L", allow_negative_numbers = true)]
    #[serde(rename = "L")]
    pub big_l: f64,
    #[arg(long, default_value_t = 100.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = PI / 8.0)]
    pub step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ZerosArgs {
    /// J, Y or Jprime.
    #[arg(long, value_parser = parse_kind)]
    pub kind: ZeroKind,
    #[arg(long)]
    pub nu: f64,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

fn parse_kind(s: &str) -> Result<ZeroKind, String> {
    s.parse().map_err(|e: ctinv::Error| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct RoundTripArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub l: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value = "auto", allow_negative_numbers = true)]
    pub branch: BranchArg,
    #[arg(long, default_value_t = ctinv::verify::DEFAULT_MATCH_RADIUS)]
    pub match_radius: f64,
    #[arg(long, default_value_t = ctinv::verify::DEFAULT_STEP)]
    pub step: f64,
    /// Samples in the potential table handed to the solver.
    #[arg(long, default_value_t = ctinv::verify::DEFAULT_TABLE_POINTS)]
    pub points: usize,
    /// Solve on the analytic potential instead of a table.
    #[arg(long)]
    pub analytic: bool,
    #[arg(long, default_value_t = ctinv::verify::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
}
