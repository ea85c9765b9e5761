//! `fgc`: Dirichlet domains, geodesic covers and surface distances from JSON files.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use geocover::Error;

#[derive(Parser)]
#[command(name = "fgc", version, about = "Geodesic covers of Fuchsian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and certify the Dirichlet polygon of a group.
    Domain(DomainArgs),
    /// Build, verify, lift or probe covers.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Surface distance between two points.
    Dist(DistArgs),
    /// Distinct pairwise surface distances of a point set.
    Ddist(DdistArgs),
}

#[derive(Args)]
pub struct DomainArgs {
    /// Group file.
    pub group: PathBuf,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true, default_values = ["0", "2"])]
    pub center: Vec<f64>,
    /// Build from a displacement ball of this radius instead of certifying.
    #[arg(long)]
    pub ball_radius: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Construction {
    Basic,
    Truncated,
    Nielsen,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    First,
    Second,
}

#[derive(Args)]
pub struct SuiteArgs {
    /// Number of sampled pairs.
    #[arg(long, default_value_t = 2000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum CoverCommand {
    /// Construct a cover from a polygon file and verify it.
    Build {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, value_enum, default_value = "truncated")]
        construction: Construction,
        /// Word length for the Nielsen intervals.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a cover file against the oracle.
    Verify {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[command(flatten)]
        suite: SuiteArgs,
        /// Write the cover with the new verification summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a cover of a finite-index subgroup using right coset representatives.
    Lift {
        #[arg(long)]
        cover: PathBuf,
        /// JSON list of 2x2 matrices.
        #[arg(long)]
        reps: PathBuf,
        /// File of the whole group.
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Necessity witnesses for each element of a cover.
    Probe {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
pub struct DistArgs {
    #[arg(long)]
    pub cover: PathBuf,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
    pub p: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
    pub q: Vec<f64>,
    /// Use a cover without a passing verification.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args)]
pub struct DdistArgs {
    #[arg(long)]
    pub cover: PathBuf,
    /// JSON list of [x, y] points.
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long)]
    pub force: bool,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Uncertified(_)
            | Error::InsufficientCertificate { .. }
            | Error::ResourceCap(_)
            | Error::NoHoroballHeight { .. } => 2,
            Error::EllipticCenter { .. } => 3,
            Error::UnverifiedCover => 5,
            _ => 1,
        };
        Self::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Domain(a) => commands::domain(&a),
        Command::Cover(c) => commands::cover(c),
        Command::Dist(a) => commands::dist(&a),
        Command::Ddist(a) => commands::ddist(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fgc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
