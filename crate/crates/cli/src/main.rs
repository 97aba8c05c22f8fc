//! `toda-fp`: enumeration, dictionary checks, Toda solves, Hitchin-section
//! experiments and aggregate reports for a coprime pair (K, N).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toda_fixed_points::toda::TodaConfig;

#[derive(Parser, Debug)]
#[command(
    name = "toda-fp",
    version,
    about = "Fixed points of wild Higgs bundles and their Toda solutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the cyclic K-partitions of N with α, μ and module generators.
    Enumerate(Common),
    /// Check μ = (K - 1 - c_eff)/12 exactly for every class.
    VerifyDictionary(Common),
    /// Solve the radial Toda system; writes a CSV profile and JSON sidecar per class.
    SolveToda(Common),
    /// Build the Hitchin section from a JSON file {K, N, Q: [[coeffs]...]}.
    HitchinSection(HitchinArgs),
    /// Aggregate JSON report over all exact checks (and optionally the Toda solves).
    Report(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long = "K")]
    pub k: u32,
    #[arg(long = "N")]
    pub n: u32,
    /// Restrict to one class, given as a comma-separated tuple.
    #[arg(long, value_delimiter = ',')]
    pub b: Option<Vec<u32>>,
    /// Output file; for `solve-toda` the directory receiving the artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Number of grid nodes.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Newton tolerance on the max-norm of the scaled residual.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Include numerical μ from Toda solves in `report`.
    #[arg(long)]
    pub with_toda: bool,
}

impl Common {
    pub fn toda_config(&self) -> TodaConfig {
        let mut cfg = TodaConfig::default();
        if let Some(v) = self.s_min {
            cfg.s_min = v;
        }
        if let Some(v) = self.s_max {
            cfg.s_max = v;
        }
        if let Some(v) = self.grid {
            cfg.grid_points = v;
        }
        if let Some(v) = self.tol {
            cfg.newton_tol = v;
        }
        cfg
    }
}

#[derive(Args, Debug, Clone)]
pub struct HitchinArgs {
    #[arg(long = "K")]
    pub k: u32,
    #[arg(long = "N")]
    pub n: u32,
    /// JSON input file; `-` reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate(c) => commands::enumerate(c),
        Command::VerifyDictionary(c) => commands::verify_dictionary(c),
        Command::SolveToda(c) => commands::solve_toda(c),
        Command::HitchinSection(h) => commands::hitchin_section(h),
        Command::Report(c) => commands::report(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
