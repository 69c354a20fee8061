//! Command-line front end for spidermoment, plus the OEIS b-file client.
//!
//! [`run`] executes a parsed [`Cli`] against any writer and reports whether
//! the command's check passed; `main` only maps that to an exit code.

pub mod commands;
pub mod oeis;
pub mod source;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{run, CliError, Outcome};

/// Exit code for a failed verification or check.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for usage, parse and domain errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "spidermoment",
    version,
    about = "Moment sequences of spidernets and free Meixner laws"
)]
pub struct Cli {
    /// Highest moment index to compute.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub order: u32,
    /// Never touch the network.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Directory for cached OEIS b-files.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Tolerance for spectral moment checks.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive_f64)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print μ_0..μ_order of a source.
    Expand { source: String },
    /// Apply a transform pipeline (applied right to left) to a source.
    Transform { pipeline: String, source: String },
    /// Extract or expand a J-fraction.
    #[command(subcommand)]
    Jcf(JcfCommand),
    /// Check a model's moments against its graph and its spectral measure.
    Verify { model: String },
    /// Compare a source with an OEIS entry.
    Check {
        source: String,
        id: String,
        /// Pipeline applied to the source first.
        #[arg(long)]
        pipeline: Option<String>,
        /// OEIS index of the source's first term (defaults to the built-in table).
        #[arg(long)]
        offset: Option<usize>,
    },
    /// Closed-walk counts at the origin of a spidernet, or its edge list.
    Graph {
        model: String,
        /// Print the edge list of the explicit graph instead.
        #[arg(long)]
        edges: bool,
        /// Depth of the explicit graph for --edges.
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Count walks on the explicit graph rather than the stratum profile.
        #[arg(long)]
        explicit: bool,
    },
    /// Sample the spectral density as CSV.
    Density {
        model: String,
        /// Number of sample points across the support.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Also write the atoms as JSON to this file.
        #[arg(long)]
        atoms: Option<PathBuf>,
    },
    /// Print an OEIS entry.
    Lookup { id: String },
}

#[derive(Debug, Subcommand)]
pub enum JcfCommand {
    /// Recover α_1..α_depth, β_1..β_depth from comma-separated terms.
    Extract {
        terms: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Expand a J-fraction source.
    Expand { source: String },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}
