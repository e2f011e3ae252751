//! Flags shared by every subcommand, and the exit-code taxonomy.

use std::path::PathBuf;

use clap::{Args, ValueEnum};

use rigidlab::numeric::{Backend, DEFAULT_TOLERANCE};

pub const EXIT_OK: u8 = 0;
/// An I/O or internal failure that is none of the below.
pub const EXIT_ERROR: u8 = 1;
/// A check ran to completion and found a counterexample.
pub const EXIT_VERIFY: u8 = 2;
/// A search or growth budget ran out before an answer.
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_USAGE: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Svg,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Coordinate arithmetic: exact ℚ(√3, √11) or floating point.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
    /// Comparison tolerance τ; float backend only [default: 1e-9].
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed for every sampled choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search-node limit for each unit-map enumeration.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub branch_limit: u64,
    /// Most homomorphisms to enumerate.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub hom_limit: usize,
    /// Output file (a directory for verify-all); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl RunConfig {
    pub fn backend(&self) -> Backend {
        match self.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }

    /// τ for the float backend.
    pub fn tau(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn validate(&self) -> Result<(), String> {
        match (self.backend, self.tolerance) {
            (BackendArg::Exact, Some(_)) => Err("--tolerance only applies with --backend float".into()),
            (_, Some(t)) if !(t.is_finite() && t >= 0.0) => Err(format!("--tolerance must be a non-negative number, got {t}")),
            _ => Ok(()),
        }
    }
}
