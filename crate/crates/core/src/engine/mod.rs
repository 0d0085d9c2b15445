//! Prime sieve, parallel sweeps, the Lucas-parameter scanner, identity
//! suites and report writers.

pub mod config;
pub mod identities;
pub mod report;
pub mod scan;
pub mod sieve;
pub mod sweep;

use thiserror::Error;

use crate::catalog::CatalogError;

pub use identities::{run_identity_suites, SuiteLine};
pub use report::{emit_report, write_report, ReportFormat};
pub use scan::{scan, ScanConfig, ScanFinding};
pub use sieve::primes_in;
pub use sweep::{sweep, SweepConfig, SweepSummary};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, EngineError>;

/// Parse `LO:HI` (inclusive).
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || EngineError::InvalidConfig(format!("expected LO:HI, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(EngineError::InvalidConfig(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| EngineError::InvalidConfig(format!("cannot start {jobs} workers: {e}")))
}
