//! Parallel evaluation of registry checks over a range of primes.

use std::path::PathBuf;

use rayon::prelude::*;

use super::report::ReportFormat;
use super::{primes_in, thread_pool, EngineError, Result};
use crate::catalog::{CheckId, CheckResult, Perturbation, PrimeContext};
use crate::modarith::PrimeModulus;
use crate::sequences::LucasParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub prime_lo: u64,
    pub prime_hi: u64,
    pub checks: Vec<CheckId>,
    pub jobs: usize,
    /// Inclusive `a` and `b` bounds for the parametric checks.
    pub a_range: (i64, i64),
    pub b_range: (i64, i64),
    pub format: ReportFormat,
    pub output: Option<PathBuf>,
    pub perturbation: Option<Perturbation>,
    /// Report real timings instead of `0`.
    pub timing: bool,
}

impl SweepConfig {
    /// All checks over `[lo, hi]` with the default `[-5, 5]²` parameter grid.
    pub fn new(prime_lo: u64, prime_hi: u64) -> Self {
        Self {
            prime_lo,
            prime_hi,
            checks: CheckId::ALL.to_vec(),
            jobs: 1,
            a_range: (-5, 5),
            b_range: (-5, 5),
            format: ReportFormat::Jsonl,
            output: None,
            perturbation: None,
            timing: false,
        }
    }

    pub fn with_checks(mut self, checks: &[CheckId]) -> Self {
        self.checks = checks.to_vec();
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_grid(mut self, a: (i64, i64), b: (i64, i64)) -> Self {
        self.a_range = a;
        self.b_range = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(EngineError::InvalidConfig(m));
        if self.prime_lo < 3 {
            return bad(format!("--from must be at least 3, got {}", self.prime_lo));
        }
        if self.prime_lo > self.prime_hi {
            return bad(format!(
                "--from {} exceeds --to {}",
                self.prime_lo, self.prime_hi
            ));
        }
        if self.prime_hi > u32::MAX as u64 {
            return bad(format!(
                "--to {} is too large: p² must fit in 64 bits",
                self.prime_hi
            ));
        }
        if self.jobs == 0 {
            return bad("--jobs must be at least 1".into());
        }
        if self.checks.is_empty() {
            return bad("no checks selected".into());
        }
        if self.a_range.0 > self.a_range.1 || self.b_range.0 > self.b_range.1 {
            return bad("empty parameter range".into());
        }
        Ok(())
    }

    fn grid(&self) -> Vec<LucasParams> {
        let (a0, a1) = self.a_range;
        let (b0, b1) = self.b_range;
        (a0..=a1)
            .flat_map(|a| (b0..=b1).map(move |b| LucasParams::new(a, b)))
            .collect()
    }
}

/// Parse `all` or a comma-separated id list, keeping registry order.
pub fn parse_checks(s: &str) -> Result<Vec<CheckId>> {
    if s.trim() == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut ids = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<CheckId>())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    ids.sort();
    ids.dedup();
    Ok(ids)
}

fn run_prime(p: u64, cfg: &SweepConfig, grid: &[LucasParams]) -> Result<Vec<CheckResult>> {
    let ctx = PrimeContext::new(PrimeModulus::new(p).map_err(crate::catalog::CatalogError::from)?);
    let mut out = Vec::new();
    for &id in &cfg.checks {
        if id.is_parametric() {
            for &params in grid {
                out.push(ctx.evaluate(id, Some(params), cfg.perturbation)?);
            }
        } else {
            out.push(ctx.evaluate(id, None, cfg.perturbation)?);
        }
    }
    Ok(out)
}

/// Run every selected check at every prime in range, one task per prime.
///
/// Results come back ordered by `(prime, registry order, params)` whatever
/// the worker count.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    let mut checks = cfg.checks.clone();
    checks.sort();
    checks.dedup();
    let cfg = SweepConfig {
        checks,
        ..cfg.clone()
    };
    let primes = primes_in(cfg.prime_lo, cfg.prime_hi);
    let grid = cfg.grid();
    let per_prime: Vec<Vec<CheckResult>> = thread_pool(cfg.jobs)?.install(|| {
        primes
            .par_iter()
            .map(|&p| run_prime(p, &cfg, &grid))
            .collect::<Result<_>>()
    })?;
    Ok(per_prime.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub results: usize,
    pub applicable: usize,
    pub passed: usize,
    pub failed: usize,
}

impl SweepSummary {
    pub fn of(results: &[CheckResult]) -> Self {
        let applicable = results.iter().filter(|r| r.applicable).count();
        let passed = results.iter().filter(|r| r.pass == Some(true)).count();
        Self {
            results: results.len(),
            applicable,
            passed,
            failed: applicable - passed,
        }
    }

    /// `0` when every applicable check passed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm1_i_up_to_hundred() {
        let cfg = SweepConfig::new(3, 100).with_checks(&[CheckId::Thm1I]);
        let results = sweep(&cfg).unwrap();
        let applicable: Vec<u64> = results
            .iter()
            .filter(|r| r.applicable)
            .map(|r| r.prime)
            .collect();
        assert_eq!(
            applicable,
            vec![3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83]
        );
        assert!(results
            .iter()
            .filter(|r| r.applicable)
            .all(|r| r.pass == Some(true)));
    }

    #[test]
    fn all_checks_at_seven() {
        let results = sweep(&SweepConfig::new(7, 7).with_grid((-1, 1), (-1, 1))).unwrap();
        let s = SweepSummary::of(&results);
        assert_eq!(s.results, 28 + 2 * 9);
        assert_eq!((s.failed, s.exit_code()), (0, 0));
    }

    #[test]
    fn empty_range_gives_nothing() {
        assert!(sweep(&SweepConfig::new(4, 4)).unwrap().is_empty());
    }

    #[test]
    fn invalid_configs() {
        assert!(sweep(&SweepConfig::new(2, 10)).is_err());
        assert!(sweep(&SweepConfig::new(11, 10)).is_err());
        assert!(sweep(&SweepConfig::new(3, 10).with_jobs(0)).is_err());
        assert!(sweep(&SweepConfig::new(3, 10).with_checks(&[])).is_err());
    }

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("all").unwrap().len(), CheckId::ALL.len());
        assert_eq!(
            parse_checks("morley,thm1_i,morley").unwrap(),
            vec![CheckId::Thm1I, CheckId::Morley]
        );
        assert!(parse_checks("thm1_i,nope").is_err());
    }

    #[test]
    fn ordering_is_stable_across_jobs() {
        let base = SweepConfig::new(3, 200).with_grid((-1, 1), (0, 1));
        let one = sweep(&base.clone().with_jobs(1)).unwrap();
        let four = sweep(&base.with_jobs(4)).unwrap();
        let strip = |v: &[CheckResult]| {
            v.iter()
                .map(|r| (r.prime, r.id, r.params, r.lhs))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&one), strip(&four));
    }
}
