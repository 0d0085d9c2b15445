//! Search for vanishing sums `Σ_{k<p} C(p-1,k) C(2k,k)² S_k(a,b) / m^k ≡ 0 (mod p²)`
//! over Lucas parameters, grouped by residue class of `p`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::{primes_in, thread_pool, EngineError, Result};
use crate::catalog::{Applicability, CheckId, PrimeContext};
use crate::hypergeo::rational::{sign, BigRational};
use crate::modarith::PrimeModulus;
use crate::sequences::{is_degenerate, LucasFamily, LucasParams, NamedSequence};

/// Residue classes are tracked modulo this number.
pub const CLASS_MODULUS: u64 = 24;

/// Terms compared when matching a weight sequence against a registry template.
const MATCH_TERMS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub families: Vec<LucasFamily>,
    pub a_range: (i64, i64),
    pub b_range: (i64, i64),
    pub denoms: Vec<i64>,
    pub prime_hi: u64,
    pub min_primes: usize,
    pub jobs: usize,
}

impl ScanConfig {
    pub fn new(prime_hi: u64) -> Self {
        Self {
            families: vec![LucasFamily::U, LucasFamily::V],
            a_range: (-5, 5),
            b_range: (-5, 5),
            denoms: vec![-16, -8, -4, 4, 8, 16],
            prime_hi,
            min_primes: 8,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(EngineError::InvalidGrid(m.to_string()));
        if self.families.is_empty() {
            return bad("no family selected");
        }
        if self.denoms.is_empty() || self.denoms.contains(&0) {
            return bad("denominators must be a nonempty list of nonzero integers");
        }
        if self.a_range.0 > self.a_range.1 || self.b_range.0 > self.b_range.1 {
            return bad("empty parameter range");
        }
        if self.min_primes < 5 {
            return bad("min-primes must be at least 5");
        }
        if self.prime_hi < 3 || self.prime_hi > u32::MAX as u64 {
            return bad("prime bound out of range");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }
}

/// A parameter point whose sum vanished at every tested prime of a residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanFinding {
    pub family: LucasFamily,
    pub params: LucasParams,
    pub denom: i64,
    /// `r mod modulus`.
    pub residue_class: (u64, u64),
    /// Classes mod [`CLASS_MODULUS`] that actually contained tested primes.
    pub fine_classes: Vec<u64>,
    /// Tested primes in ascending order.
    pub primes: Vec<u64>,
    pub all_passed: bool,
    pub known_match: Option<CheckId>,
    /// Tested primes dividing `a² - 4b`.
    pub discriminant_primes: Vec<u64>,
}

impl ScanFinding {
    pub fn primes_tested(&self) -> usize {
        self.primes.len()
    }

    /// `"alternating"` when the denominator is negative.
    pub fn sign_pattern(&self) -> &'static str {
        if self.denom < 0 {
            "alternating"
        } else {
            "constant"
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "family": self.family.to_string(),
            "a": self.params.a,
            "b": self.params.b,
            "denom": self.denom,
            "sign_pattern": self.sign_pattern(),
            "residue_class": { "r": self.residue_class.0, "mod": self.residue_class.1 },
            "primes_tested": self.primes_tested(),
            "all_passed": self.all_passed,
            "known_match": self.known_match.map(|id| id.as_str()),
            "first_primes": self.primes.iter().take(3).collect::<Vec<_>>(),
            "discriminant_primes": self.discriminant_primes,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    family: LucasFamily,
    params: LucasParams,
    denom: i64,
}

/// Per-point tallies for one class mod [`CLASS_MODULUS`].
#[derive(Debug, Clone, Default)]
struct ClassTally {
    primes: Vec<u64>,
    failed: bool,
}

fn grid_points(cfg: &ScanConfig) -> (Vec<Point>, usize) {
    let mut points = Vec::new();
    let mut skipped = 0;
    for &family in &cfg.families {
        for a in cfg.a_range.0..=cfg.a_range.1 {
            for b in cfg.b_range.0..=cfg.b_range.1 {
                let params = LucasParams::new(a, b);
                if is_degenerate(family, params, MATCH_TERMS) {
                    skipped += 1;
                    continue;
                }
                points.extend(cfg.denoms.iter().map(|&denom| Point {
                    family,
                    params,
                    denom,
                }));
            }
        }
    }
    (points, skipped)
}

/// `Some(true)` when the sum vanishes at `p`, `None` when `p | denom`.
fn evaluate_prime(p: u64, points: &[Point]) -> Vec<Option<bool>> {
    let ctx = PrimeContext::new(PrimeModulus::new(p).expect("sieved odd prime"));
    let ring = ctx.prime().ring(2);
    let mut out = Vec::with_capacity(points.len());
    let mut cached: Option<(LucasFamily, LucasParams, Vec<_>)> = None;
    for pt in points {
        let fresh = !matches!(&cached, Some((f, q, _)) if *f == pt.family && *q == pt.params);
        if fresh {
            cached = Some((
                pt.family,
                pt.params,
                pt.family.prefix(p as usize, pt.params, &ring),
            ));
        }
        let seq = &cached.as_ref().expect("just filled").2;
        out.push(ctx.weighted_sum(seq, pt.denom).map(|r| r.is_zero()));
    }
    out
}

struct Template {
    id: CheckId,
    weights: Vec<BigRational>,
}

fn weights(seq: &[BigInt], denom: i64) -> Vec<BigRational> {
    let mut scale = BigInt::one();
    seq.iter()
        .map(|s| {
            let w = BigRational::new(s.clone(), scale.clone());
            scale *= denom;
            w
        })
        .collect()
}

fn templates() -> Vec<Template> {
    let n = MATCH_TERMS;
    let named = |t: NamedSequence| t.exact_prefix(n);
    let ones = vec![BigInt::one(); n];
    let signed_m: Vec<BigInt> = named(NamedSequence::M)
        .into_iter()
        .enumerate()
        .map(|(k, x)| sign(k as u64) * x)
        .collect();
    vec![
        Template {
            id: CheckId::Thm1I,
            weights: weights(&ones, -8),
        },
        Template {
            id: CheckId::Thm1Ii,
            weights: weights(&named(NamedSequence::Chi3), 16),
        },
        Template {
            id: CheckId::Thm1Iii,
            weights: weights(&named(NamedSequence::P), 8),
        },
        Template {
            id: CheckId::Thm1Iv,
            weights: weights(&named(NamedSequence::R), -4),
        },
        Template {
            id: CheckId::Thm1nI,
            weights: weights(&named(NamedSequence::W), 4),
        },
        Template {
            id: CheckId::Thm1nIi,
            weights: weights(&signed_m, 16),
        },
        Template {
            id: CheckId::Thm1nIii,
            weights: weights(&named(NamedSequence::Delta3), 16),
        },
    ]
}

/// `true` if `w = c·t` termwise for some nonzero constant `c`.
fn proportional(w: &[BigRational], t: &[BigRational]) -> bool {
    let Some(k) = t.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let c = &w[k] / &t[k];
    !c.is_zero() && w.iter().zip(t).all(|(x, y)| *x == &c * y)
}

fn known_match(pt: &Point, fine_classes: &[u64], templates: &[Template]) -> Option<CheckId> {
    let w = weights(&pt.family.exact_prefix(MATCH_TERMS, pt.params), pt.denom);
    templates.iter().find_map(|t| {
        let inside = match t.id.descriptor().applicability {
            Applicability::Classes(m, rs) => fine_classes.iter().all(|c| rs.contains(&(c % m))),
            _ => false,
        };
        (inside && proportional(&w, &t.weights)).then_some(t.id)
    })
}

/// Coarsest classes `r mod d` (`d` an even divisor of 24, `r` odd) whose
/// tested primes all passed, with at least `min_primes` primes.
fn coalesce(tallies: &[ClassTally], min_primes: usize) -> Vec<((u64, u64), Vec<u64>)> {
    let populated = |c: u64| !tallies[c as usize].primes.is_empty();
    let mut covered: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    for d in [2u64, 4, 6, 8, 12, 24] {
        for r in (1..d).step_by(2) {
            let fine: Vec<u64> = (0..CLASS_MODULUS)
                .filter(|&c| c % d == r && populated(c))
                .collect();
            if fine.is_empty() || fine.iter().any(|c| covered.contains(c)) {
                continue;
            }
            if fine.iter().any(|&c| tallies[c as usize].failed) {
                continue;
            }
            let count: usize = fine.iter().map(|&c| tallies[c as usize].primes.len()).sum();
            if count >= min_primes {
                covered.extend(fine.iter().copied());
                out.push(((r, d), fine));
            }
        }
    }
    out
}

/// Run the scan. Degenerate weight sequences (zero from index 2 on) are skipped.
pub fn scan(cfg: &ScanConfig) -> Result<Vec<ScanFinding>> {
    cfg.validate()?;
    let (points, _) = grid_points(cfg);
    let primes = primes_in(3, cfg.prime_hi);
    let table: Vec<Vec<Option<bool>>> = thread_pool(cfg.jobs)?.install(|| {
        primes
            .par_iter()
            .map(|&p| evaluate_prime(p, &points))
            .collect()
    });
    let templates = templates();
    let mut findings = Vec::new();
    for (i, pt) in points.iter().enumerate() {
        let mut tallies = vec![ClassTally::default(); CLASS_MODULUS as usize];
        for (j, &p) in primes.iter().enumerate() {
            if let Some(ok) = table[j][i] {
                let t = &mut tallies[(p % CLASS_MODULUS) as usize];
                t.primes.push(p);
                t.failed |= !ok;
            }
        }
        for (class, fine) in coalesce(&tallies, cfg.min_primes) {
            let mut tested: Vec<u64> = fine
                .iter()
                .flat_map(|&c| tallies[c as usize].primes.clone())
                .collect();
            tested.sort_unstable();
            let disc = pt.params.discriminant();
            let discriminant_primes = tested
                .iter()
                .copied()
                .filter(|&p| disc % p as i64 == 0)
                .collect();
            findings.push(ScanFinding {
                family: pt.family,
                params: pt.params,
                denom: pt.denom,
                residue_class: class,
                known_match: known_match(pt, &fine, &templates),
                fine_classes: fine,
                primes: tested,
                all_passed: true,
                discriminant_primes,
            });
        }
    }
    Ok(findings)
}

/// Number of grid points skipped as degenerate.
pub fn degenerate_count(cfg: &ScanConfig) -> usize {
    grid_points(cfg).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(
        families: Vec<LucasFamily>,
        a: (i64, i64),
        b: (i64, i64),
        denoms: Vec<i64>,
    ) -> ScanConfig {
        ScanConfig {
            families,
            a_range: a,
            b_range: b,
            denoms,
            prime_hi: 400,
            min_primes: 5,
            jobs: 2,
        }
    }

    #[test]
    fn rediscovers_chi3_point() {
        let found = scan(&small(vec![LucasFamily::U], (-1, -1), (1, 1), vec![16])).unwrap();
        let hit = found
            .iter()
            .find(|f| f.residue_class == (1, 12))
            .expect("class 1 mod 12");
        assert_eq!(hit.known_match, Some(CheckId::Thm1Ii));
        assert!(hit.primes_tested() >= 5);
    }

    #[test]
    fn rediscovers_minus_four_four() {
        let found = scan(&small(vec![LucasFamily::V], (-4, -4), (4, 4), vec![16])).unwrap();
        let hit = found
            .iter()
            .find(|f| f.residue_class == (3, 4))
            .expect("class 3 mod 4");
        assert_eq!(hit.known_match, Some(CheckId::Thm1I));
    }

    #[test]
    fn degenerate_points_are_skipped() {
        let cfg = small(
            vec![LucasFamily::U, LucasFamily::V],
            (0, 0),
            (0, 0),
            vec![4],
        );
        assert_eq!(degenerate_count(&cfg), 2);
        assert!(scan(&cfg).unwrap().is_empty());
    }

    #[test]
    fn proportional_templates() {
        let t = weights(&[BigInt::from(0), BigInt::from(1), BigInt::from(2)], 8);
        let w = weights(&[BigInt::from(0), BigInt::from(2), BigInt::from(8)], 16);
        assert!(proportional(&w, &t));
        let off = weights(&[BigInt::from(0), BigInt::from(2), BigInt::from(9)], 16);
        assert!(!proportional(&off, &t));
    }

    #[test]
    fn coalescing_prefers_coarse_classes() {
        let mut tallies = vec![ClassTally::default(); 24];
        for (c, p) in [
            (1u64, 73u64),
            (5, 5),
            (7, 7),
            (11, 11),
            (13, 13),
            (17, 17),
            (19, 19),
            (23, 23),
        ] {
            tallies[c as usize].primes.push(p);
        }
        let got = coalesce(&tallies, 5);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, (1, 2));
        tallies[5].failed = true;
        let got: Vec<(u64, u64)> = coalesce(&tallies, 2).into_iter().map(|x| x.0).collect();
        assert!(got.contains(&(3, 4)));
        assert!(!got.contains(&(1, 4)));
    }

    #[test]
    fn invalid_grids() {
        let mut cfg = ScanConfig::new(100);
        cfg.min_primes = 4;
        assert!(matches!(scan(&cfg), Err(EngineError::InvalidGrid(_))));
        let mut cfg = ScanConfig::new(100);
        cfg.denoms = vec![0];
        assert!(scan(&cfg).is_err());
    }
}
