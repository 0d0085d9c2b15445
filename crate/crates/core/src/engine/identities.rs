//! Exact identity suites: sequence bridges, `₂F₁` transformations,
//! Chu–Vandermonde, alternating squares and the Γ-ratio product.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hypergeo::rational::{int, rat, valuation, BigRational};
use crate::hypergeo::{
    alternating_square_closed_form, alternating_square_sum, chu_vandermonde_check,
    gamma_ratio_product, lemma31_finite_sum_identity, transform_check, Transform,
};
use crate::modarith::PrimeModulus;
use crate::quadring::Lemma31Variant;
use crate::sequences::{binet_consistent, bridge_identity_suite, shift_law_holds, LucasParams};

use super::primes_in;

/// Aggregate outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteLine {
    pub suite: &'static str,
    pub cases: usize,
    /// Labels of failing cases.
    pub failures: Vec<String>,
}

impl SuiteLine {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Collector {
    suite: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Collector {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(label());
        }
    }

    fn finish(self) -> SuiteLine {
        SuiteLine {
            suite: self.suite,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

/// `true` if `x` is one of `0, -1, -2, …`.
fn non_positive_integer(x: &BigRational) -> bool {
    x.is_integer() && *x <= int(0)
}

/// `count` seeded pairs `(a, b)` of small rationals whose lower parameters avoid poles.
pub fn random_rational_pairs(count: usize, seed: u64) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng| rat(rng.random_range(-7..=7), rng.random_range(1..=6));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let c = &a - &b + int(1);
        let c2 = int(2) * &a - int(2) * &b + int(1);
        if !non_positive_integer(&c) && !non_positive_integer(&c2) {
            out.push((a, b));
        }
    }
    out
}

fn bridge_suite(max_n: u64) -> SuiteLine {
    let mut c = Collector::new("bridge_identities");
    for (id, ok) in bridge_identity_suite(max_n) {
        c.record(ok, || id.to_string());
    }
    c.finish()
}

fn lucas_suite() -> SuiteLine {
    let mut c = Collector::new("binet_and_shift_law");
    for a in -3..=3 {
        for b in -3..=3 {
            let params = LucasParams::new(a, b);
            if params.discriminant() != 0 {
                c.record(binet_consistent(params, 40), || format!("binet {params}"));
            }
            c.record(shift_law_holds(params), || format!("shift {params}"));
        }
    }
    c.finish()
}

fn transform_suite(order: usize) -> SuiteLine {
    let mut c = Collector::new("quadratic_transformations");
    for (a, b) in random_rational_pairs(20, 0x5eed) {
        for t in Transform::ALL {
            c.record(transform_check(t, &a, &b, order).unwrap_or(false), || {
                format!("{} a={a} b={b}", t.name())
            });
        }
    }
    for n in 0..=12i64 {
        let a = int(-n);
        let ord = order.max(2 * n as usize + 2);
        for t in Transform::ALL {
            c.record(transform_check(t, &a, &a, ord).unwrap_or(false), || {
                format!("{} a=b=-{n}", t.name())
            });
        }
    }
    c.finish()
}

fn chu_vandermonde_suite() -> SuiteLine {
    let mut c = Collector::new("chu_vandermonde");
    for n in 0..=30u64 {
        for m in 0..=30i64 {
            for r in [int(m), rat(-(2 * m + 1), 2)] {
                for j in 0..=n {
                    c.record(chu_vandermonde_check(n, j, &r), || {
                        format!("n={n} j={j} r={r}")
                    });
                }
            }
        }
    }
    c.finish()
}

fn alternating_suite(max_n: u64) -> SuiteLine {
    let mut c = Collector::new("alternating_squares");
    for n in 0..=max_n {
        c.record(
            alternating_square_sum(n) == alternating_square_closed_form(n),
            || format!("n={n}"),
        );
    }
    c.finish()
}

fn gamma_suite() -> SuiteLine {
    let mut c = Collector::new("gamma_ratio_valuation");
    for p in primes_in(5, 1000) {
        let v = valuation(
            &gamma_ratio_product(&PrimeModulus::new(p).expect("odd prime")),
            p,
        );
        let ok = if p % 3 == 2 {
            v.is_none_or(|v| v >= 1)
        } else {
            v == Some(0)
        };
        c.record(ok, || format!("p={p} v={v:?}"));
    }
    c.finish()
}

fn terminating_sum_suite() -> SuiteLine {
    let mut c = Collector::new("terminating_sum_identities");
    for p in primes_in(5, 100) {
        let pm = PrimeModulus::new(p).expect("odd prime");
        for v in Lemma31Variant::ALL.into_iter().filter(|v| v.applies(p)) {
            let ok = lemma31_finite_sum_identity(&pm, v)
                .map(|r| r.all_hold())
                .unwrap_or(false);
            c.record(ok, || format!("{} p={p}", v.name()));
        }
    }
    c.finish()
}

/// Run every suite; `max_n` bounds the sequence suites, `order` the series.
pub fn run_identity_suites(max_n: u64, order: usize) -> Vec<SuiteLine> {
    vec![
        bridge_suite(max_n),
        lucas_suite(),
        transform_suite(order),
        chu_vandermonde_suite(),
        alternating_suite(max_n),
        gamma_suite(),
        terminating_sum_suite(),
    ]
}
