//! Exact hypergeometric machinery: Pochhammer symbols, truncated `₂F₁`,
//! quadratic transformations checked as formal power-series identities,
//! and the finite sums and products behind the vanishing-sum checks.
//!
//! Nothing here touches floating point. Transformations are compared
//! coefficient by coefficient, so convergence and branch questions never
//! arise: every binomial series `(1 + w)^s` starts with constant term 1.

pub mod rational;
pub mod series;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::modarith::PrimeModulus;
use crate::quadring::Lemma31Variant;
use rational::{int, rat, sign, valuation, BigRational, QuadRational};
use series::SeriesPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergeoError {
    #[error("lower parameter {c} meets a pole: (c)_{k} vanishes")]
    LowerParameterPole { c: String, k: u64 },
    #[error("inner series of a composition must have zero constant term")]
    NonZeroConstantTerm,
    #[error("{0} is not p-integral")]
    NotPIntegral(String),
    #[error("variant {variant} does not apply to p = {p}")]
    NotApplicable { variant: &'static str, p: u64 },
}

pub type Result<T> = std::result::Result<T, HypergeoError>;

/// Rising factorial `a(a+1)…(a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, k: u64) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, i| acc * (a + int(i)))
}

/// The first `order` coefficients of `₂F₁(a, b; c | z)` as a series in `z`.
pub fn hypergeometric_series(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    order: usize,
) -> Result<SeriesPoly<BigRational>> {
    let mut coeffs = Vec::with_capacity(order);
    let mut term = BigRational::one();
    for k in 0..order as u64 {
        coeffs.push(term.clone());
        if k + 1 == order as u64 {
            break;
        }
        let denom = (c + int(k)) * int(k + 1);
        if denom.is_zero() {
            return Err(HypergeoError::LowerParameterPole {
                c: c.to_string(),
                k: k + 1,
            });
        }
        term = term * (a + int(k)) * (b + int(k)) / denom;
    }
    Ok(SeriesPoly::from_rationals(coeffs, order))
}

/// `Σ_{k < terms} (a)_k (b)_k / ((c)_k k!) z^k`, exactly.
pub fn truncated_2f1(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    z: &QuadRational,
    terms: usize,
) -> Result<QuadRational> {
    Ok(hypergeometric_series(a, b, c, terms)?.evaluate_quad(z))
}

/// The three quadratic transformations with left side `₂F₁(a, b; a-b+1 | ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    /// `(1-z)^{-a} ₂F₁(a/2, a/2-b+1/2; a-b+1 | -4z/(1-z)²)`.
    T314,
    /// `(1+z)^{-a} ₂F₁(a/2, a/2+1/2; a-b+1 | 4z/(1+z)²)`.
    T319,
    /// Left side at `z²`; right side `(1+z)^{-2a} ₂F₁(a, a-b+1/2; 2a-2b+1 | 4z/(1+z)²)`.
    T3111,
}

impl Transform {
    pub const ALL: [Transform; 3] = [Self::T314, Self::T319, Self::T3111];

    pub fn name(self) -> &'static str {
        match self {
            Self::T314 => "T314",
            Self::T319 => "T319",
            Self::T3111 => "T3111",
        }
    }
}

/// Both sides of a transformation, expanded to `order` coefficients.
pub fn transform_sides(
    id: Transform,
    a: &BigRational,
    b: &BigRational,
    order: usize,
) -> Result<(SeriesPoly<BigRational>, SeriesPoly<BigRational>)> {
    let half = rat(1, 2);
    let c = a - b + int(1);
    let z = SeriesPoly::<BigRational>::variable(order, ());
    let lhs_f = hypergeometric_series(a, b, &c, order)?;
    match id {
        Transform::T314 => {
            let w = z
                .scale(&int(-4))
                .mul(&SeriesPoly::binomial_scaled(&int(-1), &int(-2), order));
            let inner = hypergeometric_series(&(a * &half), &(a * &half - b + &half), &c, order)?;
            let rhs = SeriesPoly::binomial_scaled(&int(-1), &-a, order).mul(&inner.compose(&w)?);
            Ok((lhs_f, rhs))
        }
        Transform::T319 => {
            let w = z.scale(&int(4)).mul(&SeriesPoly::binomial(&int(-2), order));
            let inner = hypergeometric_series(&(a * &half), &(a * &half + &half), &c, order)?;
            let rhs = SeriesPoly::binomial(&-a, order).mul(&inner.compose(&w)?);
            Ok((lhs_f, rhs))
        }
        Transform::T3111 => {
            let z2 = z.mul(&z);
            let lhs = lhs_f.compose(&z2)?;
            let w = z.scale(&int(4)).mul(&SeriesPoly::binomial(&int(-2), order));
            let inner = hypergeometric_series(
                a,
                &(a - b + &half),
                &(int(2) * a - int(2) * b + int(1)),
                order,
            )?;
            let rhs = SeriesPoly::binomial(&(int(-2) * a), order).mul(&inner.compose(&w)?);
            Ok((lhs, rhs))
        }
    }
}

/// Coefficient-wise equality of both sides up to `order`.
pub fn transform_check(
    id: Transform,
    a: &BigRational,
    b: &BigRational,
    order: usize,
) -> Result<bool> {
    let (lhs, rhs) = transform_sides(id, a, b, order)?;
    Ok(lhs == rhs)
}

/// `Σ_k (-1)^k binom(n, k)²`, summed directly.
pub fn alternating_square_sum(n: u64) -> BigInt {
    let nb = BigInt::from(n);
    (0..=n)
        .map(|k| {
            let b = binomial(nb.clone(), BigInt::from(k));
            sign(k) * &b * &b
        })
        .sum()
}

/// `0` for odd `n`, `(-1)^{n/2} binom(n, n/2)` for even `n`.
pub fn alternating_square_closed_form(n: u64) -> BigInt {
    if n % 2 == 1 {
        BigInt::zero()
    } else {
        sign(n / 2) * binomial(BigInt::from(n), BigInt::from(n / 2))
    }
}

/// `Σ_k binom(n-j, n-k) binom(r, k) = binom(r+n-j, n)` for rational `r`, `0 ≤ j ≤ n`.
pub fn chu_vandermonde_check(n: u64, j: u64, r: &BigRational) -> bool {
    assert!(j <= n, "chu_vandermonde_check needs j ≤ n");
    let upper = int(n - j);
    let lhs: BigRational = (0..=n)
        .map(|k| rational::gen_binom(&upper, n - k) * rational::gen_binom(r, k))
        .sum();
    lhs == rational::gen_binom(&(r + upper), n)
}

/// `Π_{j < (p-1)/2} (3/2 + j) / (4/3 + j)`: the Γ-ratio evaluation at `a = -(p-1)/4`.
pub fn gamma_ratio_product(p: &PrimeModulus) -> BigRational {
    (0..p.half()).fold(BigRational::one(), |acc, j| {
        acc * (rat(3, 2) + int(j)) / (rat(4, 3) + int(j))
    })
}

/// `v_p((p/2 + 1)_k - (1)_k) ≥ 1` for every `k ≤ (p-1)/2`.
pub fn pochhammer_shift_check(p: &PrimeModulus) -> bool {
    let shifted = rat(p.p() as i64, 2) + int(1);
    (0..=p.half()).all(|k| {
        let diff = pochhammer(&shifted, k) - pochhammer(&int(1), k);
        valuation(&diff, p.p()).is_none_or(|v| v >= 1)
    })
}

/// `₂F₁(-n/2, -n/2 + 1/2; p/2 + 1 | -1/3) = (8/9)^n Π (3/2+j)/(4/3+j)` with `n = (p-1)/2`.
pub fn gamma_evaluation_check(p: &PrimeModulus) -> Result<bool> {
    let n = p.half();
    let a = rat(-(n as i64), 2);
    let b = &a + rat(1, 2);
    let c = rat(p.p() as i64, 2) + int(1);
    let z = QuadRational::rational(rat(-1, 3), 3);
    let lhs = truncated_2f1(&a, &b, &c, &z, n as usize + 2)?;
    let eight_ninths = (0..n).fold(BigRational::one(), |acc, _| acc * rat(8, 9));
    let rhs = eight_ninths * gamma_ratio_product(p);
    Ok(lhs == QuadRational::rational(rhs, 3))
}

/// Outcome of re-deriving one vanishing sum through a terminating transformation.
#[derive(Debug, Clone)]
pub struct Lemma31Report {
    pub variant: Lemma31Variant,
    pub p: u64,
    /// Upper binomial index actually used (`(p-1)/2`, or `(3p-1)/2` on the `p ≡ 7 mod 8` route).
    pub n: u64,
    pub lhs: QuadRational,
    pub rhs: QuadRational,
    /// The terminating `₂F₁` factor on the right side.
    pub factor: QuadRational,
    /// Further links of the argument, each checked on its own.
    pub links: Vec<(&'static str, bool)>,
}

impl Lemma31Report {
    pub fn identity_holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn all_hold(&self) -> bool {
        self.identity_holds() && self.links.iter().all(|(_, ok)| *ok)
    }
}

fn square_binomial_sum(n: u64, z: &QuadRational) -> QuadRational {
    let nb = BigInt::from(n);
    let mut acc = QuadRational::zero(z.d);
    let mut power = QuadRational::one(z.d);
    for k in 0..=n {
        let b = binomial(nb.clone(), BigInt::from(k));
        acc = acc.add(&power.scale(&int(&b * &b)));
        power = power.mul(z);
    }
    acc
}

fn vanishes_mod_p(x: &QuadRational, p: u64) -> bool {
    x.valuation(p).is_none_or(|v| v >= 1)
}

fn congruent_mod_p(x: &QuadRational, y: &QuadRational, p: u64) -> bool {
    vanishes_mod_p(&x.sub(y), p)
}

/// Exact check of the terminating transformation behind each vanishing sum.
pub fn lemma31_finite_sum_identity(
    p: &PrimeModulus,
    variant: Lemma31Variant,
) -> Result<Lemma31Report> {
    let q = p.p();
    if !variant.applies(q) {
        return Err(HypergeoError::NotApplicable {
            variant: variant.name(),
            p: q,
        });
    }
    let half = p.half();
    let one = |d| QuadRational::one(d);
    let mut links = Vec::new();
    let report = match variant {
        Lemma31Variant::I => {
            let z = QuadRational::from_ints(3, 2, 2);
            let n = if q % 8 == 5 { half } else { (3 * q - 1) / 2 };
            let w = z
                .scale(&int(-4))
                .div(&one(2).sub(&z).pow(2))
                .expect("1 - z is a unit");
            links.push((
                "argument_is_minus_one",
                w == QuadRational::rational(int(-1), 2),
            ));
            let m = n / 2;
            let factor = truncated_2f1(
                &int(-(m as i64)),
                &(rat(n as i64, 2) + rat(1, 2)),
                &int(1),
                &w,
                m as usize + 1,
            )?;
            let lhs = square_binomial_sum(n, &z);
            let rhs = one(2).sub(&z).pow(n).mul(&factor);
            let closed = QuadRational::rational(int(alternating_square_sum(m)), 2);
            links.push((
                "factor_matches_alternating_sum_mod_p",
                congruent_mod_p(&factor, &closed, q),
            ));
            links.push(("factor_vanishes_mod_p", vanishes_mod_p(&factor, q)));
            if n != half {
                // Lucas: the long sum is (1 + z^p) times the short one mod p.
                let short = square_binomial_sum(half, &z);
                let lifted = one(2).add(&z.pow(q)).mul(&short);
                links.push(("lucas_lift_mod_p", congruent_mod_p(&lhs, &lifted, q)));
                let unit = one(2).add(&z.pow(q)).norm();
                links.push(("lift_factor_is_unit", valuation(&unit, q) == Some(0)));
            }
            Lemma31Report {
                variant,
                p: q,
                n,
                lhs,
                rhs,
                factor,
                links,
            }
        }
        Lemma31Variant::II => {
            let z = QuadRational::from_ints(-7, -4, 3);
            let n = half;
            let w = z
                .scale(&int(4))
                .div(&one(3).add(&z).pow(2))
                .expect("1 + z is a unit");
            links.push((
                "argument_is_minus_one_third",
                w == QuadRational::rational(rat(-1, 3), 3),
            ));
            let a = rat(-(n as i64), 2);
            let b = &a + rat(1, 2);
            let factor = truncated_2f1(&a, &b, &int(1), &w, n as usize + 1)?;
            let lhs = square_binomial_sum(n, &z);
            let rhs = one(3).add(&z).pow(n).mul(&factor);
            let shifted = truncated_2f1(&a, &b, &(rat(q as i64, 2) + int(1)), &w, n as usize + 1)?;
            links.push((
                "lower_parameter_shift_mod_p",
                congruent_mod_p(&factor, &shifted, q),
            ));
            links.push(("pochhammer_shift_valuation", pochhammer_shift_check(p)));
            links.push(("gamma_evaluation_exact", gamma_evaluation_check(p)?));
            let gamma_v = valuation(&gamma_ratio_product(p), q).is_none_or(|v| v >= 1);
            links.push(("gamma_product_vanishes_mod_p", gamma_v));
            links.push(("factor_vanishes_mod_p", vanishes_mod_p(&factor, q)));
            Lemma31Report {
                variant,
                p: q,
                n,
                lhs,
                rhs,
                factor,
                links,
            }
        }
        Lemma31Variant::III => {
            let z = QuadRational::from_ints(-3, -2, 2);
            let n = half;
            let w = z
                .scale(&int(4))
                .div(&one(2).add(&z).pow(2))
                .expect("1 + z is a unit");
            links.push((
                "argument_is_minus_one",
                w == QuadRational::rational(int(-1), 2),
            ));
            let factor = truncated_2f1(&int(-(n as i64)), &rat(1, 2), &int(1), &w, n as usize + 1)?;
            let lhs = square_binomial_sum(n, &z.mul(&z));
            let rhs = one(2).add(&z).pow(2 * n).mul(&factor);
            let closed = QuadRational::rational(int(alternating_square_sum(n)), 2);
            links.push((
                "factor_matches_alternating_sum_mod_p",
                congruent_mod_p(&factor, &closed, q),
            ));
            links.push(("factor_vanishes_mod_p", vanishes_mod_p(&factor, q)));
            Lemma31Report {
                variant,
                p: q,
                n,
                lhs,
                rhs,
                factor,
                links,
            }
        }
    };
    // The reduced sum itself must vanish mod p.
    let mut report = report;
    let ring = p.ring(1);
    let lhs_ok = report
        .lhs
        .reduce(&ring)
        .map(|(x, y)| x.is_zero() && y.is_zero())
        .unwrap_or(false);
    report.links.push(("sum_vanishes_mod_p", lhs_ok));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&int(1), 3), int(6));
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
    }

    #[test]
    fn truncated_2f1_examples() {
        let z = QuadRational::from_ints(0, 1, 5);
        let v = truncated_2f1(&int(-1), &int(-1), &int(1), &z, 2).unwrap();
        assert_eq!(v, QuadRational::one(5).add(&z));
        let one = QuadRational::one(2);
        assert_eq!(
            truncated_2f1(&int(-2), &int(-2), &int(1), &one, 3).unwrap(),
            QuadRational::from_ints(6, 0, 2)
        );
        let m1 = QuadRational::from_ints(-1, 0, 2);
        assert_eq!(
            truncated_2f1(&int(-2), &rat(3, 2), &int(1), &m1, 3).unwrap(),
            QuadRational::rational(rat(47, 8), 2)
        );
    }

    #[test]
    fn lower_parameter_pole() {
        let z = QuadRational::one(2);
        let err = truncated_2f1(&rat(1, 2), &rat(1, 3), &int(-2), &z, 5).unwrap_err();
        assert!(matches!(
            err,
            HypergeoError::LowerParameterPole { k: 3, .. }
        ));
        // the pole is outside a short truncation
        assert!(truncated_2f1(&rat(1, 2), &rat(1, 3), &int(-2), &z, 3).is_ok());
    }

    #[test]
    fn transform_examples() {
        let (lhs, rhs) = transform_sides(Transform::T314, &int(-2), &int(-2), 3).unwrap();
        assert_eq!(lhs.coeffs(), &[int(1), int(4), int(1)]);
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = transform_sides(Transform::T314, &int(-1), &int(-1), 2).unwrap();
        assert_eq!(lhs.coeffs(), &[int(1), int(1)]);
        assert_eq!(lhs, rhs);
        for t in Transform::ALL {
            assert!(transform_check(t, &rat(2, 7), &rat(-3, 5), 1).unwrap());
        }
    }

    #[test]
    fn transform_detects_mismatched_sides() {
        let (lhs, rhs) = transform_sides(Transform::T314, &rat(1, 3), &rat(1, 5), 6).unwrap();
        assert_eq!(lhs, rhs);
        let (_, rhs_other) = transform_sides(Transform::T314, &rat(1, 3), &rat(1, 7), 6).unwrap();
        assert_ne!(lhs, rhs_other);
        // T314 and T319 rewrite the same left side, so their right sides agree.
        let (_, rhs_319) = transform_sides(Transform::T319, &rat(1, 3), &rat(1, 5), 6).unwrap();
        assert_eq!(rhs, rhs_319);
    }

    #[test]
    fn alternating_square_examples() {
        assert_eq!(alternating_square_sum(1), BigInt::from(0));
        assert_eq!(alternating_square_sum(2), BigInt::from(-2));
        assert_eq!(alternating_square_sum(7), BigInt::from(0));
        assert_eq!(alternating_square_sum(0), BigInt::from(1));
    }

    #[test]
    fn chu_vandermonde_examples() {
        assert!(chu_vandermonde_check(2, 0, &int(3)));
        assert!(chu_vandermonde_check(3, 1, &rat(-5, 2)));
        assert!(chu_vandermonde_check(0, 0, &rat(7, 3)));
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio_product(&pm(5)), rat(135, 112));
        assert_eq!(valuation(&gamma_ratio_product(&pm(5)), 5), Some(1));
        assert!(valuation(&gamma_ratio_product(&pm(11)), 11).unwrap() >= 1);
        assert_eq!(valuation(&gamma_ratio_product(&pm(7)), 7), Some(0));
    }

    #[test]
    fn gamma_evaluation_matches_series() {
        for p in [5, 7, 11, 13, 17, 23, 29] {
            assert!(gamma_evaluation_check(&pm(p)).unwrap(), "p = {p}");
            assert!(pochhammer_shift_check(&pm(p)));
        }
    }

    #[test]
    fn lemma31_identity_examples() {
        for (p, v) in [
            (5, Lemma31Variant::I),
            (13, Lemma31Variant::I),
            (7, Lemma31Variant::I),
            (7, Lemma31Variant::III),
        ] {
            let r = lemma31_finite_sum_identity(&pm(p), v).unwrap();
            assert!(r.all_hold(), "p={p} {:?}: {:?}", v, r.links);
        }
        let r = lemma31_finite_sum_identity(&pm(7), Lemma31Variant::III).unwrap();
        assert_eq!(alternating_square_sum(3), BigInt::from(0));
        assert!(vanishes_mod_p(&r.factor, 7));
        assert!(lemma31_finite_sum_identity(&pm(13), Lemma31Variant::III).is_err());
    }

    #[test]
    fn lemma31_identity_variant_ii() {
        for p in [5, 11, 17, 23, 29, 41] {
            let r = lemma31_finite_sum_identity(&pm(p), Lemma31Variant::II).unwrap();
            assert!(r.all_hold(), "p={p}: {:?}", r.links);
        }
    }
}
