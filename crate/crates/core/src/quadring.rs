//! Arithmetic in `R[ω]/(ω² - d)` over `R = Z/pZ` or `Z/p²Z`.
//!
//! The ring is not assumed to be a field: when `d` is a square mod `p` it
//! splits, and `ω` itself may share a factor with `p`. Division is only
//! available through an explicit norm inversion.

use std::fmt;

use thiserror::Error;

use crate::modarith::{binom_row, PrimeModulus, Residue, ResidueRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("operands live in different rings (d = {0} vs {1}, or different moduli)")]
    ModulusMismatch(i64, i64),
    #[error("element has non-invertible norm {0}")]
    NotInvertible(u64),
    #[error("variant {variant} does not apply to p = {p}")]
    NotApplicable { variant: &'static str, p: u64 },
}

pub type Result<T> = std::result::Result<T, QuadError>;

/// `x + y·ω` with `ω² = d`, coordinates reduced in `ring`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElem {
    x: Residue,
    y: Residue,
    d: i64,
    ring: ResidueRing,
}

impl QuadElem {
    pub fn new(x: i64, y: i64, d: i64, ring: ResidueRing) -> Self {
        Self {
            x: ring.from_i64(x),
            y: ring.from_i64(y),
            d,
            ring,
        }
    }

    pub fn from_residues(x: Residue, y: Residue, d: i64, ring: ResidueRing) -> Self {
        Self {
            x: ring.reduce(x),
            y: ring.reduce(y),
            d,
            ring,
        }
    }

    pub fn one(d: i64, ring: ResidueRing) -> Self {
        Self::new(1, 0, d, ring)
    }

    pub fn zero(d: i64, ring: ResidueRing) -> Self {
        Self::new(0, 0, d, ring)
    }

    pub fn x(&self) -> Residue {
        self.x
    }

    pub fn y(&self) -> Residue {
        self.y
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.ring != other.ring {
            return Err(QuadError::ModulusMismatch(self.d, other.d));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let r = &self.ring;
        Ok(Self {
            x: r.add(self.x, other.x),
            y: r.add(self.y, other.y),
            ..*self
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let r = &self.ring;
        Ok(Self {
            x: r.sub(self.x, other.x),
            y: r.sub(self.y, other.y),
            ..*self
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let r = &self.ring;
        let d = r.from_i64(self.d);
        let x = r.add(r.mul(self.x, other.x), r.mul(d, r.mul(self.y, other.y)));
        let y = r.add(r.mul(self.x, other.y), r.mul(other.x, self.y));
        Self { x, y, ..*self }
    }

    pub fn scale(&self, k: Residue) -> Self {
        let r = &self.ring;
        Self {
            x: r.mul(self.x, k),
            y: r.mul(self.y, k),
            ..*self
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            x: self.ring.neg(self.x),
            y: self.ring.neg(self.y),
            ..*self
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            y: self.ring.neg(self.y),
            ..*self
        }
    }

    /// `x² - d·y²`.
    pub fn norm(&self) -> Residue {
        let r = &self.ring;
        r.sub(
            r.mul(self.x, self.x),
            r.mul(r.from_i64(self.d), r.mul(self.y, self.y)),
        )
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.d, self.ring);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// `conj(u) / norm(u)`; fails when the norm is not a unit.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        let n_inv = self
            .ring
            .inv(n)
            .map_err(|_| QuadError::NotInvertible(n.value()))?;
        Ok(self.conj().scale(n_inv))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}·√{} (mod {})",
            self.x,
            self.y,
            self.d,
            self.ring.modulus()
        )
    }
}

pub fn quad_mul(u: &QuadElem, v: &QuadElem) -> Result<QuadElem> {
    u.mul(v)
}

pub fn quad_pow(u: &QuadElem, e: u64) -> QuadElem {
    u.pow(e)
}

/// True iff `u^(p-1) = 1`.
pub fn frobenius_check(u: &QuadElem, p: &PrimeModulus) -> Result<bool> {
    let unit = !u.norm().value().is_multiple_of(p.p());
    if !unit {
        return Err(QuadError::NotInvertible(u.norm().value()));
    }
    Ok(u.pow(p.p() - 1) == QuadElem::one(u.d, u.ring))
}

/// The three vanishing sums `Σ binom((p-1)/2, k)² σ^k ≡ 0 (mod p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma31Variant {
    /// `σ = (1+√2)²`, `p ≡ 5, 7 (mod 8)`.
    I,
    /// `σ = -(2+√3)²`, `p ≡ 2 (mod 3)`.
    II,
    /// `σ = (3+2√2)²`, `p ≡ 3 (mod 4)`.
    III,
}

impl Lemma31Variant {
    pub const ALL: [Lemma31Variant; 3] = [Self::I, Self::II, Self::III];

    pub fn name(self) -> &'static str {
        match self {
            Self::I => "i",
            Self::II => "ii",
            Self::III => "iii",
        }
    }

    pub fn applies(self, p: u64) -> bool {
        match self {
            Self::I => p % 8 == 5 || p % 8 == 7,
            Self::II => p % 3 == 2,
            Self::III => p % 4 == 3,
        }
    }

    pub fn discriminant(self) -> i64 {
        match self {
            Self::I | Self::III => 2,
            Self::II => 3,
        }
    }

    /// `σ` as integer coordinates `(x, y)` of `x + y√d`.
    pub fn sigma(self) -> (i64, i64) {
        match self {
            Self::I => (3, 2),
            Self::II => (-7, -4),
            Self::III => (17, 12),
        }
    }
}

/// `Σ_{k ≤ (p-1)/2} binom((p-1)/2, k)² σ^k mod p`; zero whenever the variant applies.
pub fn lemma31_sum(variant: Lemma31Variant, p: &PrimeModulus) -> Result<QuadElem> {
    if !variant.applies(p.p()) {
        return Err(QuadError::NotApplicable {
            variant: variant.name(),
            p: p.p(),
        });
    }
    Ok(lemma31_sum_unchecked(variant, p))
}

pub(crate) fn lemma31_sum_unchecked(variant: Lemma31Variant, p: &PrimeModulus) -> QuadElem {
    let ring = p.ring(1);
    let d = variant.discriminant();
    let (sx, sy) = variant.sigma();
    let sigma = QuadElem::new(sx, sy, d, ring);
    let binoms = binom_row(&ring, p.half());
    let mut acc = QuadElem::zero(d, ring);
    let mut power = QuadElem::one(d, ring);
    for b in binoms {
        let term = power.scale(ring.mul(b, b));
        acc = acc.add(&term).expect("same ring");
        power = power.mul_unchecked(&sigma);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, power: u32) -> ResidueRing {
        PrimeModulus::new(p).unwrap().ring(power)
    }

    #[test]
    fn mul_examples() {
        let r = ring(101, 2);
        let a = QuadElem::new(1, 1, 2, r);
        assert_eq!(quad_mul(&a, &a).unwrap(), QuadElem::new(3, 2, 2, r));
        let b = QuadElem::new(2, 1, 3, r);
        assert_eq!(quad_mul(&b, &b.conj()).unwrap(), QuadElem::one(3, r));
        assert_eq!(quad_mul(&a, &a.conj()).unwrap(), QuadElem::new(-1, 0, 2, r));
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = QuadElem::new(1, 1, 2, ring(7, 1));
        let b = QuadElem::new(1, 1, 3, ring(7, 1));
        let c = QuadElem::new(1, 1, 2, ring(7, 2));
        assert!(matches!(
            quad_mul(&a, &b),
            Err(QuadError::ModulusMismatch(2, 3))
        ));
        assert!(quad_mul(&a, &c).is_err());
    }

    #[test]
    fn pow_examples() {
        let r = ring(1009, 2);
        let a = QuadElem::new(1, 1, 2, r);
        assert_eq!(quad_pow(&a, 0), QuadElem::one(2, r));
        assert_eq!(quad_pow(&a, 2), QuadElem::new(3, 2, 2, r));
        assert_eq!(
            quad_pow(&QuadElem::new(3, 2, 2, r), 2),
            QuadElem::new(17, 12, 2, r)
        );
    }

    #[test]
    fn inverse_via_norm() {
        let r = ring(13, 2);
        let a = QuadElem::new(4, 7, 2, r);
        assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), QuadElem::one(2, r));
        // 3 + √2 has norm 7 ≡ 0 mod 7
        assert!(QuadElem::new(3, 1, 2, ring(7, 1)).inv().is_err());
    }

    #[test]
    fn lemma31_examples() {
        let p = |q| PrimeModulus::new(q).unwrap();
        assert!(lemma31_sum(Lemma31Variant::I, &p(7)).unwrap().is_zero());
        assert!(lemma31_sum(Lemma31Variant::II, &p(5)).unwrap().is_zero());
        assert!(lemma31_sum(Lemma31Variant::III, &p(7)).unwrap().is_zero());
        assert!(matches!(
            lemma31_sum(Lemma31Variant::I, &p(17)),
            Err(QuadError::NotApplicable { .. })
        ));
    }

    #[test]
    fn lemma31_holds_on_applicable_primes() {
        for q in (3..600u64).filter(|&q| crate::modarith::is_prime(q)) {
            let p = PrimeModulus::new(q).unwrap();
            for v in Lemma31Variant::ALL {
                if v.applies(q) {
                    assert!(
                        lemma31_sum(v, &p).unwrap().is_zero(),
                        "variant {} p={q}",
                        v.name()
                    );
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let p7 = PrimeModulus::new(7).unwrap();
        let p11 = PrimeModulus::new(11).unwrap();
        assert!(frobenius_check(&QuadElem::new(1, 1, 2, p7.ring(1)), &p7).unwrap());
        assert!(frobenius_check(&QuadElem::new(2, 1, 3, p11.ring(1)), &p11).unwrap());
        assert!(frobenius_check(&QuadElem::one(2, p11.ring(1)), &p11).unwrap());
        assert!(frobenius_check(&QuadElem::new(3, 1, 2, p7.ring(1)), &p7).is_err());
    }

    #[test]
    fn frobenius_fails_when_two_is_a_non_residue() {
        // p = 5: (1+√2)^4 lives in F_25 and is not 1.
        let p5 = PrimeModulus::new(5).unwrap();
        assert!(!frobenius_check(&QuadElem::new(1, 1, 2, p5.ring(1)), &p5).unwrap());
    }
}
