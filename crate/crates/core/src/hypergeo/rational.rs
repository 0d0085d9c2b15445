//! Exact rationals, `a + b√d` pairs over them, and `p`-adic reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
pub use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HypergeoError;
use crate::modarith::{Residue, ResidueRing};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `v_p(n)` for nonzero `n`, `None` for zero.
pub fn valuation_int(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        cur = q;
        v += 1;
    }
}

/// `v_p(r)` for nonzero `r`, `None` for zero.
pub fn valuation(r: &BigRational, p: u64) -> Option<i64> {
    let num = valuation_int(r.numer(), p)? as i64;
    let den = valuation_int(r.denom(), p).unwrap_or(0) as i64;
    Some(num - den)
}

fn big_mod(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

/// Image of a `p`-integral rational in `Z/mZ`.
pub fn reduce_rational(r: &BigRational, ring: &ResidueRing) -> Result<Residue, HypergeoError> {
    let m = ring.modulus();
    let den = ring.from_u64(big_mod(r.denom(), m));
    let inv = ring
        .inv(den)
        .map_err(|_| HypergeoError::NotPIntegral(r.to_string()))?;
    Ok(ring.mul(ring.from_u64(big_mod(r.numer(), m)), inv))
}

pub fn reduce_int(n: &BigInt, ring: &ResidueRing) -> Residue {
    ring.from_u64(big_mod(n, ring.modulus()))
}

/// Generalized binomial `binom(r, k) = r(r-1)…(r-k+1) / k!`.
pub fn gen_binom(r: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (r - int(i)) / int(i + 1);
    }
    acc
}

/// `a + b√d` with rational coordinates.
///
/// `d` is kept as given. For non-square `d` this is the field `Q(√d)`; for
/// square `d` it is the ring `Q[x]/(x² - d)` and equality stays formal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRational {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

impl fmt::Debug for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})√{}", self.a, self.b, self.d)
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl QuadRational {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        Self { a, b, d }
    }

    pub fn from_ints(a: i64, b: i64, d: i64) -> Self {
        Self::new(int(a), int(b), d)
    }

    pub fn rational(a: BigRational, d: i64) -> Self {
        Self::new(a, BigRational::zero(), d)
    }

    pub fn zero(d: i64) -> Self {
        Self::rational(BigRational::zero(), d)
    }

    pub fn one(d: i64) -> Self {
        Self::rational(BigRational::one(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.d, o.d, "QuadRational operands with different d");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self::new(&self.a + &o.a, &self.b + &o.b, self.d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Self::new(&self.a - &o.a, &self.b - &o.b, self.d)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, self.d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = int(self.d);
        Self::new(
            &self.a * &o.a + d * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
            self.d,
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.a * r, &self.b * r, self.d)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.d)
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - int(self.d) * &self.b * &self.b
    }

    /// Inverse through the norm; `None` when the norm vanishes.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.d);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Component-wise reduction into `Z/mZ`.
    pub fn reduce(&self, ring: &ResidueRing) -> Result<(Residue, Residue), HypergeoError> {
        Ok((
            reduce_rational(&self.a, ring)?,
            reduce_rational(&self.b, ring)?,
        ))
    }

    /// Smallest `p`-adic valuation of the two coordinates; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        match (valuation(&self.a, p), valuation(&self.b, p)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// Sign helper for exact sums: `(-1)^k`.
pub fn sign(k: u64) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `|n|` as `u64`, for small exact values that are known to fit.
pub fn abs_u64(n: &BigInt) -> Option<u64> {
    n.abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::PrimeModulus;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(135, 112), 5), Some(1));
        assert_eq!(valuation(&rat(7, 49), 7), Some(-1));
        assert_eq!(valuation(&rat(0, 1), 7), None);
        assert_eq!(valuation_int(&BigInt::from(-250), 5), Some(3));
    }

    #[test]
    fn reduce_rational_mod_p_squared() {
        let ring = PrimeModulus::new(3).unwrap().ring(2);
        // 9/16 ≡ 0 mod 9
        assert_eq!(reduce_rational(&rat(9, 16), &ring).unwrap().value(), 0);
        // -1/2 ≡ 4 mod 9
        assert_eq!(reduce_rational(&rat(-1, 2), &ring).unwrap().value(), 4);
        assert!(reduce_rational(&rat(1, 3), &ring).is_err());
    }

    #[test]
    fn quad_field_ops() {
        let a = QuadRational::from_ints(1, 1, 2);
        assert_eq!(a.pow(2), QuadRational::from_ints(3, 2, 2));
        assert_eq!(a.mul(&a.inv().unwrap()), QuadRational::one(2));
        let z = a.pow(2);
        // -4z/(1-z)² = -1
        let one = QuadRational::one(2);
        let w = z.scale(&int(-4)).div(&one.sub(&z).pow(2)).unwrap();
        assert_eq!(w, QuadRational::rational(int(-1), 2));
        // square d: 1 + x with x² = 1 is a zero divisor
        assert!(QuadRational::from_ints(1, 1, 1).inv().is_none());
    }

    #[test]
    fn gen_binom_half_integer() {
        assert_eq!(gen_binom(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(gen_binom(&int(5), 2), int(10));
        assert_eq!(gen_binom(&int(2), 3), int(0));
    }
}
