//! Residue arithmetic modulo `p` and `p²`.
//!
//! Every sum in the catalog is reduced in `Z/pZ` or `Z/p²Z`. Residues are
//! kept canonical in `[0, m)`; the modulus lives in a [`ResidueRing`] context
//! so two residues of different moduli are never combined by accident.
//!
//! Binomial tables are built with multiplicative recurrences. Every divisor
//! used is an index `k < p`, which is a unit modulo `p²`, so the recurrences
//! agree exactly with the integer values reduced mod `p²`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("index {index} out of range for p = {p}")]
    IndexOutOfRange { index: u64, p: u64 },
    #[error("{a} is not coprime to p = {p}")]
    NotCoprime { a: i64, p: u64 },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("p = {0} is too large: p² must fit in 64 bits")]
    PrimeTooLarge(u64),
}

pub type Result<T> = std::result::Result<T, ModArithError>;

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `x` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(x: u64, m: u64) -> Result<u64> {
    let (mut old_r, mut r) = ((x % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(ModArithError::NotInvertible {
            value: x,
            modulus: m,
        });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// An odd prime together with its cached square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
    p_squared: u64,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(ModArithError::NotOddPrime(p));
        }
        let p_squared = p.checked_mul(p).ok_or(ModArithError::PrimeTooLarge(p))?;
        Ok(Self { p, p_squared })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_squared(&self) -> u64 {
        self.p_squared
    }

    /// `(p - 1) / 2`, the upper limit of the half-range sums.
    pub fn half(&self) -> u64 {
        (self.p - 1) / 2
    }

    /// `p` or `p²` depending on `power` (1 or 2).
    pub fn ring(&self, power: u32) -> ResidueRing {
        let m = match power {
            1 => self.p,
            2 => self.p_squared,
            _ => panic!("modulus power must be 1 or 2, got {power}"),
        };
        ResidueRing {
            p: self.p,
            m,
            power,
        }
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// A canonical residue in `[0, m)`. The modulus is carried by the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Residue(u64);

impl Residue {
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Z/mZ` with `m ∈ {p, p²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    p: u64,
    m: u64,
    power: u32,
}

impl ResidueRing {
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn zero(&self) -> Residue {
        Residue(0)
    }

    pub fn one(&self) -> Residue {
        Residue(1 % self.m)
    }

    pub fn from_u64(&self, x: u64) -> Residue {
        Residue(x % self.m)
    }

    pub fn from_i64(&self, x: i64) -> Residue {
        Residue((x as i128).rem_euclid(self.m as i128) as u64)
    }

    pub fn from_i128(&self, x: i128) -> Residue {
        Residue(x.rem_euclid(self.m as i128) as u64)
    }

    /// Reinterpret a residue of another ring (e.g. reduce mod p² to mod p).
    pub fn reduce(&self, x: Residue) -> Residue {
        Residue(x.0 % self.m)
    }

    /// Representative in `(-m/2, m/2]`, handy for diagnostics.
    pub fn signed(&self, x: Residue) -> i64 {
        if x.0 > self.m / 2 {
            x.0 as i64 - self.m as i64
        } else {
            x.0 as i64
        }
    }

    #[inline]
    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a.0 as u128 + b.0 as u128;
        let m = self.m as u128;
        Residue(if s >= m { s - m } else { s } as u64)
    }

    #[inline]
    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        if a.0 >= b.0 {
            Residue(a.0 - b.0)
        } else {
            Residue(self.m - (b.0 - a.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Residue) -> Residue {
        if a.0 == 0 {
            a
        } else {
            Residue(self.m - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        Residue(mul_mod(a.0, b.0, self.m))
    }

    pub fn mul_u64(&self, a: Residue, k: u64) -> Residue {
        self.mul(a, self.from_u64(k))
    }

    pub fn pow(&self, a: Residue, e: u64) -> Residue {
        Residue(pow_mod(a.0, e, self.m))
    }

    /// Inverse; defined iff `p` does not divide the residue.
    pub fn inv(&self, a: Residue) -> Result<Residue> {
        if a.0.is_multiple_of(self.p) {
            return Err(ModArithError::NotInvertible {
                value: a.0,
                modulus: self.m,
            });
        }
        inv_mod(a.0, self.m).map(Residue)
    }

    /// `(-1)^k` as a residue.
    pub fn sign(&self, k: u64) -> Residue {
        if k.is_multiple_of(2) {
            self.one()
        } else {
            self.neg(self.one())
        }
    }

    /// Sum of `a[i] * b[i]`, accumulated in 128 bits and reduced lazily.
    pub fn dot(&self, a: &[Residue], b: &[Residue]) -> Residue {
        let m = self.m as u128;
        let max_prod = (m - 1) * (m - 1);
        let chunk = if max_prod == 0 {
            usize::MAX
        } else {
            ((u128::MAX - m) / max_prod).clamp(1, usize::MAX as u128) as usize
        };
        let mut acc: u128 = 0;
        let mut pending = 0usize;
        for (x, y) in a.iter().zip(b) {
            acc += x.0 as u128 * y.0 as u128;
            pending += 1;
            if pending == chunk {
                acc %= m;
                pending = 0;
            }
        }
        Residue((acc % m) as u64)
    }

    /// Powers `x^0, …, x^(len-1)`.
    pub fn powers(&self, x: Residue, len: usize) -> Vec<Residue> {
        let mut out = Vec::with_capacity(len);
        let mut cur = self.one();
        for _ in 0..len {
            out.push(cur);
            cur = self.mul(cur, x);
        }
        out
    }

    /// Inverses of `1..len` (index 0 holds 0), via `inv(i) = -(m / i) inv(m mod i)`.
    ///
    /// Valid for `len ≤ p`: for `1 < i < p`, `m mod i` is a nonzero unit below `i`.
    pub fn inverse_table(&self, len: usize) -> Vec<Residue> {
        assert!(
            len as u64 <= self.p,
            "inverse table only covers indices below p"
        );
        let mut inv = vec![Residue(0); len];
        if len > 1 {
            inv[1] = self.one();
        }
        for i in 2..len {
            let q = self.m / i as u64;
            let r = (self.m % i as u64) as usize;
            inv[i] = self.neg(self.mul(self.from_u64(q), inv[r]));
        }
        inv
    }
}

/// Legendre symbol `(d / p)` by Euler's criterion.
pub fn legendre(d: i64, p: &PrimeModulus) -> i8 {
    let ring = p.ring(1);
    let x = ring.from_i64(d);
    if x.is_zero() {
        return 0;
    }
    let e = ring.pow(x, (p.p() - 1) / 2);
    if e == ring.one() {
        1
    } else {
        -1
    }
}

/// `binom(2k, k)` for `k = 0..len` reduced in `ring`; requires `len ≤ p`.
pub fn central_binom_table(ring: &ResidueRing, len: usize) -> Vec<Residue> {
    let inv = ring.inverse_table(len);
    let mut out = Vec::with_capacity(len);
    let mut cur = ring.one();
    for k in 0..len {
        if k > 0 {
            let k64 = k as u64;
            cur = ring.mul(ring.mul_u64(cur, 2 * (2 * k64 - 1)), inv[k]);
        }
        out.push(cur);
    }
    out
}

/// `binom(p - 1, k)` for `k = 0..p` reduced in `ring`.
pub fn row_binom_table(ring: &ResidueRing) -> Vec<Residue> {
    let p = ring.prime();
    let inv = ring.inverse_table(p as usize);
    let mut out = Vec::with_capacity(p as usize);
    let mut cur = ring.one();
    for k in 0..p {
        if k > 0 {
            cur = ring.mul(ring.mul_u64(cur, p - k), inv[k as usize]);
        }
        out.push(cur);
    }
    out
}

/// `binom(n, k)` for `k = 0..=n` reduced in `ring`; requires `n < p`.
pub fn binom_row(ring: &ResidueRing, n: u64) -> Vec<Residue> {
    assert!(n < ring.prime(), "binom_row needs n < p");
    let inv = ring.inverse_table(n as usize + 1);
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut cur = ring.one();
    for k in 0..=n {
        if k > 0 {
            cur = ring.mul(ring.mul_u64(cur, n - k + 1), inv[k as usize]);
        }
        out.push(cur);
    }
    out
}

/// `binom(2k, k) mod p²`.
pub fn central_binom_p2(k: u64, p: &PrimeModulus) -> Result<Residue> {
    if k >= p.p() {
        return Err(ModArithError::IndexOutOfRange { index: k, p: p.p() });
    }
    let ring = p.ring(2);
    Ok(*central_binom_table(&ring, k as usize + 1)
        .last()
        .expect("non-empty"))
}

/// `binom(p - 1, k) mod p²`.
pub fn row_binom_p2(k: u64, p: &PrimeModulus) -> Result<Residue> {
    if k >= p.p() {
        return Err(ModArithError::IndexOutOfRange { index: k, p: p.p() });
    }
    Ok(row_binom_table(&p.ring(2))[k as usize])
}

/// Harmonic numbers `H_0..H_{p-1}` modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicTable {
    entries: Vec<Residue>,
}

impl HarmonicTable {
    pub fn new(p: &PrimeModulus) -> Self {
        let ring = p.ring(1);
        let inv = ring.inverse_table(p.p() as usize);
        let mut entries = Vec::with_capacity(p.p() as usize);
        let mut acc = ring.zero();
        entries.push(acc);
        for x in inv.iter().skip(1) {
            acc = ring.add(acc, *x);
            entries.push(acc);
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[Residue] {
        &self.entries
    }

    pub fn get(&self, n: usize) -> Residue {
        self.entries[n]
    }
}

pub fn harmonic_table(p: &PrimeModulus) -> HarmonicTable {
    HarmonicTable::new(p)
}

/// Fermat quotient `(a^(p-1) - 1) / p mod p`, read off `a^(p-1) mod p²`.
pub fn fermat_quotient(a: i64, p: &PrimeModulus) -> Result<Residue> {
    let ring2 = p.ring(2);
    let base = ring2.from_i64(a);
    if base.value().is_multiple_of(p.p()) {
        return Err(ModArithError::NotCoprime { a, p: p.p() });
    }
    let t = ring2.pow(base, p.p() - 1);
    // t ≡ 1 mod p, so t - 1 is an exact multiple of p below p².
    let q = ring2.sub(t, ring2.one()).value() / p.p();
    Ok(p.ring(1).from_u64(q))
}
