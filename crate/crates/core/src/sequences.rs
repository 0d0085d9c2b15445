//! Lucas sequences `U_n(a, b)`, `V_n(a, b)` and the named sequences
//! `P, R, W, M, χ₃, δ₃`, over residue rings and over exact integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::hypergeo::rational::{int, QuadRational};
use crate::modarith::{Residue, ResidueRing};

/// Parameters of `x_n = a·x_{n-1} - b·x_{n-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LucasParams {
    pub a: i64,
    pub b: i64,
}

impl LucasParams {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn discriminant(&self) -> i64 {
        self.a * self.a - 4 * self.b
    }

    /// Parameters of the shifted roots `α+1, β+1`: `(a + 2, a + b + 1)`.
    pub fn shifted(&self) -> Self {
        Self::new(self.a + 2, self.a + self.b + 1)
    }
}

impl fmt::Display for LucasParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

fn ring_prefix(ring: &ResidueRing, x0: i64, x1: i64, c1: i64, c2: i64, len: usize) -> Vec<Residue> {
    let (c1, c2) = (ring.from_i64(c1), ring.from_i64(c2));
    let mut out = Vec::with_capacity(len);
    let (mut prev, mut cur) = (ring.from_i64(x0), ring.from_i64(x1));
    for _ in 0..len {
        out.push(prev);
        let next = ring.add(ring.mul(c1, cur), ring.mul(c2, prev));
        prev = cur;
        cur = next;
    }
    out
}

fn exact_prefix(x0: i64, x1: i64, c1: i64, c2: i64, len: usize) -> Vec<BigInt> {
    let (c1, c2) = (BigInt::from(c1), BigInt::from(c2));
    let mut out = Vec::with_capacity(len);
    let (mut prev, mut cur) = (BigInt::from(x0), BigInt::from(x1));
    for _ in 0..len {
        let next = &c1 * &cur + &c2 * &prev;
        out.push(std::mem::replace(&mut prev, cur));
        cur = next;
    }
    out
}

/// `U_0..U_{len-1}` reduced in `ring`.
pub fn lucas_u_prefix(len: usize, params: LucasParams, ring: &ResidueRing) -> Vec<Residue> {
    ring_prefix(ring, 0, 1, params.a, -params.b, len)
}

/// `V_0..V_{len-1}` reduced in `ring`.
pub fn lucas_v_prefix(len: usize, params: LucasParams, ring: &ResidueRing) -> Vec<Residue> {
    ring_prefix(ring, 2, params.a, params.a, -params.b, len)
}

pub fn lucas_u(n: u64, params: LucasParams, ring: &ResidueRing) -> Residue {
    lucas_u_prefix(n as usize + 1, params, ring)[n as usize]
}

pub fn lucas_v(n: u64, params: LucasParams, ring: &ResidueRing) -> Residue {
    lucas_v_prefix(n as usize + 1, params, ring)[n as usize]
}

pub fn lucas_u_exact_prefix(len: usize, params: LucasParams) -> Vec<BigInt> {
    exact_prefix(0, 1, params.a, -params.b, len)
}

pub fn lucas_v_exact_prefix(len: usize, params: LucasParams) -> Vec<BigInt> {
    exact_prefix(2, params.a, params.a, -params.b, len)
}

/// `U` or `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LucasFamily {
    U,
    V,
}

impl LucasFamily {
    pub fn prefix(self, len: usize, params: LucasParams, ring: &ResidueRing) -> Vec<Residue> {
        match self {
            Self::U => lucas_u_prefix(len, params, ring),
            Self::V => lucas_v_prefix(len, params, ring),
        }
    }

    pub fn exact_prefix(self, len: usize, params: LucasParams) -> Vec<BigInt> {
        match self {
            Self::U => lucas_u_exact_prefix(len, params),
            Self::V => lucas_v_exact_prefix(len, params),
        }
    }
}

impl fmt::Display for LucasFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::U => "U",
            Self::V => "V",
        })
    }
}

impl FromStr for LucasFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "U" | "u" => Ok(Self::U),
            "V" | "v" => Ok(Self::V),
            other => Err(format!("unknown Lucas family {other:?} (expected U or V)")),
        }
    }
}

/// `χ₃(k)`, the Legendre symbol `(k / 3)`.
pub fn chi3(k: u64) -> i64 {
    match k % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `δ₃(k) = 2` if `3 | k`, else `-1`.
pub fn delta3(k: u64) -> i64 {
    if k.is_multiple_of(3) {
        2
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedSequence {
    /// Pell: `P_0 = 0, P_1 = 1, P_n = 2P_{n-1} + P_{n-2}`.
    P,
    /// `R_0 = 2, R_1 = 4, R_n = 4R_{n-1} - R_{n-2}`.
    R,
    /// `W_0 = 0, W_1 = 1, W_n = 8W_{n-1} + 2W_{n-2}`.
    W,
    /// `M_0 = 0, M_1 = 1, M_n = 3M_{n-1} - 3M_{n-2}`.
    M,
    Chi3,
    Delta3,
}

impl NamedSequence {
    fn recurrence(self) -> Option<(i64, i64, i64, i64)> {
        match self {
            Self::P => Some((0, 1, 2, 1)),
            Self::R => Some((2, 4, 4, -1)),
            Self::W => Some((0, 1, 8, 2)),
            Self::M => Some((0, 1, 3, -3)),
            Self::Chi3 | Self::Delta3 => None,
        }
    }

    fn periodic(self, k: u64) -> i64 {
        match self {
            Self::Chi3 => chi3(k),
            Self::Delta3 => delta3(k),
            _ => unreachable!("not a periodic sequence"),
        }
    }

    pub fn prefix(self, len: usize, ring: &ResidueRing) -> Vec<Residue> {
        match self.recurrence() {
            Some((x0, x1, c1, c2)) => ring_prefix(ring, x0, x1, c1, c2, len),
            None => (0..len as u64)
                .map(|k| ring.from_i64(self.periodic(k)))
                .collect(),
        }
    }

    pub fn exact_prefix(self, len: usize) -> Vec<BigInt> {
        match self.recurrence() {
            Some((x0, x1, c1, c2)) => exact_prefix(x0, x1, c1, c2, len),
            None => (0..len as u64)
                .map(|k| BigInt::from(self.periodic(k)))
                .collect(),
        }
    }
}

pub fn named(tag: NamedSequence, n: u64, ring: &ResidueRing) -> Residue {
    tag.prefix(n as usize + 1, ring)[n as usize]
}

pub fn named_exact(tag: NamedSequence, n: u64) -> BigInt {
    tag.exact_prefix(n as usize + 1)[n as usize].clone()
}

fn pow_big(base: i64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

fn signed_one(odd: bool) -> BigInt {
    if odd {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// Identities linking the named sequences to Lucas parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BridgeIdentity {
    /// `P_n = U_n(2, -1)`
    PellIsLucas,
    /// `R_n = V_n(4, 1)`
    RIsLucas,
    /// `2^{n-1} P_n = U_n(4, -4)` (stated elsewhere without the `-1`; `U_1(4,-4) = 1 = P_1` fixes it)
    PellScale,
    /// `P_{2n} = 2 U_n(6, 1)`
    PellDouble,
    /// `(-4)^n R_n = V_n(-16, 16)`
    RScale,
    /// `(-1)^n R_{2n} = V_n(-14, 1)`
    RDouble,
    /// `4^{n-1} W_n = U_n(32, -32)` for `n ≥ 1`
    WScale,
    /// `2^{-n-2} W_{2n} = U_n(34, 1)`
    WDouble,
    /// `V_n(-4, 4) = -(-2)^{n+1}`
    VMinus4,
    /// `V_n(-2, 1) = 2(-1)^n`
    VMinus2,
    /// `U_n(-1, 1) = χ₃(n)`
    Chi3IsLucas,
    /// `U_n(1, 1) = (-1)^{n-1} χ₃(n)`
    Chi3Signed,
    /// `(-1)^{n-1} M_n = U_n(-3, 3)`
    MIsLucas,
    /// `δ₃(n) = V_n(-1, 1)`
    Delta3IsLucas,
    /// `W_{2n} = 2^{n+2} (α^{2n} - β^{2n}) / (α² - β²)` with `α, β = 3 ± 2√2`
    WBinet,
    /// `V_k(1, 1) = -V_{6h+3-k}(1, 1)` for every `6h + 3 ≤ n`, `0 ≤ k ≤ 6h + 3`
    V11Antisym,
}

impl BridgeIdentity {
    pub const ALL: [BridgeIdentity; 16] = [
        Self::PellIsLucas,
        Self::RIsLucas,
        Self::PellScale,
        Self::PellDouble,
        Self::RScale,
        Self::RDouble,
        Self::WScale,
        Self::WDouble,
        Self::VMinus4,
        Self::VMinus2,
        Self::Chi3IsLucas,
        Self::Chi3Signed,
        Self::MIsLucas,
        Self::Delta3IsLucas,
        Self::WBinet,
        Self::V11Antisym,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::PellIsLucas => "P_eq_U2,-1",
            Self::RIsLucas => "R_eq_V4,1",
            Self::PellScale => "Pscale",
            Self::PellDouble => "P2n_eq_2U6,1",
            Self::RScale => "Rscale",
            Self::RDouble => "R2n_eq_V-14,1",
            Self::WScale => "Wscale",
            Self::WDouble => "W2n_eq_U34,1",
            Self::VMinus4 => "V-4,4_closed",
            Self::VMinus2 => "V-2,1_closed",
            Self::Chi3IsLucas => "chi3_eq_U-1,1",
            Self::Chi3Signed => "U1,1_signed_chi3",
            Self::MIsLucas => "M_eq_U-3,3",
            Self::Delta3IsLucas => "delta3_eq_V-1,1",
            Self::WBinet => "W2n_binet",
            Self::V11Antisym => "V11_antisym",
        }
    }

    /// Whether the identity holds at index `n`, in exact arithmetic.
    pub fn holds_at(self, n: u64) -> bool {
        use NamedSequence::*;
        let len = n as usize + 1;
        let u = |a, b| lucas_u_exact_prefix(len, LucasParams::new(a, b))[n as usize].clone();
        let v = |a, b| lucas_v_exact_prefix(len, LucasParams::new(a, b))[n as usize].clone();
        match self {
            Self::PellIsLucas => named_exact(P, n) == u(2, -1),
            Self::RIsLucas => named_exact(R, n) == v(4, 1),
            Self::PellScale => n == 0 || pow_big(2, n - 1) * named_exact(P, n) == u(4, -4),
            Self::PellDouble => named_exact(P, 2 * n) == BigInt::from(2) * u(6, 1),
            Self::RScale => pow_big(-4, n) * named_exact(R, n) == v(-16, 16),
            Self::RDouble => signed_one(n % 2 == 1) * named_exact(R, 2 * n) == v(-14, 1),
            Self::WScale => n == 0 || pow_big(4, n - 1) * named_exact(W, n) == u(32, -32),
            Self::WDouble => named_exact(W, 2 * n) == pow_big(2, n + 2) * u(34, 1),
            Self::VMinus4 => v(-4, 4) == -pow_big(-2, n + 1),
            Self::VMinus2 => v(-2, 1) == BigInt::from(2) * signed_one(n % 2 == 1),
            Self::Chi3IsLucas => u(-1, 1) == BigInt::from(chi3(n)),
            Self::Chi3Signed => u(1, 1) == signed_one(n.is_multiple_of(2)) * BigInt::from(chi3(n)),
            Self::MIsLucas => signed_one(n.is_multiple_of(2)) * named_exact(M, n) == u(-3, 3),
            Self::Delta3IsLucas => BigInt::from(delta3(n)) == v(-1, 1),
            Self::WBinet => w_binet_holds(n),
            Self::V11Antisym => (0..)
                .map(|h| 6 * h + 3)
                .take_while(|&top| top <= n)
                .all(|top| (0..=top).all(|k| v11_antisymmetry_at(top, k))),
        }
    }
}

fn w_binet_holds(n: u64) -> bool {
    let alpha = QuadRational::from_ints(3, 2, 2);
    let beta = alpha.conj();
    let denom = alpha.pow(2).sub(&beta.pow(2));
    let ratio = alpha
        .pow(2 * n)
        .sub(&beta.pow(2 * n))
        .div(&denom)
        .expect("α² - β² = 24√2 ≠ 0");
    let rhs = ratio.scale(&int(pow_big(2, n + 2)));
    rhs == QuadRational::rational(int(named_exact(NamedSequence::W, 2 * n)), 2)
}

/// `V_k(1, 1) = -V_{top-k}(1, 1)` for `top = 6h + 3`.
pub fn v11_antisymmetry_at(top: u64, k: u64) -> bool {
    let vs = lucas_v_exact_prefix(top as usize + 1, LucasParams::new(1, 1));
    vs[k as usize] == -vs[(top - k) as usize].clone()
}

/// Every bridge identity checked for `0 ≤ n ≤ n_max`.
pub fn bridge_identity_suite(n_max: u64) -> Vec<(&'static str, bool)> {
    BridgeIdentity::ALL
        .iter()
        .map(|&id| {
            let ok = if id == BridgeIdentity::V11Antisym {
                id.holds_at(n_max)
            } else {
                (0..=n_max).all(|n| id.holds_at(n))
            };
            (id.id(), ok)
        })
        .collect()
}

/// `(α - β) U_n = α^n - β^n` and `V_n = α^n + β^n` in `Q[√D]`, `D = a² - 4b ≠ 0`.
pub fn binet_consistent(params: LucasParams, n_max: u64) -> bool {
    let d = params.discriminant();
    if d == 0 {
        return false;
    }
    let half = crate::hypergeo::rational::rat(1, 2);
    let alpha = QuadRational::new(int(params.a) * &half, half.clone(), d);
    let beta = alpha.conj();
    let diff = alpha.sub(&beta);
    let us = lucas_u_exact_prefix(n_max as usize + 1, params);
    let vs = lucas_v_exact_prefix(n_max as usize + 1, params);
    (0..=n_max).all(|n| {
        let (an, bn) = (alpha.pow(n), beta.pow(n));
        let u_ok = diff.scale(&int(us[n as usize].clone())) == an.sub(&bn);
        let v_ok = QuadRational::rational(int(vs[n as usize].clone()), d) == an.add(&bn);
        u_ok && v_ok
    })
}

/// `(x - α - 1)(x - β - 1) = x² - (a+2)x + (a+b+1)`, by comparing coefficients.
pub fn shift_law_holds(params: LucasParams) -> bool {
    let d = params.discriminant();
    let half = crate::hypergeo::rational::rat(1, 2);
    let alpha = QuadRational::new(int(params.a) * &half, half.clone(), d);
    let beta = alpha.conj();
    let one = QuadRational::one(d);
    let (a1, b1) = (alpha.add(&one), beta.add(&one));
    let shifted = params.shifted();
    let sum_ok = a1.add(&b1) == QuadRational::rational(int(shifted.a), d);
    let prod_ok = a1.mul(&b1) == QuadRational::rational(int(shifted.b), d);
    sum_ok && prod_ok
}

/// `true` if the exact sequence is zero from index 2 on (up to `len`).
pub fn is_degenerate(family: LucasFamily, params: LucasParams, len: usize) -> bool {
    family
        .exact_prefix(len, params)
        .iter()
        .skip(2)
        .all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::PrimeModulus;

    fn big_ring() -> ResidueRing {
        // 999983² > 10⁶; residues of small values are the values themselves
        PrimeModulus::new(999_983).unwrap().ring(1)
    }

    #[test]
    fn lucas_examples() {
        let r = big_ring();
        let p = LucasParams::new(7, -3);
        assert_eq!(lucas_u(0, p, &r).value(), 0);
        assert_eq!(lucas_u(2, p, &r).value(), 7);
        assert_eq!(lucas_u(3, LucasParams::new(2, -1), &r).value(), 5);
        assert_eq!(lucas_v(0, p, &r).value(), 2);
        assert_eq!(lucas_v(2, LucasParams::new(4, 1), &r).value(), 14);
        assert_eq!(r.signed(lucas_v(1, LucasParams::new(-1, 1), &r)), -1);
    }

    #[test]
    fn named_examples() {
        let r = big_ring();
        assert_eq!(named(NamedSequence::P, 4, &r).value(), 12);
        assert_eq!(named(NamedSequence::W, 3, &r).value(), 66);
        assert_eq!(named(NamedSequence::M, 3, &r).value(), 6);
        assert_eq!(named(NamedSequence::R, 2, &r).value(), 14);
        assert_eq!(r.signed(named(NamedSequence::Chi3, 5, &r)), -1);
        assert_eq!(r.signed(named(NamedSequence::Delta3, 6, &r)), 2);
    }

    #[test]
    fn ring_and_exact_prefixes_agree() {
        let r = PrimeModulus::new(101).unwrap().ring(2);
        for tag in [
            NamedSequence::P,
            NamedSequence::R,
            NamedSequence::W,
            NamedSequence::M,
        ] {
            let exact = tag.exact_prefix(50);
            let modular = tag.prefix(50, &r);
            for (e, m) in exact.iter().zip(&modular) {
                assert_eq!(crate::hypergeo::rational::reduce_int(e, &r), *m);
            }
        }
    }

    #[test]
    fn bridge_examples() {
        assert!(BridgeIdentity::PellDouble.holds_at(2));
        assert_eq!(named_exact(NamedSequence::P, 4), BigInt::from(12));
        assert!(BridgeIdentity::WScale.holds_at(2));
        assert!(v11_antisymmetry_at(3, 1));
        assert_eq!(
            lucas_v_exact_prefix(3, LucasParams::new(1, 1))[2],
            BigInt::from(-1)
        );
    }

    #[test]
    fn intro_form_of_pell_doubling_is_off_by_two() {
        // P_{2n} = U_n(6,1) fails already at n = 1 (P_2 = 2, U_1 = 1).
        let u = lucas_u_exact_prefix(2, LucasParams::new(6, 1));
        assert_ne!(named_exact(NamedSequence::P, 2), u[1]);
    }

    #[test]
    fn pell_scale_needs_the_shifted_power() {
        // 2^n P_n = U_n(4,-4) fails at n = 1 (2 vs 1); 2^{n-1} P_n matches.
        let u = lucas_u_exact_prefix(4, LucasParams::new(4, -4));
        assert_eq!(
            u,
            vec![0, 1, 4, 20]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );
        assert_ne!(BigInt::from(2) * named_exact(NamedSequence::P, 1), u[1]);
        assert!(BridgeIdentity::PellScale.holds_at(3));
    }

    #[test]
    fn bridge_suite_small() {
        for (id, ok) in bridge_identity_suite(12) {
            assert!(ok, "{id}");
        }
    }

    #[test]
    fn periodicity() {
        for k in 0..60 {
            assert_eq!(chi3(k), chi3(k + 3));
            assert_eq!(delta3(k), delta3(k + 3));
        }
    }

    #[test]
    fn degenerate_guard() {
        assert!(is_degenerate(LucasFamily::U, LucasParams::new(0, 0), 10));
        assert!(!is_degenerate(LucasFamily::U, LucasParams::new(-1, 1), 10));
    }

    #[test]
    fn family_parse() {
        assert_eq!("U".parse::<LucasFamily>().unwrap(), LucasFamily::U);
        assert!("X".parse::<LucasFamily>().is_err());
    }
}
