//! Truncated formal power series with exact coefficients.

use std::fmt;

use num_traits::{One, Zero};

use super::rational::{gen_binom, BigRational, QuadRational};
use super::HypergeoError;

/// Coefficient type of a [`SeriesPoly`].
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    /// Extra data needed to build constants (`()` for rationals, `d` for `Q(√d)`).
    type Ctx: Copy + PartialEq + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: Self::Ctx) -> Self;
    fn one_in(ctx: Self::Ctx) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scaled(&self, r: &BigRational) -> Self;
    fn is_nil(&self) -> bool;
}

impl Scalar for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: ()) -> Self {
        BigRational::zero()
    }
    fn one_in(_: ()) -> Self {
        BigRational::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scaled(&self, r: &BigRational) -> Self {
        self * r
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for QuadRational {
    type Ctx = i64;

    fn ctx(&self) -> i64 {
        self.d
    }
    fn zero_in(d: i64) -> Self {
        QuadRational::zero(d)
    }
    fn one_in(d: i64) -> Self {
        QuadRational::one(d)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn scaled(&self, r: &BigRational) -> Self {
        self.scale(r)
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
}

/// `c_0 + c_1 z + … + c_{T-1} z^{T-1} + O(z^T)`; `T` is the truncation order.
#[derive(Clone, PartialEq)]
pub struct SeriesPoly<T: Scalar> {
    coeffs: Vec<T>,
    ctx: T::Ctx,
}

impl<T: Scalar> fmt::Debug for SeriesPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<T: Scalar> SeriesPoly<T> {
    /// Coefficients are padded or cut to exactly `order` entries.
    pub fn new(mut coeffs: Vec<T>, order: usize, ctx: T::Ctx) -> Self {
        coeffs.resize(order, T::zero_in(ctx));
        Self { coeffs, ctx }
    }

    pub fn zero(order: usize, ctx: T::Ctx) -> Self {
        Self::new(Vec::new(), order, ctx)
    }

    pub fn constant(c: T, order: usize) -> Self {
        let ctx = c.ctx();
        Self::new(vec![c], order, ctx)
    }

    /// The series `z`.
    pub fn variable(order: usize, ctx: T::Ctx) -> Self {
        Self::new(vec![T::zero_in(ctx), T::one_in(ctx)], order, ctx)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    fn common_order(&self, o: &Self) -> usize {
        assert_eq!(self.ctx, o.ctx, "series over different scalar contexts");
        self.order().min(o.order())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.common_order(o);
        let c = (0..n).map(|i| self.coeffs[i].plus(&o.coeffs[i])).collect();
        Self::new(c, n, self.ctx)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scaled(r)).collect(),
            ctx: self.ctx,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.common_order(o);
        let mut out = vec![T::zero_in(self.ctx); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_nil() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self {
            coeffs: out,
            ctx: self.ctx,
        }
    }

    /// `self(inner(z))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, HypergeoError> {
        if !inner.coeffs.first().is_none_or(T::is_nil) {
            return Err(HypergeoError::NonZeroConstantTerm);
        }
        let n = self.common_order(inner);
        let mut acc = Self::zero(n, self.ctx);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] = acc.coeffs[0].plus(c);
        }
        Ok(acc)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero_in(self.ctx), |acc, c| acc.times(x).plus(c))
    }
}

impl SeriesPoly<BigRational> {
    pub fn from_rationals(coeffs: Vec<BigRational>, order: usize) -> Self {
        Self::new(coeffs, order, ())
    }

    /// `(1 + z)^s = Σ binom(s, k) z^k`; constant term 1 on every branch.
    pub fn binomial(s: &BigRational, order: usize) -> Self {
        Self::new(
            (0..order as u64).map(|k| gen_binom(s, k)).collect(),
            order,
            (),
        )
    }

    /// `(1 + c·z)^s`.
    pub fn binomial_scaled(c: &BigRational, s: &BigRational, order: usize) -> Self {
        let mut scale = BigRational::one();
        let coeffs = (0..order as u64)
            .map(|k| {
                let v = gen_binom(s, k) * &scale;
                scale = &scale * c;
                v
            })
            .collect();
        Self::new(coeffs, order, ())
    }

    /// Evaluate at a point of `Q(√d)`.
    pub fn evaluate_quad(&self, x: &QuadRational) -> QuadRational {
        self.coeffs
            .iter()
            .rev()
            .fold(QuadRational::zero(x.d), |acc, c| {
                acc.mul(x).add(&QuadRational::rational(c.clone(), x.d))
            })
    }
}
