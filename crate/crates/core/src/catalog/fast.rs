//! Table-driven modular evaluation of every registry entry.

use std::time::Instant;

use super::{prime_modulus, validate_params, CheckId, CheckResult, Perturbation, Result};
use crate::modarith::{
    binom_row, central_binom_table, fermat_quotient, harmonic_table, legendre, row_binom_table,
    PrimeModulus, Residue, ResidueRing,
};
use crate::quadring::{lemma31_sum_unchecked, Lemma31Variant};
use crate::sequences::{chi3, lucas_v_prefix, LucasFamily, LucasParams, NamedSequence};

/// Per-prime tables shared by all checks at that prime.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: PrimeModulus,
    r1: ResidueRing,
    r2: ResidueRing,
    /// `(p-1)/2`
    n: usize,
    /// `C(2k,k)` mod `p²`, `k < p`
    central: Vec<Residue>,
    /// `C(p-1,k)` mod `p²`
    row: Vec<Residue>,
    /// `C(n,j)²` mod `p²`, `j ≤ n`
    half_sq: Vec<Residue>,
    /// `H_k` mod `p`, `k < p`
    harm: Vec<Residue>,
    /// `C(p-1,k) C(2k,k)²` mod `p²`
    weight: Vec<Residue>,
    /// `16^{-k}` mod `p²`
    inv16: Vec<Residue>,
    /// `k!` and `1/k!` mod `p²`, `k ≤ n`
    fact: Vec<Residue>,
    inv_fact: Vec<Residue>,
}

impl PrimeContext {
    pub fn new(p: PrimeModulus) -> Self {
        let (r1, r2) = (p.ring(1), p.ring(2));
        let len = p.p() as usize;
        let n = p.half() as usize;
        let central = central_binom_table(&r2, len);
        let row = row_binom_table(&r2);
        let half_sq = binom_row(&r2, n as u64)
            .into_iter()
            .map(|b| r2.mul(b, b))
            .collect();
        let harm = harmonic_table(&p).entries().to_vec();
        let weight = (0..len)
            .map(|k| r2.mul(row[k], r2.mul(central[k], central[k])))
            .collect();
        let inv16 = r2.powers(r2.inv(r2.from_u64(16)).expect("16 is a unit"), len);
        let inv = r2.inverse_table(n + 1);
        let (mut fact, mut inv_fact) = (vec![r2.one()], vec![r2.one()]);
        for k in 1..=n {
            fact.push(r2.mul_u64(fact[k - 1], k as u64));
            inv_fact.push(r2.mul(inv_fact[k - 1], inv[k]));
        }
        Self {
            p,
            r1,
            r2,
            n,
            central,
            row,
            half_sq,
            harm,
            weight,
            inv16,
            fact,
            inv_fact,
        }
    }

    pub fn prime(&self) -> &PrimeModulus {
        &self.p
    }

    /// `C(n,j)²` mod `p²` for `j ≤ (p-1)/2`.
    pub fn half_binom_squares(&self) -> &[Residue] {
        &self.half_sq
    }

    /// `C(p-1,k) C(2k,k)²` mod `p²` for `k < p`.
    pub fn weights(&self) -> &[Residue] {
        &self.weight
    }

    /// Runs one check with timing.
    pub fn evaluate(
        &self,
        id: CheckId,
        params: Option<LucasParams>,
        perturbation: Option<Perturbation>,
    ) -> Result<CheckResult> {
        validate_params(id, params)?;
        let start = Instant::now();
        let lhs = self.lhs(id, params, perturbation).map(Residue::value);
        Ok(CheckResult::new(
            self.p.p(),
            id,
            params,
            lhs,
            start.elapsed(),
        ))
    }

    /// `Σ_{k<p} C(p-1,k) C(2k,k)² seq_k / denom^k` mod `p²`; `None` if `p | denom`.
    pub fn weighted_sum(&self, seq: &[Residue], denom: i64) -> Option<Residue> {
        let r = &self.r2;
        let inv = r.inv(r.from_i64(denom)).ok()?;
        let len = self.weight.len().min(seq.len());
        let scaled: Vec<Residue> = r
            .powers(inv, len)
            .iter()
            .zip(seq)
            .map(|(&x, &s)| r.mul(x, s))
            .collect();
        Some(r.dot(&self.weight[..len], &scaled))
    }

    /// `Σ_{k<p} C(p-1,k) C(2k,k)² δ₃(k) / 16^k` mod `p²`.
    pub fn delta3_sum(&self) -> Residue {
        let seq = NamedSequence::Delta3.prefix(self.weight.len(), &self.r2);
        self.weighted_sum(&seq, 16).expect("16 is a unit")
    }

    fn lhs(
        &self,
        id: CheckId,
        params: Option<LucasParams>,
        perturbation: Option<Perturbation>,
    ) -> Option<Residue> {
        use CheckId::*;
        let (r1, r2) = (&self.r1, &self.r2);
        let len = self.weight.len();
        let named = |tag: NamedSequence| tag.prefix(len, r2);
        match id {
            RvMortenson => {
                let sq: Vec<Residue> = self.central.iter().map(|&c| r2.mul(c, c)).collect();
                let sum = r2.dot(&sq, &self.inv16);
                Some(r2.sub(sum, r2.from_i64(legendre(-1, &self.p) as i64)))
            }
            Thm1I => self.weighted_sum(&vec![r2.one(); len], -8),
            Thm1Ii => {
                let chi: Vec<Residue> = (0..len as u64).map(|k| r2.from_i64(chi3(k))).collect();
                self.weighted_sum(&chi, 16)
            }
            Thm1Iii => {
                let denom = if perturbation == Some(Perturbation::Thm1iiiDenominator7) {
                    7
                } else {
                    8
                };
                self.weighted_sum(&named(NamedSequence::P), denom)
            }
            Thm1Iv => self.weighted_sum(&named(NamedSequence::R), -4),
            Thm2V => Some(self.thm2(LucasFamily::V, params?)),
            Thm2U => Some(self.thm2(LucasFamily::U, params?)),
            Thm1nI => self.weighted_sum(&named(NamedSequence::W), 4),
            Thm1nIi => self.weighted_sum(&named(NamedSequence::M), -16),
            Thm1nIii => {
                let thirds: Vec<Residue> = (0..len)
                    .map(|k| if k % 3 == 0 { r2.one() } else { r2.zero() })
                    .collect();
                let part = self.weighted_sum(&thirds, 16)?;
                let total = self.weighted_sum(&vec![r2.one(); len], 16)?;
                let third = r2.inv(r2.from_u64(3)).ok()?;
                Some(r2.sub(part, r2.mul(third, total)))
            }
            Thm3Poly => Some(self.thm3_poly()),
            Lem21Poly => Some(self.lem21_poly()),
            Lem22Poly => Some(self.lem22_poly()),
            Lem31I => Some(self.lem31(Lemma31Variant::I)),
            Lem31Ii => Some(self.lem31(Lemma31Variant::II)),
            Lem31Iii => Some(self.lem31(Lemma31Variant::III)),
            Lem32I => Some(self.even_index_sum(r2, NamedSequence::P, false, None)),
            Lem32Ii => Some(self.even_index_sum(r2, NamedSequence::R, true, None)),
            Lem32Iii => Some(self.even_index_sum(r2, NamedSequence::W, false, Some(2))),
            Lem41I => Some(self.even_index_sum(r1, NamedSequence::P, false, None)),
            Lem41Ii => Some(self.even_index_sum(r1, NamedSequence::R, true, None)),
            Lem41Iii => Some(self.even_index_sum(r1, NamedSequence::W, false, Some(2))),
            Morley => {
                let e = if perturbation == Some(Perturbation::MorleyExponent) {
                    self.p.p() - 2
                } else {
                    self.p.p() - 1
                };
                let rhs = r2.mul(r2.sign(self.n as u64), r2.pow(r2.from_u64(4), e));
                Some(r2.sub(self.row[self.n], rhs))
            }
            Lehmer => {
                let q = fermat_quotient(2, &self.p).expect("2 is coprime to odd p");
                Some(r1.add(self.harm[self.n], r1.mul_u64(q, 2)))
            }
            WolstenholmeH => Some(self.harm[len - 1]),
            TailDiv => Some(first_nonzero(
                r2,
                (self.n + 1..len).map(|k| r2.mul(self.central[k], self.central[k])),
            )),
            Hp1j => Some(first_nonzero(
                r1,
                (1..len - 1).map(|j| r1.sub(self.harm[len - 1 - j], self.harm[j])),
            )),
            SymZeroI => Some(self.sym_zero(|j| r2.sign(j as u64))),
            SymZeroIi => {
                Some(self.sym_zero(|j| r2.mul(r2.sign(j as u64), r2.from_i64(chi3(j as u64)))))
            }
            SymZeroIii => {
                let v = lucas_v_prefix(self.n + 1, LucasParams::new(1, 1), r2);
                Some(self.sym_zero(|j| v[j]))
            }
        }
    }

    /// `p·H_m` mod `p²`, from `H_m` mod `p`.
    fn p_harmonic(&self, m: usize) -> Residue {
        self.r2.from_u64(self.harm[m].value() * self.p.p())
    }

    fn thm2(&self, family: LucasFamily, params: LucasParams) -> Residue {
        let r = &self.r2;
        let n = self.n;
        let s = family.prefix(n + 1, params, r);
        let scaled: Vec<Residue> = (0..=n).map(|k| r.mul(s[k], self.inv16[k])).collect();
        let lhs = r.dot(&self.weight[..=n], &scaled);
        let t = family.prefix(n + 1, params.shifted(), r);
        let inner: Vec<Residue> = (0..=n)
            .map(|j| r.mul(t[j], r.add(r.one(), r.mul_u64(self.p_harmonic(2 * j), 2))))
            .collect();
        let rhs = r.mul(self.sixteen_factor(), r.dot(&self.half_sq, &inner));
        r.sub(lhs, rhs)
    }

    /// `(-1)^n 16^{p-1}` mod `p²`.
    fn sixteen_factor(&self) -> Residue {
        let r = &self.r2;
        r.mul(r.sign(self.n as u64), r.pow(r.from_u64(16), self.p.p() - 1))
    }

    /// Coefficients of `Σ_k w_k (z - 1)^k` in `ring` (indices `< p` only).
    fn expand_shifted(&self, ring: &ResidueRing, w: &[Residue]) -> Vec<Residue> {
        let m = w.len();
        let fact: Vec<Residue> = self.fact[..m].iter().map(|&x| ring.reduce(x)).collect();
        let inv_fact: Vec<Residue> = self.inv_fact[..m].iter().map(|&x| ring.reduce(x)).collect();
        let a: Vec<Residue> = (0..m).map(|k| ring.mul(w[k], fact[k])).collect();
        let b: Vec<Residue> = (0..m)
            .map(|i| ring.mul(ring.sign(i as u64), inv_fact[i]))
            .collect();
        (0..m)
            .map(|j| ring.mul(inv_fact[j], ring.dot(&a[j..], &b[..m - j])))
            .collect()
    }

    fn compare(ring: &ResidueRing, lhs: &[Residue], rhs: &[Residue]) -> Residue {
        first_nonzero(ring, lhs.iter().zip(rhs).map(|(&x, &y)| ring.sub(x, y)))
    }

    fn thm3_poly(&self) -> Residue {
        let r = &self.r2;
        let w: Vec<Residue> = (0..=self.n)
            .map(|k| r.mul(self.weight[k], self.inv16[k]))
            .collect();
        let lhs = self.expand_shifted(r, &w);
        let c = self.sixteen_factor();
        let rhs: Vec<Residue> = (0..=self.n)
            .map(|j| {
                r.mul(
                    c,
                    r.mul(
                        self.half_sq[j],
                        r.add(r.one(), r.mul_u64(self.p_harmonic(2 * j), 2)),
                    ),
                )
            })
            .collect();
        Self::compare(r, &lhs, &rhs)
    }

    fn lem21_poly(&self) -> Residue {
        let r = &self.r2;
        let n = self.n;
        // (1 - z)^k = (-1)^k (z - 1)^k
        let w: Vec<Residue> = (0..=n)
            .map(|k| {
                r.mul(
                    r.sign(k as u64),
                    r.mul(r.mul(self.central[k], self.central[k]), self.inv16[k]),
                )
            })
            .collect();
        let lhs = self.expand_shifted(r, &w);
        let c = r.mul(r.sign(n as u64), r.pow(r.from_u64(4), self.p.p() - 1));
        let rhs: Vec<Residue> = (0..=n)
            .map(|j| {
                r.mul(
                    c,
                    r.mul(self.half_sq[j], r.add(r.one(), self.p_harmonic(n - j))),
                )
            })
            .collect();
        Self::compare(r, &lhs, &rhs)
    }

    fn lem22_poly(&self) -> Residue {
        let r = &self.r1;
        let n = self.n;
        let w: Vec<Residue> = (0..=n)
            .map(|k| {
                let c = r.reduce(self.central[k]);
                let t = r.mul(r.mul(c, c), r.mul(self.harm[k], r.reduce(self.inv16[k])));
                r.mul(r.sign(k as u64), t)
            })
            .collect();
        let outer = r.sign(self.p.p().div_ceil(2));
        let lhs: Vec<Residue> = self
            .expand_shifted(r, &w)
            .into_iter()
            .map(|x| r.mul(outer, x))
            .collect();
        let four_q = r.mul_u64(
            fermat_quotient(2, &self.p).expect("2 is coprime to odd p"),
            4,
        );
        let rhs: Vec<Residue> = (0..=n)
            .map(|j| r.mul(r.reduce(self.half_sq[j]), r.add(four_q, self.harm[j])))
            .collect();
        Self::compare(r, &lhs, &rhs)
    }

    fn lem31(&self, variant: Lemma31Variant) -> Residue {
        let s = lemma31_sum_unchecked(variant, &self.p);
        if s.x().is_zero() {
            s.y()
        } else {
            s.x()
        }
    }

    /// `Σ_{k≤n} C(n,k)² (±1)^k S_{2k} / base^k`, times `H_{2k}` when `ring` is mod `p`.
    fn even_index_sum(
        &self,
        ring: &ResidueRing,
        tag: NamedSequence,
        alternate: bool,
        base: Option<u64>,
    ) -> Residue {
        let n = self.n;
        let s = tag.prefix(2 * n + 1, ring);
        let inv_base =
            base.map(|b| ring.powers(ring.inv(ring.from_u64(b)).expect("unit base"), n + 1));
        let with_harmonic = ring.power() == 1;
        let terms: Vec<Residue> = (0..=n)
            .map(|k| {
                let mut t = s[2 * k];
                if alternate {
                    t = ring.mul(t, ring.sign(k as u64));
                }
                if let Some(ib) = &inv_base {
                    t = ring.mul(t, ib[k]);
                }
                if with_harmonic {
                    t = ring.mul(t, self.harm[2 * k]);
                }
                t
            })
            .collect();
        let half_sq: Vec<Residue> = self.half_sq.iter().map(|&x| ring.reduce(x)).collect();
        ring.dot(&half_sq, &terms)
    }

    /// `[Σ_j c_j C(n,j)² mod p², Σ_j c_j C(n,j)² H_{2j} mod p]`, first nonzero.
    fn sym_zero(&self, coeff: impl Fn(usize) -> Residue) -> Residue {
        let (r1, r2) = (&self.r1, &self.r2);
        let c: Vec<Residue> = (0..=self.n).map(coeff).collect();
        let plain = r2.dot(&self.half_sq, &c);
        if !plain.is_zero() {
            return plain;
        }
        let weighted: Vec<Residue> = (0..=self.n)
            .map(|j| r1.mul(r1.reduce(c[j]), self.harm[2 * j]))
            .collect();
        let half_sq: Vec<Residue> = self.half_sq.iter().map(|&x| r1.reduce(x)).collect();
        r1.dot(&half_sq, &weighted)
    }
}

pub(crate) fn first_nonzero(ring: &ResidueRing, it: impl IntoIterator<Item = Residue>) -> Residue {
    it.into_iter().find(|x| !x.is_zero()).unwrap_or(ring.zero())
}

/// Evaluate one registry entry at `p` through the modular tables.
pub fn check(id: CheckId, p: u64, params: Option<LucasParams>) -> Result<CheckResult> {
    PrimeContext::new(prime_modulus(p)?).evaluate(id, params, None)
}

/// As [`check`], with one constant deliberately altered.
pub fn check_perturbed(
    id: CheckId,
    p: u64,
    params: Option<LucasParams>,
    perturbation: Perturbation,
) -> Result<CheckResult> {
    PrimeContext::new(prime_modulus(p)?).evaluate(id, params, Some(perturbation))
}
