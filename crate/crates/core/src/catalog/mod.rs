//! Registry of checkable congruences.
//!
//! Each entry is a predicate over an odd prime `p` (and, for the two
//! parametric entries, Lucas parameters `(a, b)`). Two independent
//! evaluators exist: [`fast`] works on per-prime residue tables, [`oracle`]
//! forms every sum over `Q` or `Q(√d)` and reduces at the end.
//!
//! Every evaluator reports `lhs` as the residue of *left side minus right
//! side*, so a passing check always shows `0`. Checks made of several
//! congruences (polynomial coefficients, ranges of indices, pairs of sums)
//! report the first nonzero component, or `0` when all vanish.

pub mod fast;
pub mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::modarith::{ModArithError, PrimeModulus};
use crate::sequences::LucasParams;

pub use fast::{check, check_perturbed, PrimeContext};
pub use oracle::{oracle_check, oracle_check_with_bound, oracle_scan_sum, DEFAULT_ORACLE_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("check {0} needs Lucas parameters (a, b)")]
    MissingParams(CheckId),
    #[error("check {0} takes no parameters")]
    UnexpectedParams(CheckId),
    #[error("oracle is limited to p ≤ {bound}, got p = {p}")]
    OracleBoundExceeded { p: u64, bound: u64 },
    #[error(transparent)]
    ModArith(#[from] ModArithError),
}

pub type Result<T> = std::result::Result<T, CatalogError>;

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Registry identifier. Declaration order is the stable registry order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($variant),*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name),*
                }
            }
        }

        impl FromStr for CheckId {
            type Err = CatalogError;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($name => Ok(CheckId::$variant),)*
                    other => Err(CatalogError::UnknownCheck(other.to_string())),
                }
            }
        }
    };
}

check_ids! {
    RvMortenson => "rv_mortenson",
    Thm1I => "thm1_i",
    Thm1Ii => "thm1_ii",
    Thm1Iii => "thm1_iii",
    Thm1Iv => "thm1_iv",
    Thm2V => "thm2_v",
    Thm2U => "thm2_u",
    Thm1nI => "thm1n_i",
    Thm1nIi => "thm1n_ii",
    Thm1nIii => "thm1n_iii",
    Thm3Poly => "thm3_poly",
    Lem21Poly => "lem21_poly",
    Lem22Poly => "lem22_poly",
    Lem31I => "lem31_i",
    Lem31Ii => "lem31_ii",
    Lem31Iii => "lem31_iii",
    Lem32I => "lem32_i",
    Lem32Ii => "lem32_ii",
    Lem32Iii => "lem32_iii",
    Lem41I => "lem41_i",
    Lem41Ii => "lem41_ii",
    Lem41Iii => "lem41_iii",
    Morley => "morley",
    Lehmer => "lehmer",
    WolstenholmeH => "wolstenholme_h",
    TailDiv => "tail_div",
    Hp1j => "hp1j",
    SymZeroI => "sym_zero_i",
    SymZeroIi => "sym_zero_ii",
    SymZeroIii => "sym_zero_iii",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CheckId {
    pub fn descriptor(self) -> CheckDescriptor {
        use Applicability::*;
        use CheckId::*;
        let (applicability, modulus_power, anchor): (Applicability, u32, &'static str) = match self {
            RvMortenson => (Always, 2, "Σ_{k<p} C(2k,k)²/16^k ≡ (-1|p)"),
            Thm1I => (Classes(4, &[3]), 2, "Σ_{k<p} C(p-1,k) C(2k,k)² / (-8)^k ≡ 0"),
            Thm1Ii => (Classes(12, &[1]), 2, "Σ_{k<p} C(p-1,k) C(2k,k)² χ₃(k) / 16^k ≡ 0"),
            Thm1Iii => (Classes(8, &[7]), 2, "Σ_{k<p} C(p-1,k) C(2k,k)² P_k / 8^k ≡ 0"),
            Thm1Iv => (Classes(12, &[11]), 2, "Σ_{k<p} C(p-1,k) C(2k,k)² R_k / (-4)^k ≡ 0"),
            Thm2V => (
                Always,
                2,
                "Σ_{k≤n} C(p-1,k) C(2k,k)² V_k(a,b)/16^k ≡ (-1)^n 16^{p-1} Σ_j C(n,j)² V_j(a+2,a+b+1)(1+2pH_{2j})",
            ),
            Thm2U => (
                SquareFreeDiscriminant,
                2,
                "Σ_{k≤n} C(p-1,k) C(2k,k)² U_k(a,b)/16^k ≡ (-1)^n 16^{p-1} Σ_j C(n,j)² U_j(a+2,a+b+1)(1+2pH_{2j})",
            ),
            Thm1nI => (Classes(8, &[7]), 2, "Σ_{k<p} C(p-1,k) C(2k,k)² W_k / 4^k ≡ 0"),
            Thm1nIi => (Classes(6, &[1]), 2, "Σ_{k<p} C(p-1,k) C(2k,k)² (-1)^k M_k / 16^k ≡ 0"),
            Thm1nIii => (
                Classes(12, &[7]),
                2,
                "Σ_{k<p, 3|k} C(p-1,k) C(2k,k)²/16^k ≡ (1/3) Σ_{k<p} C(p-1,k) C(2k,k)²/16^k",
            ),
            Thm3Poly => (
                Always,
                2,
                "Σ_{k≤n} C(p-1,k) C(2k,k)² (z-1)^k/16^k ≡ (-1)^n 16^{p-1} Σ_j z^j C(n,j)² (1+2pH_{2j}), coefficientwise",
            ),
            Lem21Poly => (
                Always,
                2,
                "Σ_{k≤n} C(2k,k)² (1-z)^k/16^k ≡ (-1)^n 4^{p-1} Σ_j z^j C(n,j)² (1+pH_{n-j}), coefficientwise",
            ),
            Lem22Poly => (
                Always,
                1,
                "(-1)^{(p+1)/2} Σ_{k≤n} (1-z)^k C(2k,k)² H_k/16^k ≡ (2^{p+1}-4)/p Σ_j z^j C(n,j)² + Σ_j z^j C(n,j)² H_j, coefficientwise",
            ),
            Lem31I => (Classes(8, &[5, 7]), 1, "Σ_{k≤n} C(n,k)² (3+2√2)^k ≡ 0"),
            Lem31Ii => (Classes(3, &[2]), 1, "Σ_{k≤n} C(n,k)² (-7-4√3)^k ≡ 0"),
            Lem31Iii => (Classes(4, &[3]), 1, "Σ_{k≤n} C(n,k)² (17+12√2)^k ≡ 0"),
            Lem32I => (Classes(8, &[7]), 2, "Σ_{k≤n} C(n,k)² P_{2k} ≡ 0"),
            Lem32Ii => (Classes(12, &[11]), 2, "Σ_{k≤n} C(n,k)² (-1)^k R_{2k} ≡ 0"),
            Lem32Iii => (Classes(8, &[7]), 2, "Σ_{k≤n} C(n,k)² W_{2k}/2^k ≡ 0"),
            Lem41I => (Classes(8, &[1, 7]), 1, "Σ_{k≤n} C(n,k)² P_{2k} H_{2k} ≡ 0"),
            Lem41Ii => (Classes(12, &[11]), 1, "Σ_{k≤n} C(n,k)² (-1)^k R_{2k} H_{2k} ≡ 0"),
            Lem41Iii => (Classes(8, &[7]), 1, "Σ_{k≤n} C(n,k)² W_{2k} H_{2k}/2^k ≡ 0"),
            Morley => (Always, 2, "C(p-1,n) ≡ (-1)^n 4^{p-1}"),
            Lehmer => (Always, 1, "H_n ≡ -(2^p-2)/p"),
            WolstenholmeH => (Always, 1, "H_{p-1} ≡ 0"),
            TailDiv => (Always, 2, "C(2k,k)² ≡ 0 for n < k < p"),
            Hp1j => (Always, 1, "H_{p-1-j} ≡ H_j for 1 ≤ j ≤ p-2"),
            SymZeroI => (
                Classes(4, &[3]),
                2,
                "Σ_j (-1)^j C(n,j)² = 0 and Σ_j (-1)^j C(n,j)² H_{2j} ≡ 0 (mod p)",
            ),
            SymZeroIi => (
                Classes(12, &[1]),
                2,
                "Σ_j (-1)^j χ₃(j) C(n,j)² = 0 and Σ_j (-1)^j χ₃(j) C(n,j)² H_{2j} ≡ 0 (mod p)",
            ),
            SymZeroIii => (
                Classes(12, &[7]),
                2,
                "Σ_j V_j(1,1) C(n,j)² = 0 and Σ_j V_j(1,1) C(n,j)² H_{2j} ≡ 0 (mod p)",
            ),
        };
        CheckDescriptor {
            id: self,
            applicability,
            modulus_power,
            parametric: matches!(self, Thm2V | Thm2U),
            anchor,
        }
    }

    pub fn is_parametric(self) -> bool {
        matches!(self, CheckId::Thm2V | CheckId::Thm2U)
    }
}

/// Residue-class condition on `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    Always,
    /// `p mod m` lies in the listed residues.
    Classes(u64, &'static [u64]),
    /// `p²` does not divide `a² - 4b`.
    SquareFreeDiscriminant,
}

impl Applicability {
    pub fn holds(&self, p: u64, params: Option<LucasParams>) -> bool {
        match *self {
            Self::Always => true,
            Self::Classes(m, residues) => residues.contains(&(p % m)),
            Self::SquareFreeDiscriminant => {
                let disc = params.map_or(1, |x| x.discriminant() as i128);
                disc % (p as i128 * p as i128) != 0
            }
        }
    }
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Always => f.write_str("all odd p"),
            Self::Classes(m, rs) => {
                let rs: Vec<String> = rs.iter().map(u64::to_string).collect();
                write!(f, "p ≡ {} (mod {m})", rs.join(", "))
            }
            Self::SquareFreeDiscriminant => f.write_str("p² ∤ a² - 4b"),
        }
    }
}

/// One registry entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckDescriptor {
    pub id: CheckId,
    pub applicability: Applicability,
    /// Claims hold modulo `p^modulus_power`.
    pub modulus_power: u32,
    pub parametric: bool,
    /// The congruence in formula form, with `n = (p-1)/2`.
    pub anchor: &'static str,
}

/// The full registry in stable order.
pub fn list_checks() -> Vec<CheckDescriptor> {
    CheckId::ALL.iter().map(|id| id.descriptor()).collect()
}

/// Deliberately wrong variants of two checks, for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perturbation {
    /// `8^k` replaced by `7^k` in `thm1_iii`.
    Thm1iiiDenominator7,
    /// `4^{p-1}` replaced by `4^{p-2}` in `morley`.
    MorleyExponent,
}

impl FromStr for Perturbation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "thm1_iii_denominator_7" => Ok(Self::Thm1iiiDenominator7),
            "morley_exponent" => Ok(Self::MorleyExponent),
            other => Err(format!("unknown perturbation {other:?}")),
        }
    }
}

/// Outcome of one check at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub prime: u64,
    pub id: CheckId,
    pub params: Option<LucasParams>,
    pub applicable: bool,
    /// `None` when not applicable.
    pub pass: Option<bool>,
    /// Residue of left minus right side; `None` when a constant denominator of the statement is divisible by `p`.
    pub lhs: Option<u64>,
    pub modulus_power: u32,
    pub elapsed: Duration,
}

impl CheckResult {
    pub(crate) fn new(
        prime: u64,
        id: CheckId,
        params: Option<LucasParams>,
        lhs: Option<u64>,
        elapsed: Duration,
    ) -> Self {
        let desc = id.descriptor();
        let applicable = desc.applicability.holds(prime, params);
        let pass = applicable.then_some(lhs == Some(0));
        Self {
            prime,
            id,
            params,
            applicable,
            pass,
            lhs,
            modulus_power: desc.modulus_power,
            elapsed,
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

pub(crate) fn validate_params(id: CheckId, params: Option<LucasParams>) -> Result<()> {
    match (id.is_parametric(), params) {
        (true, None) => Err(CatalogError::MissingParams(id)),
        (false, Some(_)) => Err(CatalogError::UnexpectedParams(id)),
        _ => Ok(()),
    }
}

pub(crate) fn prime_modulus(p: u64) -> Result<PrimeModulus> {
    Ok(PrimeModulus::new(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        let all = list_checks();
        assert_eq!(all.len(), 30);
        let mut ids: Vec<_> = all.iter().map(|d| d.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), all.len());
        assert!(CheckId::Thm2U.descriptor().parametric);
        assert!(!CheckId::Morley.descriptor().parametric);
        assert_eq!(
            all.iter()
                .filter(|d| d.id.as_str().starts_with("lem31"))
                .count(),
            3
        );
    }

    #[test]
    fn ids_round_trip() {
        for &id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), id);
        }
        assert!(matches!(
            "thm9".parse::<CheckId>(),
            Err(CatalogError::UnknownCheck(_))
        ));
    }

    #[test]
    fn applicability_classes() {
        let d = CheckId::Thm1Iii.descriptor().applicability;
        assert!(d.holds(7, None) && d.holds(23, None) && !d.holds(5, None));
        let u = CheckId::Thm2U.descriptor().applicability;
        // a² - 4b = 0 for (2, 1)
        assert!(!u.holds(5, Some(LucasParams::new(2, 1))));
        // a² - 4b = 5: p = 5 divides it once
        assert!(u.holds(5, Some(LucasParams::new(1, -1))));
        // a² - 4b = 25 · 1 with (5, 0)
        assert!(!u.holds(5, Some(LucasParams::new(5, 0))));
        assert_eq!(d.to_string(), "p ≡ 7 (mod 8)");
    }

    #[test]
    fn param_validation() {
        assert!(matches!(
            validate_params(CheckId::Thm2V, None),
            Err(CatalogError::MissingParams(_))
        ));
        assert!(validate_params(CheckId::Morley, Some(LucasParams::new(1, 1))).is_err());
        assert!(validate_params(CheckId::Morley, None).is_ok());
    }
}
