//! Exact-arithmetic verification of binomial-sum supercongruences involving
//! Lucas sequences, swept over primes.
//!
//! The crate is layered bottom-up:
//!
//! - [`modarith`]: residues mod `p` and `p²`, binomial and harmonic tables.
//! - [`quadring`]: `R[√d]` over those residue rings.
//! - [`sequences`]: Lucas sequences and the named sequences built on them.
//! - [`hypergeo`]: exact rationals, formal series, `₂F₁` transformations.
//! - [`catalog`]: the registry of congruences, a fast modular evaluator and
//!   an independent exact-rational oracle.
//! - [`engine`]: prime sieve, parallel sweeps, the parameter scanner and
//!   report writers.

pub mod catalog;
pub mod engine;
pub mod hypergeo;
pub mod modarith;
pub mod quadring;
pub mod sequences;
