//! Permutation binomials `x^m + a x^n` over finite fields.
//!
//! * [`ff`]: construction of and arithmetic in `F_{p^e}`.
//! * [`binomial`]: reduction to `x^n (x^k + a)`, permutation tests, exact counts.
//! * [`hermite`]: non-permutation certificates from Hermite's criterion.
//! * [`bounds`]: closed-form inequalities and intervals for the count of good `a`.
//! * [`heuristic`]: the expected-count sum over prime powers and its tail.
//! * [`scan`]: search campaigns, record output, and the `pb` command line.

pub mod arith;
pub mod binomial;
pub mod bounds;
pub mod cli;
pub mod ff;
pub mod hermite;
pub mod heuristic;
pub mod scan;

pub use binomial::{
    canonicalize, count_t, count_t_naive, is_permutation, is_permutation_naive,
    is_permutation_reduced, mathieu_check, Binomial, BinomialError, CanonicalBinomial, Obstruction,
    Reduction,
};
pub use ff::{FieldElement, FieldError, FiniteField};
