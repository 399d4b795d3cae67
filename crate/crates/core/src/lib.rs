//! Computational engine for the squarefree denominators of Bernoulli
//! polynomials.
//!
//! For a positive integer `n`, the denominator of the constant-free Bernoulli
//! polynomial `B_n(X) - B_n` is the product of all primes `p` whose base-`p`
//! digit sum of `n` is at least `p` (Kellner–Sondow). This crate computes that
//! product, its split into primes below and above `sqrt(n)`, the von
//! Staudt–Clausen companion product, and the derived statistics: prime counts,
//! logarithmic sizes, largest prime factors, and how the product changes from
//! `n` to `n + 1`.
//!
//! Module map:
//!
//! - [`primes`]: bit-packed prime sieve, interval iteration, factoring.
//! - [`digits`]: base-`b` expansions, digit sums, trailing-digit runs.
//! - [`denom`]: prime sets of the denominator, the `sqrt(n)` split, the
//!   sublinear plus-part enumeration, and the `n -> n+1` transition
//!   classifier.
//! - [`bernoulli`]: exact rational Bernoulli numbers and polynomials, the
//!   ground-truth oracle for the denominator identities.
//! - [`analytic`]: exponential integral, iterated logarithms, sawtooth sums,
//!   and empirical checks of the sieve-sum inequalities.
//! - [`diophantine`]: explicit lower-bound evaluators (Matveev, Stewart) and
//!   the small-exceptional-prime scan.
//! - [`census`]: batched, checkpointed computation over ranges of `n` with
//!   deterministic CSV output.
//! - [`fixtures`]: calibrated assertion thresholds shipped with the crate.

// Validation guards are written as `!(x > 0.0)` on purpose: they must reject
// NaN, which the un-negated comparison would wave through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bernoulli;
pub mod census;
pub mod denom;
pub mod digits;
pub mod diophantine;
mod error;
pub mod fixtures;
pub mod primes;

pub use error::{Error, Result};
pub use primes::PrimeSieve;
