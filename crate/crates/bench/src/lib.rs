//! Shared inputs for the engine benchmarks.

use bpden_core::PrimeSieve;

/// Sieve sized for denominator work up to `max_n`.
pub fn sieve_for(max_n: u64) -> PrimeSieve {
    PrimeSieve::new(bpden_core::primes::recommended_limit(max_n)).unwrap()
}

/// A spread of n values that exercises both sparse and dense digit patterns.
pub fn sample_ns(around: u64, count: u64) -> Vec<u64> {
    (0..count).map(|i| around + i * 37 + 1).collect()
}
