//! Prime sieve, interval prime iteration, and small-integer factoring.
//!
//! The sieve is a bit-packed odds-only Eratosthenes table with an eagerly
//! materialized prime list. It is immutable after construction and is shared
//! read-only by the census workers, which perform on the order of `10^9`
//! primality lookups per run.

use crate::{Error, Result};

/// Largest sieve limit the crate will build. A sieve of this size costs
/// roughly 60 MB of table plus ~400 MB of materialized primes.
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Queryable primality table for all integers up to `limit`.
pub struct PrimeSieve {
    limit: u64,
    // bit i of odd_bits[i / 64] set  <=>  2i + 1 is composite (or 1)
    odd_composite: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeSieve {
    /// Builds a sieve answering primality for every `m <= limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::usage(format!(
                "sieve limit must be >= 2, got {limit}"
            )));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::resource(format!(
                "sieve limit {limit} exceeds the build cap {MAX_SIEVE_LIMIT}; \
                 a larger table would not fit the configured memory budget"
            )));
        }

        let n_odd = (limit as usize).div_ceil(2); // odds 1, 3, .., <= limit
        let mut odd_composite = vec![0u64; n_odd.div_ceil(64)];
        let mark = |bits: &mut [u64], i: usize| bits[i / 64] |= 1 << (i % 64);
        mark(&mut odd_composite, 0); // 1 is not prime

        let mut p = 3usize;
        while (p * p) as u64 <= limit {
            if odd_composite[p / 2 / 64] & (1 << ((p / 2) % 64)) == 0 {
                let mut m = p * p / 2;
                while m < n_odd {
                    mark(&mut odd_composite, m);
                    m += p;
                }
            }
            p += 2;
        }

        // Materialize the ascending prime list once; interval queries are
        // then subslices found by binary search.
        let mut primes = Vec::with_capacity(prime_count_estimate(limit));
        primes.push(2);
        for i in 1..n_odd {
            if odd_composite[i / 64] & (1 << (i % 64)) == 0 {
                primes.push((2 * i + 1) as u64);
            }
        }

        Ok(PrimeSieve {
            limit,
            odd_composite,
            primes,
        })
    }

    /// Largest integer this sieve answers for.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality of `m`. Panics if `m > limit`.
    #[inline]
    pub fn is_prime(&self, m: u64) -> bool {
        assert!(
            m <= self.limit,
            "is_prime({m}) beyond sieve limit {}",
            self.limit
        );
        if m == 2 {
            return true;
        }
        if m < 2 || m % 2 == 0 {
            return false;
        }
        let i = (m / 2) as usize;
        self.odd_composite[i / 64] & (1 << (i % 64)) == 0
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The primes in the half-open interval `(lo, hi]`, ascending.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<&[u64]> {
        if lo >= hi {
            return Err(Error::range(format!("empty prime interval ({lo}, {hi}]")));
        }
        if hi > self.limit {
            return Err(Error::range(format!(
                "prime interval ({lo}, {hi}] exceeds sieve limit {}",
                self.limit
            )));
        }
        let start = self.primes.partition_point(|&p| p <= lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        Ok(&self.primes[start..end])
    }

    /// Number of primes `<= x` (requires `x <= limit`).
    pub fn count_leq(&self, x: u64) -> Result<usize> {
        if x > self.limit {
            return Err(Error::range(format!(
                "count_leq({x}) beyond sieve limit {}",
                self.limit
            )));
        }
        Ok(self.primes.partition_point(|&p| p <= x))
    }

    /// Primality for `m` possibly beyond the table, by trial division with
    /// the sieved primes. Requires `limit^2 >= m`.
    pub fn is_prime_ext(&self, m: u64) -> Result<bool> {
        if m <= self.limit {
            return Ok(self.is_prime(m));
        }
        if (self.limit as u128) * (self.limit as u128) < m as u128 {
            return Err(Error::range(format!(
                "cannot decide primality of {m} with sieve limit {}",
                self.limit
            )));
        }
        for &p in &self.primes {
            if (p as u128) * (p as u128) > m as u128 {
                break;
            }
            if m % p == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Sieve limit recommended for computations touching every `n <= max_n`:
/// the denominator of `n` involves no prime above `(n + 1) / 2`, and the
/// transition to `n + 1` needs one step more.
pub fn recommended_limit(max_n: u64) -> u64 {
    ((max_n + 2) / 2 + 1).max(2_000_000)
}

fn prime_count_estimate(limit: u64) -> usize {
    let x = limit as f64;
    (x / x.ln() * 1.15) as usize + 16
}

/// Deterministic trial-division primality, independent of any sieve.
pub fn is_prime_u64(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m % 2 == 0 {
        return m == 2;
    }
    let mut d = 3u64;
    // d * d can leave u64 near the top of the range, so compare by division
    while d <= m / d {
        if m % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The largest prime factor `P(m)` of `m >= 2`.
pub fn largest_prime_factor(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::usage(format!(
            "largest_prime_factor requires m >= 2, got {m}"
        )));
    }
    let mut rest = m;
    let mut largest = 1;
    while rest % 2 == 0 {
        largest = 2;
        rest /= 2;
    }
    let mut d = 3u64;
    while d <= rest / d {
        while rest % d == 0 {
            largest = d;
            rest /= d;
        }
        d += 2;
    }
    if rest > 1 {
        largest = rest;
    }
    Ok(largest)
}
