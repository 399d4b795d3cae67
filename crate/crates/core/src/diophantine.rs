//! Explicit lower-bound evaluators for linear forms in logarithms and the
//! two-base digit-sum bound, plus the small-exceptional-prime scan.
//!
//! The quantitative statements here are vacuous at desk scale (the
//! digit-sum lower bound stays below 2 for every representable `n`), so the
//! evaluators exist to report the bounds next to measured data, and the only
//! hard-testable piece is the exceptional-prime scan itself.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::analytic::iterated_log;
use crate::digits::digit_sum_raw;
use crate::primes::PrimeSieve;
use crate::{Error, Result};

/// Height `h(r/s) = max(log |r|, log s)` of a nonzero rational, reduced
/// internally if needed.
pub fn height(numer: &BigInt, denom: &BigUint) -> Result<f64> {
    if numer.is_zero() {
        return Err(Error::domain("height of zero is undefined"));
    }
    if denom.is_zero() {
        return Err(Error::domain("height requires a positive denominator"));
    }
    let abs_numer = numer.magnitude();
    let g = abs_numer.gcd(denom);
    Ok(ln_biguint(&(abs_numer / &g)).max(ln_biguint(&(denom / &g))))
}

/// Natural log of a positive big integer, safe beyond the f64 range.
fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 900 {
        x.to_f64().expect("fits in f64 range").ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64 top bits fit");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Inputs to the linear-forms-in-logarithms lower bound: the heights of the
/// `k` rationals and the maximum absolute exponent `D`.
#[derive(Debug, Clone)]
pub struct MatveevInput {
    heights: Vec<f64>,
    max_exponent: f64,
}

impl MatveevInput {
    pub fn new(heights: Vec<f64>, max_exponent: f64) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::usage("need at least one height"));
        }
        if heights.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::usage("all heights must be positive"));
        }
        if !(max_exponent >= 1.0) {
            return Err(Error::usage(format!(
                "max exponent must be >= 1, got {max_exponent}"
            )));
        }
        Ok(MatveevInput {
            heights,
            max_exponent,
        })
    }

    pub fn k(&self) -> usize {
        self.heights.len()
    }
}

/// The explicit lower bound `-1.4 * 30^(k+3) * k^4.5 * (1 + log D) * prod A_i`
/// for `log |Lambda|` of a nonzero `Lambda = prod alpha_i^(d_i) - 1`.
pub fn matveev_bound(input: &MatveevInput) -> f64 {
    let k = input.k() as f64;
    let product: f64 = input.heights.iter().product();
    -1.4 * 30f64.powf(k + 3.0) * k.powf(4.5) * (1.0 + input.max_exponent.ln()) * product
}

/// The explicit constant `C(a,b) = log(2e12 (log B)^2)` of the two-base
/// digit-sum bound, for `B >= max(a, b) >= 3`.
pub fn stewart_constant(b_max: f64) -> Result<f64> {
    if !(b_max >= 3.0) {
        return Err(Error::domain(format!(
            "constant requires B >= 3, got {b_max}"
        )));
    }
    Ok((2e12 * b_max.ln().powi(2)).ln())
}

/// The digit-sum lower-bound value `log_2 n / (log_3 n + C)` with the clamped
/// iterated logarithms; subtract 1 for the weaker published form.
pub fn stewart_rhs(n: f64, c: f64) -> f64 {
    iterated_log(2, n) / (iterated_log(3, n) + c)
}

/// Whether the two-base bound is actually in force at `n`: it requires
/// `n > exp(10^15 (log B)^4)`, far beyond every representable value.
pub fn stewart_applicable(n: f64, b_max: f64) -> bool {
    n.ln() > 1e15 * b_max.ln().powi(4)
}

/// Primes `p <= y` that do *not* divide the denominator of `n`, i.e. with
/// `s_p(n) < p`.
pub fn exceptional_primes(sieve: &PrimeSieve, n: u64, y: f64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::usage("n must be a positive integer"));
    }
    if y > sieve.limit() as f64 {
        return Err(Error::range(format!(
            "scan up to {y} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let mut out = Vec::new();
    for &p in sieve.primes() {
        if (p as f64) > y {
            break;
        }
        if digit_sum_raw(n, p) < p {
            out.push(p);
        }
    }
    Ok(out)
}
