//! Prime structure of the Bernoulli-polynomial denominator.
//!
//! For `n >= 1` the denominator in question is the squarefree product of all
//! primes `p` with `s_p(n) >= p`; no prime above `(n + 1) / 2` qualifies.
//! The product splits at `sqrt(n)` into a minus part (`p^2 < n`) and a plus
//! part (`p^2 > n`); `p^2 = n` never occurs since `s_p(p^2) = 1`.
//!
//! Two routes compute the plus part:
//!
//! - the direct scan over all primes up to `(n + 1) / 2`, testing digit sums
//!   ([`prime_set`], [`record`]), the reference path;
//! - the `O(sqrt(n))` interval enumeration ([`plus_primes_fast`]): a prime
//!   `p > sqrt(n)` writes `n = a p + b` with `a = floor(n / p) < sqrt(n)`,
//!   and `a + b >= p` pins `p` into `(n / (a + 1), (n + a) / (a + 1)]`, an
//!   interval of length below 1 holding at most the single integer
//!   `floor((n + a) / (a + 1))`.
//!
//! The fast route is validated against the reference scan by the test suite
//! before anything else relies on it.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::digits::digit_sum_raw;
use crate::primes::{is_prime_u64, PrimeSieve};
use crate::{Error, Result};

/// Full factor data of the denominator of `n`: the prime lists on both sides
/// of `sqrt(n)` and the derived statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DenomRecord {
    pub n: u64,
    /// Primes `p` with `p^2 < n` and `s_p(n) >= p`, ascending.
    pub minus_primes: Vec<u64>,
    /// Primes `p` with `p^2 > n` and `s_p(n) >= p`, ascending.
    pub plus_primes: Vec<u64>,
    /// Natural log of the plus-part product.
    pub log_plus: f64,
    /// Largest prime in either list; `None` when the denominator is 1.
    pub largest_prime: Option<u64>,
}

impl DenomRecord {
    pub fn omega_minus(&self) -> u64 {
        self.minus_primes.len() as u64
    }

    pub fn omega_plus(&self) -> u64 {
        self.plus_primes.len() as u64
    }
}

/// How the denominator moves from `n` to `n + 1`, with witness primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRecord {
    pub n: u64,
    /// Whether the denominator of `n + 1` divides the denominator of `n`.
    pub divides: bool,
    /// Exact comparison of the two denominators (`Greater` means the
    /// denominator of `n` is the larger one).
    pub comparison: Ordering,
    /// Primes dividing the denominator of `n + 1` but not that of `n`.
    pub gained_primes: Vec<u64>,
    /// Primes dividing the denominator of `n` but not that of `n + 1`.
    pub lost_primes: Vec<u64>,
    /// Primes `p <= n + 1` with `s_p(n) = p - 1`: the only primes that can
    /// possibly join at this step. Every gained prime appears here.
    pub case1_witnesses: Vec<u64>,
    /// Whether any witness exists at all.
    pub in_a: bool,
}

impl TransitionRecord {
    /// The exact ratio denominator(n) / denominator(n+1) when it is an
    /// integer, i.e. when `divides` holds.
    pub fn ratio_if_divides(&self) -> Option<BigUint> {
        if !self.divides {
            return None;
        }
        Some(prime_product(&self.lost_primes))
    }
}

fn ensure_limit(sieve: &PrimeSieve, required: u64, op: &str) -> Result<()> {
    if sieve.limit() < required {
        return Err(Error::range(format!(
            "{op}: sieve limit {} is too small, need at least {required}",
            sieve.limit()
        )));
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("n must be a positive integer"));
    }
    Ok(())
}

/// All primes dividing the denominator of `n`: the `p <= (n + 1) / 2` with
/// `s_p(n) >= p`, ascending. Direct digit-sum scan; this is the reference
/// path the fast enumeration is checked against.
pub fn prime_set(sieve: &PrimeSieve, n: u64) -> Result<Vec<u64>> {
    check_n(n)?;
    let bound = n.div_ceil(2);
    ensure_limit(sieve, bound, "prime_set")?;
    let mut set = Vec::new();
    for &p in sieve.primes() {
        if p > bound {
            break;
        }
        if digit_sum_raw(n, p) >= p {
            set.push(p);
        }
    }
    Ok(set)
}

/// Reference record: [`prime_set`] split strictly at `sqrt(n)` by the integer
/// comparison `p * p` versus `n`.
pub fn record(sieve: &PrimeSieve, n: u64) -> Result<DenomRecord> {
    let set = prime_set(sieve, n)?;
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for p in set {
        let sq = (p as u128) * (p as u128);
        match sq.cmp(&(n as u128)) {
            Ordering::Less => minus.push(p),
            Ordering::Greater => plus.push(p),
            Ordering::Equal => unreachable!("s_p(p^2) = 1 < p, so p^2 = n cannot qualify"),
        }
    }
    Ok(assemble_record(n, minus, plus))
}

fn assemble_record(n: u64, minus: Vec<u64>, plus: Vec<u64>) -> DenomRecord {
    // fold from +0.0: the empty f64 Sum identity is -0.0, which would leak
    // "-0" into the CSV
    let log_plus = plus.iter().fold(0.0, |acc, &p| acc + (p as f64).ln());
    let largest_prime = plus.last().or(minus.last()).copied();
    DenomRecord {
        n,
        minus_primes: minus,
        plus_primes: plus,
        log_plus,
        largest_prime,
    }
}

/// The plus-part primes of `n` by the `O(sqrt(n))` interval enumeration,
/// ascending. Needs `sieve.limit() >= (n + 1) / 2`.
pub fn plus_primes_fast(sieve: &PrimeSieve, n: u64) -> Result<Vec<u64>> {
    check_n(n)?;
    ensure_limit(sieve, n.div_ceil(2), "plus_primes_fast")?;
    let mut plus = Vec::new();
    // a runs over floor(n / p) for candidate plus primes p; candidates come
    // out in descending order.
    for a in 1..=n.isqrt() {
        if let Some(m) = plus_candidate(n, a) {
            if sieve.is_prime(m) {
                plus.push(m);
            }
        }
    }
    plus.reverse();
    Ok(plus)
}

/// The unique integer in `(n / (a + 1), (n + a) / (a + 1)]` if it exists,
/// lies strictly above `sqrt(n)`, and hence has digit sum
/// `a + (n - a m) >= m` in base `m`.
#[inline]
fn plus_candidate(n: u64, a: u64) -> Option<u64> {
    let m = (n + a) / (a + 1);
    // m must exceed n / (a + 1), i.e. m (a + 1) >= n + 1.
    if m * (a + 1) < n + 1 {
        return None;
    }
    // strict plus side only: p^2 > n (p^2 = n is excluded by definition)
    if (m as u128) * (m as u128) <= n as u128 {
        return None;
    }
    Some(m)
}

/// Number of plus-part primes of `n`, via the interval enumeration.
pub fn omega_plus_fast(sieve: &PrimeSieve, n: u64) -> Result<u64> {
    Ok(plus_primes_fast(sieve, n)?.len() as u64)
}

/// Natural log of the plus-part product of `n`, via the interval
/// enumeration. Logs are summed in ascending prime order.
pub fn log_plus_fast(sieve: &PrimeSieve, n: u64) -> Result<f64> {
    Ok(plus_primes_fast(sieve, n)?
        .iter()
        .fold(0.0, |acc, &p| acc + (p as f64).ln()))
}

/// Largest prime dividing the denominator of `n`, or `None` when the
/// denominator is 1. Searches plus candidates in descending magnitude and
/// falls back to a descending minus-side scan.
pub fn largest_prime(sieve: &PrimeSieve, n: u64) -> Result<Option<u64>> {
    check_n(n)?;
    ensure_limit(sieve, n.div_ceil(2), "largest_prime")?;
    for a in 1..=n.isqrt() {
        if let Some(m) = plus_candidate(n, a) {
            if sieve.is_prime(m) {
                return Ok(Some(m));
            }
        }
    }
    // no plus prime: largest minus prime, if any
    let mut best = None;
    for &p in sieve.primes() {
        if (p as u128) * (p as u128) >= n as u128 {
            break;
        }
        if digit_sum_raw(n, p) >= p {
            best = Some(p);
        }
    }
    Ok(best)
}

/// Census-grade record: minus part by direct digit sums over `p^2 < n`, plus
/// part by the interval enumeration.
pub fn record_fast(sieve: &PrimeSieve, n: u64) -> Result<DenomRecord> {
    check_n(n)?;
    ensure_limit(sieve, n.div_ceil(2), "record_fast")?;
    let mut minus = Vec::new();
    for &p in sieve.primes() {
        if (p as u128) * (p as u128) >= n as u128 {
            break;
        }
        if digit_sum_raw(n, p) >= p {
            minus.push(p);
        }
    }
    let plus = plus_primes_fast(sieve, n)?;
    Ok(assemble_record(n, minus, plus))
}

/// Exact value of the denominator of `n` as a big integer. Intended for
/// desk-scale `n`; the value has on the order of `sqrt(n)` bits.
pub fn value(sieve: &PrimeSieve, n: u64) -> Result<BigUint> {
    Ok(prime_product(&prime_set(sieve, n)?))
}

pub(crate) fn prime_product(primes: &[u64]) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for &p in primes {
        acc *= p;
    }
    acc
}

/// The von Staudt–Clausen product: all primes `p` with `p - 1` dividing `n`,
/// which is the denominator of the `n`-th Bernoulli number. For odd `n > 1`
/// that number is 0, so the product is taken as 1 there.
pub fn clausen_product(n: u64) -> Result<BigUint> {
    check_n(n)?;
    if n > 1 && n % 2 == 1 {
        return Ok(BigUint::from(1u32));
    }
    let mut primes: Vec<u64> = divisors(n)
        .into_iter()
        .filter_map(|d| {
            let p = d + 1;
            is_prime_u64(p).then_some(p)
        })
        .collect();
    primes.sort_unstable();
    Ok(prime_product(&primes))
}

/// All divisors of `n >= 1`, unsorted.
fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    let mut rest = n;
    let mut d = 2u64;
    while (d as u128) * (d as u128) <= rest as u128 {
        if rest % d == 0 {
            let mut power = 1u64;
            let base_len = divs.len();
            while rest % d == 0 {
                rest /= d;
                power *= d;
                for i in 0..base_len {
                    divs.push(divs[i] * power);
                }
            }
        }
        d += 1;
    }
    if rest > 1 {
        let base_len = divs.len();
        for i in 0..base_len {
            divs.push(divs[i] * rest);
        }
    }
    divs
}

/// Primes `p <= n + 1` with `s_p(n) = p - 1`, ascending. Such a `p` forces
/// `(p - 1) | n`, so only divisor successors of `n` need checking. These are
/// exactly the primes that may join the denominator at the step `n -> n + 1`.
pub fn gain_witnesses(sieve: &PrimeSieve, n: u64) -> Result<Vec<u64>> {
    check_n(n)?;
    let mut witnesses = Vec::new();
    for d in divisors(n) {
        let p = d + 1;
        if sieve.is_prime_ext(p)? && digit_sum_raw(n, p) == p - 1 {
            witnesses.push(p);
        }
    }
    witnesses.sort_unstable();
    Ok(witnesses)
}

/// Classifies the step `n -> n + 1`: gained and lost primes, exact size
/// comparison, and the witness list. Needs `sieve.limit() >= (n + 2) / 2`.
pub fn classify_transition(sieve: &PrimeSieve, n: u64) -> Result<TransitionRecord> {
    check_n(n)?;
    ensure_limit(sieve, (n + 2) / 2, "classify_transition")?;
    let cur = full_set_fast(sieve, n)?;
    let next = full_set_fast(sieve, n + 1)?;

    let gained: Vec<u64> = next
        .iter()
        .copied()
        .filter(|p| cur.binary_search(p).is_err())
        .collect();
    let lost: Vec<u64> = cur
        .iter()
        .copied()
        .filter(|p| next.binary_search(p).is_err())
        .collect();

    // Exact comparison through the symmetric difference: the ratio of the two
    // denominators is prod(lost) / prod(gained), and products of distinct
    // primes are equal only for equal sets.
    let comparison = prime_product(&lost).cmp(&prime_product(&gained));
    let divides = gained.is_empty();
    let case1_witnesses = gain_witnesses(sieve, n)?;
    debug_assert!(gained
        .iter()
        .all(|p| case1_witnesses.binary_search(p).is_ok()));
    let in_a = !case1_witnesses.is_empty();

    Ok(TransitionRecord {
        n,
        divides,
        comparison,
        gained_primes: gained,
        lost_primes: lost,
        case1_witnesses,
        in_a,
    })
}

/// Sorted full prime set of `n` assembled from the fast record.
pub(crate) fn full_set_fast(sieve: &PrimeSieve, n: u64) -> Result<Vec<u64>> {
    let rec = record_fast(sieve, n)?;
    let mut set = rec.minus_primes;
    set.extend_from_slice(&rec.plus_primes);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve() -> PrimeSieve {
        PrimeSieve::new(20_000).unwrap()
    }

    #[test]
    fn prime_sets_by_hand() {
        let s = sieve();
        assert_eq!(prime_set(&s, 5).unwrap(), vec![2, 3]);
        assert_eq!(prime_set(&s, 1).unwrap(), Vec::<u64>::new());
        // 9 = 1001_2 and 14_5; 5 = (9 + 1) / 2 is the extreme case
        assert_eq!(prime_set(&s, 9).unwrap(), vec![2, 5]);
    }

    #[test]
    fn records_by_hand() {
        let s = sieve();
        let r = record(&s, 100).unwrap();
        assert_eq!(r.minus_primes, vec![2, 3]);
        assert_eq!(r.plus_primes, vec![13, 17]);
        assert_eq!(r.omega_plus(), 2);
        assert_eq!(r.largest_prime, Some(17));

        let r = record(&s, 4).unwrap();
        assert!(r.minus_primes.is_empty() && r.plus_primes.is_empty());
        assert_eq!(r.largest_prime, None);
    }

    #[test]
    fn perfect_prime_square_is_excluded() {
        let s = sieve();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let r = record(&s, p * p).unwrap();
            assert!(!r.minus_primes.contains(&p));
            assert!(!r.plus_primes.contains(&p));
        }
    }

    #[test]
    fn fast_plus_enumeration_by_hand() {
        let s = sieve();
        assert_eq!(plus_primes_fast(&s, 100).unwrap(), vec![13, 17]);
        assert_eq!(omega_plus_fast(&s, 100).unwrap(), 2);
        assert_eq!(omega_plus_fast(&s, 2).unwrap(), 0);
        assert_eq!(log_plus_fast(&s, 2).unwrap(), 0.0);
        let expect = (221.0f64).ln(); // log 13 + log 17
        assert!((log_plus_fast(&s, 100).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn fast_path_matches_reference_scan() {
        let s = sieve();
        for n in 1..=3_000u64 {
            let slow = record(&s, n).unwrap();
            let fast = record_fast(&s, n).unwrap();
            assert_eq!(slow, fast, "n = {n}");
            assert_eq!(
                largest_prime(&s, n).unwrap(),
                slow.largest_prime,
                "largest prime mismatch at n = {n}"
            );
        }
    }

    #[test]
    fn largest_prime_by_hand() {
        let s = sieve();
        assert_eq!(largest_prime(&s, 9).unwrap(), Some(5));
        assert_eq!(largest_prime(&s, 4).unwrap(), None);
        // P(denominator of 2p - 1) = p
        for &p in s.primes_in(2, 1_000).unwrap() {
            assert_eq!(largest_prime(&s, 2 * p - 1).unwrap(), Some(p));
        }
    }

    #[test]
    fn largest_prime_never_exceeds_half() {
        let s = sieve();
        for n in 1..=2_000u64 {
            if let Some(p) = largest_prime(&s, n).unwrap() {
                assert!(p <= n.div_ceil(2));
            }
        }
    }

    #[test]
    fn exact_values() {
        let s = sieve();
        assert_eq!(value(&s, 5).unwrap(), BigUint::from(6u32));
        assert_eq!(value(&s, 100).unwrap(), BigUint::from(1326u32));
        assert_eq!(value(&s, 1).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn clausen_products() {
        assert_eq!(clausen_product(6).unwrap(), BigUint::from(42u32));
        assert_eq!(clausen_product(5).unwrap(), BigUint::from(1u32));
        assert_eq!(clausen_product(12).unwrap(), BigUint::from(2730u32));
        // product formula applied at n = 1 gives the denominator of B_1
        assert_eq!(clausen_product(1).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn transition_at_mersenne() {
        let s = sieve();
        // 7 = 2^3 - 1: denominators 6 and 3, ratio exactly 2
        let t = classify_transition(&s, 7).unwrap();
        assert!(t.divides);
        assert_eq!(t.comparison, Ordering::Greater);
        assert_eq!(t.ratio_if_divides().unwrap(), BigUint::from(2u32));
        assert_eq!(t.lost_primes, vec![2]);
    }

    #[test]
    fn transition_witnesses() {
        let s = sieve();
        let t = classify_transition(&s, 5).unwrap();
        assert!(!t.in_a);
        assert!(t.divides);
        assert_eq!(t.lost_primes, vec![3]); // 6 -> 2

        let t = classify_transition(&s, 4).unwrap();
        assert!(t.in_a);
        assert!(t.case1_witnesses.contains(&2)); // s_2(4) = 1
        assert_eq!(t.case1_witnesses, vec![2, 3, 5]);
        assert_eq!(t.gained_primes, vec![2, 3]);
        assert_eq!(t.comparison, Ordering::Less);
    }

    #[test]
    fn witnesses_include_shifted_prime() {
        let s = sieve();
        // n + 1 prime q is always a witness for n: s_q(n) = n = q - 1
        for &q in s.primes_in(2, 500).unwrap() {
            let w = gain_witnesses(&s, q - 1).unwrap();
            assert!(w.contains(&q), "q = {q}");
        }
    }

    #[test]
    fn sieve_too_small_is_range_error() {
        let s = PrimeSieve::new(10).unwrap();
        assert!(matches!(prime_set(&s, 100), Err(Error::Range(_))));
        assert!(matches!(omega_plus_fast(&s, 100), Err(Error::Range(_))));
        assert!(matches!(classify_transition(&s, 100), Err(Error::Range(_))));
    }

    #[test]
    fn zero_n_is_usage_error() {
        let s = PrimeSieve::new(10).unwrap();
        assert!(matches!(prime_set(&s, 0), Err(Error::Usage(_))));
        assert!(matches!(clausen_product(0), Err(Error::Usage(_))));
    }

    #[test]
    fn divisor_enumeration() {
        let mut d = divisors(12);
        d.sort_unstable();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        let mut d = divisors(97);
        d.sort_unstable();
        assert_eq!(d, vec![1, 97]);
    }
}
