//! Base-`b` positional expansions and digit sums.
//!
//! The digit sum `s_b(n)` drives everything: a prime `p` divides the
//! denominator of the constant-free Bernoulli polynomial of `n` exactly when
//! `s_p(n) >= p`. The trailing run of maximal digits decides how the digit
//! sum moves from `n` to `n + 1`:
//!
//! `s_b(n + 1) = s_b(n) + 1 - r * (b - 1)`
//!
//! where `r` counts trailing digits of `n` equal to `b - 1`.

use crate::{Error, Result};

/// Base-`b` expansion of `n`, most significant digit first.
///
/// `n = 0` is represented by an empty digit list, keeping the nonzero-leading
/// -digit invariant unconditional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    pub n: u64,
    pub base: u64,
    pub digits: Vec<u64>,
    pub digit_sum: u64,
    /// Length of the maximal suffix of digits equal to `base - 1`.
    pub trailing_max_run: u32,
}

/// Expands `n` in base `b >= 2`.
pub fn expand(n: u64, b: u64) -> Result<DigitExpansion> {
    check_base(b)?;
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push(rest % b);
        rest /= b;
    }
    digits.reverse();
    let digit_sum = digits.iter().sum();
    let trailing_max_run = digits.iter().rev().take_while(|&&d| d == b - 1).count() as u32;
    Ok(DigitExpansion {
        n,
        base: b,
        digits,
        digit_sum,
        trailing_max_run,
    })
}

/// The digit sum `s_b(n)`, without materializing the expansion.
#[inline]
pub fn digit_sum(n: u64, b: u64) -> Result<u64> {
    check_base(b)?;
    Ok(digit_sum_raw(n, b))
}

/// Digit sum with the base already validated. Hot path for the sieve scans:
/// one division per digit, no allocation.
#[inline]
pub(crate) fn digit_sum_raw(n: u64, b: u64) -> u64 {
    debug_assert!(b >= 2);
    let mut sum = 0;
    let mut rest = n;
    while rest > 0 {
        sum += rest % b;
        rest /= b;
    }
    sum
}

/// Count of trailing digits of `n` in base `b` equal to `b - 1`.
#[inline]
pub fn trailing_max_run(n: u64, b: u64) -> Result<u32> {
    check_base(b)?;
    let mut run = 0;
    let mut rest = n;
    while rest > 0 && rest % b == b - 1 {
        run += 1;
        rest /= b;
    }
    Ok(run)
}

#[inline]
fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::usage(format!("digit base must be >= 2, got {b}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions_by_hand() {
        let e = expand(13, 3).unwrap(); // 111_3
        assert_eq!(e.digits, vec![1, 1, 1]);
        assert_eq!(e.digit_sum, 3);
        assert_eq!(e.trailing_max_run, 0);

        let e = expand(8, 3).unwrap(); // 22_3
        assert_eq!(e.digits, vec![2, 2]);
        assert_eq!(e.digit_sum, 4);
        assert_eq!(e.trailing_max_run, 2);

        let e = expand(0, 7).unwrap();
        assert!(e.digits.is_empty());
        assert_eq!(e.digit_sum, 0);
        assert_eq!(e.trailing_max_run, 0);
    }

    #[test]
    fn digit_sums_by_hand() {
        assert_eq!(digit_sum(7, 2).unwrap(), 3); // 111_2
        assert_eq!(digit_sum(100, 3).unwrap(), 4); // 10201_3
        assert_eq!(digit_sum(100, 7).unwrap(), 4); // 202_7
    }

    #[test]
    fn digit_sum_of_prime_square_is_one() {
        for p in [2u64, 3, 5, 7, 11, 13, 97, 65_521] {
            assert_eq!(digit_sum(p * p, p).unwrap(), 1);
        }
    }

    #[test]
    fn base_below_two_rejected() {
        assert!(matches!(expand(5, 1), Err(Error::Usage(_))));
        assert!(matches!(digit_sum(5, 0), Err(Error::Usage(_))));
        assert!(matches!(trailing_max_run(5, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn expansion_reconstructs_value() {
        for n in (0..5_000).chain([u64::MAX - 1, u64::MAX]) {
            for b in [2u64, 3, 7, 10, 256] {
                let e = expand(n, b).unwrap();
                let value = e.digits.iter().fold(0u128, |acc, &d| {
                    assert!(d < b);
                    acc * b as u128 + d as u128
                });
                assert_eq!(value, n as u128);
                if n > 0 {
                    assert_ne!(e.digits[0], 0);
                }
                assert_eq!(e.digit_sum, digit_sum(n, b).unwrap());
                assert_eq!(e.trailing_max_run, trailing_max_run(n, b).unwrap());
            }
        }
    }

    #[test]
    fn successor_identity_small_exhaustive() {
        for b in 2..=12u64 {
            for n in 0..20_000u64 {
                let r = trailing_max_run(n, b).unwrap() as u64;
                let expect = digit_sum(n, b).unwrap() + 1 - r * (b - 1);
                assert_eq!(digit_sum(n + 1, b).unwrap(), expect, "n={n} b={b}");
            }
        }
    }
}
