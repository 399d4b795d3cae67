//! Exact rational Bernoulli numbers and polynomials.
//!
//! This is the ground-truth side of the denominator identities: the
//! denominator of `B_n(X) - B_n` must equal the digit-sum prime product of
//! [`crate::denom`], and the denominator of `B_n` itself is the von
//! Staudt–Clausen product. Everything here is exact big-rational arithmetic;
//! no floating shortcut is permitted in an oracle.
//!
//! Bernoulli numbers use the convention `B_1 = -1/2`, the one under which
//! `B_n(X) = sum_k C(n,k) B_k X^(n-k)` yields `B_1(X) = X - 1/2`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub type BigRational = num_rational::BigRational;

/// Cap on the Bernoulli index; the defining recurrence is quadratic and this
/// is far beyond anything the identities are checked at.
pub const INDEX_CAP: usize = 1000;

/// Polynomial with exact rational coefficients, `coeffs[i]` the coefficient
/// of `X^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    /// Builds from coefficients by ascending power, trimming trailing zeros
    /// so the leading coefficient of a nonconstant polynomial is nonzero.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RationalPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Evaluates at an integer point by Horner's rule.
    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * BigRational::from_integer(x.clone()) + c;
        }
        acc
    }

    /// Least positive integer `D` such that `D * self` has integer
    /// coefficients: the lcm of the reduced coefficient denominators.
    pub fn denominator(&self) -> BigUint {
        let mut acc = BigUint::one();
        for c in &self.coeffs {
            let den = c
                .denom()
                .to_biguint()
                .expect("reduced denominators are positive");
            acc = acc.lcm(&den);
        }
        acc
    }
}

/// Bernoulli numbers `B_0 .. B_max`, computed once by the defining recurrence
/// `sum_{k=0}^{m} C(m+1, k) B_k = 0` and shared read-only afterwards.
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new(max_index: usize) -> Result<Self> {
        if max_index > INDEX_CAP {
            return Err(Error::resource(format!(
                "Bernoulli index {max_index} exceeds the cap {INDEX_CAP}"
            )));
        }
        let mut values: Vec<BigRational> = Vec::with_capacity(max_index + 1);
        values.push(BigRational::one());
        for m in 1..=max_index {
            // C(m+1, m) = m + 1, so (m + 1) B_m = -sum_{k < m} C(m+1, k) B_k
            let mut acc = BigRational::zero();
            let mut binom = BigUint::one(); // C(m+1, 0)
            for (k, b_k) in values.iter().enumerate() {
                if !b_k.is_zero() {
                    acc += b_k * BigRational::from_integer(BigInt::from(binom.clone()));
                }
                binom = binom * (m + 1 - k) / (k + 1);
            }
            values.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        Ok(BernoulliTable { values })
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// The exact Bernoulli number `B_k`.
    pub fn number(&self, k: usize) -> &BigRational {
        &self.values[k]
    }

    pub fn numbers(&self) -> &[BigRational] {
        &self.values
    }

    /// The Bernoulli polynomial `B_n(X) = sum_k C(n,k) B_k X^(n-k)`.
    pub fn poly(&self, n: usize) -> Result<RationalPolynomial> {
        if n > self.max_index() {
            return Err(Error::resource(format!(
                "Bernoulli polynomial index {n} exceeds the table ({})",
                self.max_index()
            )));
        }
        let mut coeffs = vec![BigRational::zero(); n + 1];
        let mut binom = BigUint::one(); // C(n, 0)
        for k in 0..=n {
            coeffs[n - k] =
                &self.values[k] * BigRational::from_integer(BigInt::from(binom.clone()));
            if k < n {
                binom = binom * (n - k) / (k + 1);
            }
        }
        Ok(RationalPolynomial::new(coeffs))
    }

    /// The constant-free polynomial `B_n(X) - B_n`, whose denominator is the
    /// digit-sum prime product. Defined for `n >= 1`.
    pub fn btilde(&self, n: usize) -> Result<RationalPolynomial> {
        if n == 0 {
            return Err(Error::usage("btilde requires n >= 1"));
        }
        let mut poly = self.poly(n)?;
        poly.coeffs[0] = BigRational::zero();
        Ok(poly)
    }
}

/// The exact power sum `1^(n-1) + 2^(n-1) + ... + (upper - 1)^(n-1)` by
/// direct summation. Equals `btilde(n)` evaluated at `upper`, divided by `n`.
pub fn power_sum(upper: u64, n: u64) -> Result<BigUint> {
    if upper < 1 || n < 1 {
        return Err(Error::usage("power_sum requires upper >= 1 and n >= 1"));
    }
    let exp = u32::try_from(n - 1)
        .map_err(|_| Error::resource(format!("power_sum exponent {} too large", n - 1)))?;
    let mut acc = BigUint::zero();
    for j in 1..upper {
        acc += BigUint::from(j).pow(exp);
    }
    Ok(acc)
}
