//! Special functions and empirical checks of the analytic estimates.
//!
//! The exponential integral `E_1` governs the asymptotics of the plus-part
//! prime count; the remaining items are the supporting cast: its divergent
//! asymptotic expansion with a rigorous remainder bracket, the clamped
//! iterated logarithms, the error-shape factor `delta_c`, the sawtooth `psi`,
//! the prime-reciprocal tails `F_kappa`, and desk-scale evaluations of the
//! sieve-sum inequalities and the fractional-part census.

use num_bigint::BigUint;

use crate::digits::digit_sum_raw;
use crate::primes::PrimeSieve;
use crate::{Error, Result};

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// How an [`AnalyticEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Series,
    ContinuedFraction,
    TruncatedSum,
    Census,
}

/// A value together with a bracket known to contain the true quantity.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticEstimate {
    pub value: f64,
    pub error_low: f64,
    pub error_high: f64,
    pub method: EstimateMethod,
}

impl AnalyticEstimate {
    fn new(value: f64, error_low: f64, error_high: f64, method: EstimateMethod) -> Self {
        debug_assert!(error_low <= value && value <= error_high);
        AnalyticEstimate {
            value,
            error_low,
            error_high,
            method,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.error_low <= x && x <= self.error_high
    }
}

/// Exponent weight in the sums `sum (log p)^kappa ...`; the estimates are
/// stated only for the exponents 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kappa {
    Zero,
    One,
}

impl Kappa {
    #[inline]
    fn weight(self, p: u64) -> f64 {
        match self {
            Kappa::Zero => 1.0,
            Kappa::One => (p as f64).ln(),
        }
    }

    fn log_power(self, x: f64) -> f64 {
        match self {
            Kappa::Zero => 1.0,
            Kappa::One => x.ln(),
        }
    }
}

/// The exponential integral `E_1(x)`, the integral of `exp(-t)/t` from `x`
/// to infinity. Series below 1.5, continued fraction above; absolute error
/// stays below `1e-12` across `[1e-3, 700]`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("E_1 requires x > 0, got {x}")));
    }
    if x <= 1.5 {
        // E_1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
        let mut sum = -EULER_MASCHERONI - x.ln();
        let mut term = 1.0f64; // x^k / k!
        for k in 1..200 {
            term *= x / k as f64;
            let contribution = if k % 2 == 1 {
                term / k as f64
            } else {
                -term / k as f64
            };
            sum += contribution;
            if contribution.abs() < 1e-17 * (1.0 + sum.abs()) {
                break;
            }
        }
        Ok(sum)
    } else {
        // Lentz's algorithm on E_1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(...)))
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200u32 {
            let a = -((i as f64) * (i as f64));
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(h * (-x).exp())
    }
}

/// Partial sum of the asymptotic expansion
/// `E_1(x) ~ (e^-x / x) sum_{m=0}^{N-1} (-1)^m m! / x^m`
/// together with a bracket from the integral remainder, whose magnitude is
/// at most `N! e^-x / x^(N+1)` (doubled for safety).
pub fn e1_asymptotic_partial(x: f64, terms: u32) -> Result<AnalyticEstimate> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("expansion requires x > 0, got {x}")));
    }
    if terms == 0 {
        return Err(Error::usage("expansion needs at least one term"));
    }
    let mut sum = 0.0f64;
    let mut term = 1.0f64; // (-1)^m m! / x^m
    for m in 0..terms {
        sum += term;
        term *= -((m + 1) as f64) / x;
    }
    let value = sum * (-x).exp() / x;
    // after the loop, |term| = N! / x^N
    let halfwidth = 2.0 * term.abs() * (-x).exp() / x;
    Ok(AnalyticEstimate::new(
        value,
        value - halfwidth,
        value + halfwidth,
        EstimateMethod::Series,
    ))
}

/// Partial sum `sum_{j=1}^N (-1)^(j-1) 2^j (j-1)! sqrt(n) / (log n)^j` of the
/// plus-part prime-count expansion; the leading term is `2 sqrt(n) / log n`.
pub fn omega_plus_expansion(n: u64, terms: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!("expansion requires n >= 3, got {n}")));
    }
    if terms == 0 {
        return Err(Error::usage("expansion needs at least one term"));
    }
    let log_n = (n as f64).ln();
    let mut term = 2.0 * (n as f64).sqrt() / log_n;
    let mut sum = 0.0;
    for j in 1..=terms {
        sum += term;
        term *= -2.0 * j as f64 / log_n; // term_{j+1} / term_j
    }
    Ok(sum)
}

/// The error-shape factor `exp(-c (log x)^(3/5) (log_2 x)^(-1/5))` with the
/// clamped iterated logarithm in the second factor. Defined for `x > e`.
pub fn delta_c(x: f64, c: f64) -> Result<f64> {
    if !(x > std::f64::consts::E) {
        return Err(Error::domain(format!("delta_c requires x > e, got {x}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain(format!("delta_c requires c > 0, got {c}")));
    }
    let exponent = c * x.ln().powf(0.6) * iterated_log(2, x).powf(-0.2);
    Ok((-exponent).exp())
}

/// Clamped iterated logarithm: `log_1 x = max(1, ln x)` and
/// `log_k x = max(1, log_(k-1)(ln x))`. Total on all of `f64`; arguments
/// where the logarithm is undefined clamp to 1.
pub fn iterated_log(k: u32, x: f64) -> f64 {
    assert!(k >= 1, "iterated_log order must be positive");
    let mut v = x;
    for _ in 1..k {
        v = v.ln();
    }
    // f64::max ignores NaN, so non-positive intermediates clamp to 1 here.
    v.ln().max(1.0)
}

/// The sawtooth `psi(x) = x - floor(x) - 1/2`, with values in `[-1/2, 1/2)`.
#[inline]
pub fn sawtooth(x: f64) -> f64 {
    x - x.floor() - 0.5
}

/// `F_0(t) = E_1(log t)` and `F_1(t) = 1/t`: the closed forms of the prime
/// reciprocal tails. Requires `t > 1`.
pub fn f_kappa(t: f64, kappa: Kappa) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::domain(format!("F_kappa requires t > 1, got {t}")));
    }
    match kappa {
        Kappa::Zero => exp_integral_e1(t.ln()),
        Kappa::One => Ok(1.0 / t),
    }
}

/// Truncated tail `sum_{t < p <= limit} (log p)^kappa / (p (p-1))`, bracketed
/// by the telescoping bound `2 (log limit)^kappa / limit` on the discarded
/// part. Compare against [`f_kappa`]. Requires `limit >= 10 t`.
pub fn prime_recip_tail(sieve: &PrimeSieve, t: f64, kappa: Kappa) -> Result<AnalyticEstimate> {
    if !(t >= 2.0) {
        return Err(Error::domain(format!("tail requires t >= 2, got {t}")));
    }
    let limit = sieve.limit();
    if (limit as f64) < 10.0 * t {
        return Err(Error::range(format!(
            "tail at t = {t} needs sieve limit >= {}, have {limit}",
            (10.0 * t).ceil()
        )));
    }
    let start = sieve.primes().partition_point(|&p| (p as f64) <= t);
    let mut sum = 0.0f64;
    for &p in &sieve.primes()[start..] {
        let pf = p as f64;
        sum += kappa.weight(p) / (pf * (pf - 1.0));
    }
    let tail_bound = 2.0 * kappa.log_power(limit as f64) / limit as f64;
    Ok(AnalyticEstimate::new(
        sum,
        sum,
        sum + tail_bound,
        EstimateMethod::TruncatedSum,
    ))
}

/// Outcome of one sieve-sum inequality evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SieveSumCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates `sum_{z < p <= x} (floor((x+y)/p) - floor(x/p)) (log p)^kappa`
/// against the explicit bound `2 eps^-1 (y+1) (log x)^kappa`, under the
/// constraints `x >= 2`, `1 < x^eps <= y <= z < x`, `eps in (0,1)`.
pub fn prime_multiple_count_bound(
    sieve: &PrimeSieve,
    x: f64,
    y: f64,
    z: f64,
    kappa: Kappa,
    epsilon: f64,
) -> Result<SieveSumCheck> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::usage(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    if !(x >= 2.0) {
        return Err(Error::usage(format!("x must be >= 2, got {x}")));
    }
    let x_eps = x.powf(epsilon);
    if !(x_eps > 1.0 && x_eps <= y && y <= z && z < x) {
        return Err(Error::usage(format!(
            "need 1 < x^eps <= y <= z < x, got x^eps = {x_eps:.6}, y = {y}, z = {z}, x = {x}"
        )));
    }
    if (sieve.limit() as f64) < x {
        return Err(Error::range(format!(
            "sieve limit {} below x = {x}",
            sieve.limit()
        )));
    }
    let mut lhs = 0.0f64;
    let lo = sieve.primes().partition_point(|&p| (p as f64) <= z);
    for &p in &sieve.primes()[lo..] {
        let pf = p as f64;
        if pf > x {
            break;
        }
        let count = ((x + y) / pf).floor() - (x / pf).floor();
        if count > 0.0 {
            lhs += count * kappa.weight(p);
        }
    }
    let rhs = 2.0 / epsilon * (y + 1.0) * kappa.log_power(x);
    Ok(SieveSumCheck {
        lhs,
        rhs,
        holds: lhs < rhs,
    })
}

/// Tail of the plus-part count beyond `sqrt(n)/alpha`: the exact integer sum
/// `sum_{sqrt(n)/alpha < p <= n} (floor((n-1)/(p-1)) - floor(n/p))`, reported
/// against the reference size `alpha sqrt(n)` (the implied constant of the
/// estimate is unspecified, so no assertion is made here).
pub fn omega_tail_sum(sieve: &PrimeSieve, n: u64, alpha: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::usage(format!(
            "omega_tail_sum requires n >= 2, got {n}"
        )));
    }
    let threshold = (n as f64).powf(-7.0 / 16.0);
    if !(alpha > threshold && alpha < 1.0) {
        return Err(Error::usage(format!(
            "alpha must lie in (n^(-7/16), 1) = ({threshold:.6}, 1), got {alpha}"
        )));
    }
    if sieve.limit() < n {
        return Err(Error::range(format!(
            "sieve limit {} below n = {n}",
            sieve.limit()
        )));
    }
    let cutoff = (n as f64).sqrt() / alpha;
    let lo = sieve.primes().partition_point(|&p| (p as f64) <= cutoff);
    let mut lhs: u64 = 0;
    for &p in &sieve.primes()[lo..] {
        if p > n {
            break;
        }
        lhs += (n - 1) / (p - 1) - n / p;
    }
    Ok((lhs as f64, alpha * (n as f64).sqrt()))
}

/// The sawtooth correction sum over `sqrt(n) < p <= sqrt(n)/delta_c(sqrt(n))`:
/// `sum (psi((n-1)/(p-1)) - psi(n/p))`. Its size against `n^0.49` is a
/// report-only quantity.
pub fn sawtooth_correction_sum(sieve: &PrimeSieve, n: u64, c: f64) -> Result<f64> {
    let root = (n as f64).sqrt();
    let delta = delta_c(root, c)?;
    let hi = root / delta;
    if (sieve.limit() as f64) < hi {
        return Err(Error::range(format!(
            "sum over ({root}, {hi:.1}] needs sieve limit >= {}, have {}",
            hi.ceil(),
            sieve.limit()
        )));
    }
    let lo = sieve.primes().partition_point(|&p| (p as f64) <= root);
    let mut sum = 0.0f64;
    for &p in &sieve.primes()[lo..] {
        if (p as f64) > hi {
            break;
        }
        // (n-1)/(p-1) = n/p + (n-p)/(p(p-1))
        sum += sawtooth((n as f64 - 1.0) / (p as f64 - 1.0)) - sawtooth(n as f64 / p as f64);
    }
    Ok(sum)
}

/// Result of the fractional-part census over the window `(2v, 3v)`.
#[derive(Debug, Clone, Copy)]
pub struct FractionalCensus {
    /// Primes in `(2v, 3v)` with `{n/p} >= 1 - n/(16 v^2)`.
    pub count: u64,
    /// Primes in `(2v, 3v)` dividing the plus part of the denominator of `n`.
    pub divisor_count: u64,
    /// The fractional-part threshold `1 - n/(16 v^2)`.
    pub threshold: f64,
    /// The reference size `n / (v log n)`.
    pub reference: f64,
}

/// Counts primes `p` in the open window `(2v, 3v)` whose fractional part
/// `{n/p}` is at least `1 - n/(16 v^2)`; all such primes provably divide the
/// plus part, which the companion count confirms. Requires
/// `v^(37/20) <= n <= v^2` (checked exactly) and a sieve covering `3v`.
pub fn fractional_census(sieve: &PrimeSieve, n: u64, v: u64) -> Result<FractionalCensus> {
    if v < 2 {
        return Err(Error::usage(format!(
            "window parameter v must be >= 2, got {v}"
        )));
    }
    // v^(37/20) <= n  <=>  v^37 <= n^20, checked in exact arithmetic
    if BigUint::from(v).pow(37) > BigUint::from(n).pow(20) {
        return Err(Error::usage(format!(
            "need v^(37/20) <= n, violated by v = {v}, n = {n}"
        )));
    }
    if (n as u128) > (v as u128) * (v as u128) {
        return Err(Error::usage(format!(
            "need n <= v^2, violated by v = {v}, n = {n}"
        )));
    }
    if sieve.limit() < 3 * v {
        return Err(Error::range(format!(
            "window (2v, 3v) needs sieve limit >= {}, have {}",
            3 * v,
            sieve.limit()
        )));
    }

    let sixteen_v2 = 16u128 * (v as u128) * (v as u128);
    let mut count = 0u64;
    let mut divisor_count = 0u64;
    for &p in sieve.primes_in(2 * v, 3 * v - 1)? {
        let divides = digit_sum_raw(n, p) >= p;
        if divides {
            divisor_count += 1;
        }
        // {n/p} >= 1 - n/(16 v^2)  <=>  (n mod p) 16 v^2 >= p (16 v^2 - n)
        let r = (n % p) as u128;
        if r * sixteen_v2 >= (p as u128) * (sixteen_v2 - n as u128) {
            count += 1;
            // the digit-sum chain a + b > p - 1 makes this unconditional
            assert!(
                divides,
                "counted prime {p} must divide the plus part of {n}"
            );
        }
    }
    let threshold = 1.0 - n as f64 / (16.0 * (v as f64) * (v as f64));
    let reference = n as f64 / (v as f64 * (n as f64).ln());
    Ok(FractionalCensus {
        count,
        divisor_count,
        threshold,
        reference,
    })
}

/// The logarithmic integral `li(u)`, the integral of `1/log t` from 2 to `u`,
/// so `li(2) = 0`. Computed through the entire series of the exponential
/// integral `Ei`; relative accuracy is near machine precision, well inside
/// the `1e-10` contract.
pub fn li(u: f64) -> Result<f64> {
    if !(u >= 2.0) {
        return Err(Error::domain(format!("li requires u >= 2, got {u}")));
    }
    Ok(ei_series(u.ln()) - ei_series(std::f64::consts::LN_2))
}

/// `Ei(x) = gamma + ln x + sum_{k>=1} x^k / (k k!)` for `x > 0`; every term
/// is positive, so there is no cancellation.
fn ei_series(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut sum = EULER_MASCHERONI + x.ln();
    let mut term = 1.0f64; // x^k / k!
    for k in 1..500 {
        term *= x / k as f64;
        let contribution = term / k as f64;
        sum += contribution;
        if contribution < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}
