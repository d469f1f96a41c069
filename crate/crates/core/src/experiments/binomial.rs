//! Filter-count statistics for fixed-size photon ensembles.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Up to this `N` the coefficient is computed exactly with big integers.
pub const EXACT_LIMIT: u64 = 1000;
pub const MAX_N: u64 = 1_000_000;

/// `N` trials, `m` successes, success probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialSpec {
    pub n: u64,
    pub m: u64,
    pub p: f64,
}

impl BinomialSpec {
    pub fn new(n: u64, m: u64, p: f64) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::OutOfRange {
                what: "N",
                value: n as usize,
                min: 0,
                max: MAX_N as usize,
            });
        }
        if m > n {
            return Err(Error::InvalidArgument(format!("m = {m} exceeds N = {n}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "p = {p} is not a probability"
            )));
        }
        Ok(Self { n, m, p })
    }
}

/// `C(n, k)` by the multiplicative formula; every intermediate quotient is exact.
pub fn binomial_coefficient(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if n <= EXACT_LIMIT {
        // C(1000, 500) ≈ 2.7e299 still fits in an f64
        return binomial_coefficient(n, k)
            .to_f64()
            .expect("coefficient is finite for n ≤ 1000")
            .ln();
    }
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// `P(N, m, p) = C(N, m) p^m (1−p)^{N−m}`, evaluated in log space.
pub fn binomial_pmf(spec: &BinomialSpec) -> f64 {
    let BinomialSpec { n, m, p } = *spec;
    if p == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if m == n { 1.0 } else { 0.0 };
    }
    let ln = ln_binomial(n, m) + m as f64 * p.ln() + (n - m) as f64 * (-p).ln_1p();
    ln.exp()
}

/// Probability that exactly half of `n` independent fair filters pass.
pub fn central_pmf(n: u64) -> Result<f64> {
    require_even(n)?;
    Ok(binomial_pmf(&BinomialSpec::new(n, n / 2, 0.5)?))
}

/// Large-`N` approximation `√(2/(πN))` of [`central_pmf`].
pub fn central_pmf_asymptotic(n: u64) -> f64 {
    (2.0 / (std::f64::consts::PI * n as f64)).sqrt()
}

/// Success probability of telling the exact half-and-half `|0⟩/|1⟩` ensemble from the
/// `|+⟩/|−⟩` one by counting filter passes, with equal priors and the rule
/// "declare `|+⟩/|−⟩` unless exactly `N/2` pass": `1 − ½ P(N, N/2, ½)`.
pub fn discrimination_power(n: u64) -> Result<f64> {
    Ok(1.0 - 0.5 * central_pmf(n)?)
}

fn require_even(n: u64) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "N must be even and at least 2, got {n}"
        )));
    }
    Ok(())
}
