//! Poisson reference distributions: distribution function, Laplace
//! transform, upper quantiles, and sampling by inversion of the CDF.

use crate::error::{Error, Result};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(())
}

/// `P(xi <= v)` for `xi ~ Poisson(lambda)`, by stable incremental term
/// recursion `p_{k+1} = p_k lambda / (k+1)`.
pub fn poisson_cdf(lambda: f64, v: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!("v must be >= 0, got {v}")));
    }
    Ok(cdf_unchecked(lambda, v.floor() as u64))
}

fn cdf_unchecked(lambda: f64, n: u64) -> f64 {
    let mut term = (-lambda).exp();
    let mut sum = term;
    for k in 1..=n {
        term *= lambda / k as f64;
        sum += term;
    }
    sum.min(1.0)
}

/// Cumulative probabilities at the integers `0..=max_k`.
pub(crate) fn poisson_cdf_integers(lambda: f64, max_k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_k + 1);
    let mut term = (-lambda).exp();
    let mut sum = term;
    out.push(sum.min(1.0));
    for k in 1..=max_k as u64 {
        term *= lambda / k as f64;
        sum += term;
        out.push(sum.min(1.0));
    }
    out
}

/// Laplace transform `E e^{-v xi} = exp(-lambda (1 - e^{-v}))`.
pub fn poisson_laplace(lambda: f64, v: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!("v must be >= 0, got {v}")));
    }
    Ok((-lambda * (1.0 - (-v).exp())).exp())
}

const QUANTILE_SCAN_CAP: u64 = 10_000_000;

/// Upper quantile `min { n : P(xi > n) <= alpha }` by forward scan.
pub fn poisson_upper_quantile(alpha: f64, lambda: f64) -> Result<u64> {
    check_lambda(lambda)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0,1], got {alpha}")));
    }
    let mut term = (-lambda).exp();
    let mut cdf = term;
    let mut n = 0u64;
    while 1.0 - cdf > alpha {
        n += 1;
        term *= lambda / n as f64;
        cdf += term;
        if n > QUANTILE_SCAN_CAP {
            return Err(Error::Domain(format!(
                "quantile scan did not terminate for alpha = {alpha}, lambda = {lambda}"
            )));
        }
    }
    Ok(n)
}

const SAMPLE_CAP: u64 = 10_000;

/// Inversion sampling: the smallest `n` with `F(n) >= u` for `u` uniform on
/// `[0,1)`.
pub fn sample_poisson(lambda: f64, u: f64) -> u64 {
    let mut term = (-lambda).exp();
    let mut cdf = term;
    let mut n = 0u64;
    while cdf < u && n < SAMPLE_CAP {
        n += 1;
        term *= lambda / n as f64;
        cdf += term;
    }
    n
}
