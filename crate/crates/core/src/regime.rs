//! The quiet-behaviour and regular-spiking tests.
//!
//! Quiet behaviour compares segment spike counts against a Poisson law of
//! very low intensity: either spikes are extremely rare, or the count stays
//! under a Poisson quantile bound and two goodness-of-fit integrals (one on
//! the distribution function, one on the Laplace transform) stay under
//! critical values calibrated by Monte-Carlo replication.
//!
//! Regular spiking requires the interspike quantiles to cluster around the
//! median and the median spacing to cover at least 95% of the horizon.

use crate::error::{Error, Result};
use crate::poisson::{poisson_cdf_integers, poisson_laplace, poisson_upper_quantile, sample_poisson};
use crate::rng::stream_rng;
use crate::spike::SpikeTrain;
use crate::stats::{interspike_intervals, segment_counts, EmpiricalDf};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Fixed level of the count condition: the quiet test bounds `N_{T1}` by
/// the upper 5% quantile of `Poisson(lambda_c T1)`.
pub const COUNT_QUANTILE_LEVEL: f64 = 0.05;

/// Default critical intensity and quantile level of the quiet test.
pub const LAMBDA_C: f64 = 0.0005;
pub const ALPHA_C: f64 = 0.0005;
/// Default right endpoint of the integration interval `I = [0, I_end]`.
pub const I_END: f64 = 5.5;

/// Exact integral `int_I |F_hat_K(v) - F_lambda(v)| dv` for the plug-in
/// Poisson mean. Both functions are step functions jumping only at the
/// integers, so the integral is a finite breakpoint sum.
pub fn delta_df(counts: &[u64], plugin_mean: f64, i_end: f64) -> f64 {
    let kmax = i_end.floor() as usize;
    let n = counts.len() as f64;
    let mut at_most = vec![0u64; kmax + 1];
    for &c in counts {
        let c = c as usize;
        if c <= kmax {
            at_most[c] += 1;
        }
    }
    let mut cum = 0u64;
    let pois = poisson_cdf_integers(plugin_mean, kmax);
    let mut total = 0.0;
    for k in 0..=kmax {
        cum += at_most[k];
        let seg = (k as f64 + 1.0).min(i_end) - k as f64;
        if seg > 0.0 {
            total += (cum as f64 / n - pois[k]).abs() * seg;
        }
    }
    total
}

const SIMPSON_TOL: f64 = 1e-8;
const SIMPSON_MAX_DEPTH: u32 = 40;

fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
}

/// `int_I |psi_hat_K(v) - phi_lambda(v)| dv` by adaptive Simpson quadrature
/// to absolute tolerance `1e-8`. The empirical Laplace transform is
/// evaluated from the count frequency table, so the cost does not grow
/// with `K`.
pub fn delta_lt(counts: &[u64], plugin_mean: f64, i_end: f64) -> f64 {
    let n = counts.len() as f64;
    let max = counts.iter().copied().max().unwrap_or(0) as usize;
    let mut freq = vec![0u64; max + 1];
    for &c in counts {
        freq[c as usize] += 1;
    }
    let weights: Vec<(f64, f64)> = freq
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(c, &w)| (c as f64, w as f64 / n))
        .collect();
    let integrand = |v: f64| {
        let psi: f64 = weights.iter().map(|&(c, w)| w * (-v * c).exp()).sum();
        let phi = (-plugin_mean * (1.0 - (-v).exp())).exp();
        (psi - phi).abs()
    };
    let (a, b) = (0.0, i_end);
    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (integrand(a), integrand(b), integrand(m));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(&integrand, a, fa, b, fb, m, fm, whole, SIMPSON_TOL, SIMPSON_MAX_DEPTH)
}

/// Inputs identifying one Monte-Carlo calibration of the critical values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationKey {
    pub lambda_c: f64,
    pub t0: f64,
    pub k: usize,
    pub i_end: f64,
    pub alpha_c: f64,
    pub replications: u32,
    pub seed: u64,
}

impl CalibrationKey {
    pub fn example32(replications: u32, seed: u64) -> Self {
        CalibrationKey {
            lambda_c: LAMBDA_C,
            t0: 250.0,
            k: 100,
            i_end: I_END,
            alpha_c: ALPHA_C,
            replications,
            seed,
        }
    }
}

/// A calibration record; also the schema of the cache file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub lambda_c: f64,
    pub t0: f64,
    pub k: usize,
    pub i_end: f64,
    pub alpha_c: f64,
    pub replications: u32,
    pub seed: u64,
    pub c_df: f64,
    pub c_lt: f64,
}

impl Calibration {
    pub fn key(&self) -> CalibrationKey {
        CalibrationKey {
            lambda_c: self.lambda_c,
            t0: self.t0,
            k: self.k,
            i_end: self.i_end,
            alpha_c: self.alpha_c,
            replications: self.replications,
            seed: self.seed,
        }
    }
}

/// Draws `replications` independent count vectors of `K` iid
/// `Poisson(lambda_c T0)` variables, computes both goodness-of-fit
/// statistics with the plug-in mean of each vector, and returns the upper
/// `alpha_c`-quantiles of their empirical laws. Replications run on
/// derived streams, so the result is deterministic in the seed and
/// independent of scheduling.
pub fn calibrate_quantiles(key: &CalibrationKey) -> Result<Calibration> {
    if key.replications == 0 || key.k == 0 {
        return Err(Error::InvalidInput("replications and K must be positive".into()));
    }
    if !(key.alpha_c > 0.0 && key.alpha_c < 1.0) {
        return Err(Error::InvalidInput(format!("alpha_c must lie in (0,1), got {}", key.alpha_c)));
    }
    let lambda = key.lambda_c * key.t0;
    let stats: Vec<(f64, f64)> = (0..key.replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(key.seed, rep as u64);
            let counts: Vec<u64> =
                (0..key.k).map(|_| sample_poisson(lambda, rng.random::<f64>())).collect();
            let mean = counts.iter().sum::<u64>() as f64 / key.k as f64;
            (delta_df(&counts, mean, key.i_end), delta_lt(&counts, mean, key.i_end))
        })
        .collect();
    let dfs: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let lts: Vec<f64> = stats.iter().map(|s| s.1).collect();
    let upper = 1.0 - key.alpha_c;
    let c_df = EmpiricalDf::new(&dfs)?.quantile(upper)?;
    let c_lt = EmpiricalDf::new(&lts)?.quantile(upper)?;
    Ok(Calibration {
        lambda_c: key.lambda_c,
        t0: key.t0,
        k: key.k,
        i_end: key.i_end,
        alpha_c: key.alpha_c,
        replications: key.replications,
        seed: key.seed,
        c_df,
        c_lt,
    })
}

/// Reads a calibration cache file if it matches `key`, otherwise
/// recalibrates and writes the file.
pub fn load_or_calibrate(path: &Path, key: &CalibrationKey) -> Result<Calibration> {
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let cached: Calibration = serde_json::from_str(&text)
            .map_err(|e| Error::Cache(format!("unreadable cache {}: {e}", path.display())))?;
        if cached.key() == *key {
            return Ok(cached);
        }
    }
    let cal = calibrate_quantiles(key)?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(&cal).map_err(std::io::Error::other)?)?;
    Ok(cal)
}

/// Configuration of the quiet test.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuietConfig {
    /// Segment length.
    pub t0: f64,
    /// Number of segments; the horizon of the test is `T1 = K T0`.
    pub k: usize,
    pub lambda_c: f64,
    pub alpha_c: f64,
    pub i_end: f64,
    /// Calibrated critical value for the distribution-function integral.
    pub c_df: f64,
    /// Calibrated critical value for the Laplace-transform integral.
    pub c_lt: f64,
}

impl QuietConfig {
    pub fn new(t0: f64, k: usize, c_df: f64, c_lt: f64) -> Self {
        QuietConfig { t0, k, lambda_c: LAMBDA_C, alpha_c: ALPHA_C, i_end: I_END, c_df, c_lt }
    }

    pub fn from_calibration(cal: &Calibration) -> Self {
        QuietConfig {
            t0: cal.t0,
            k: cal.k,
            lambda_c: cal.lambda_c,
            alpha_c: cal.alpha_c,
            i_end: cal.i_end,
            c_df: cal.c_df,
            c_lt: cal.c_lt,
        }
    }

    pub fn t1(&self) -> f64 {
        self.k as f64 * self.t0
    }
}

/// Which clause of the quiet definition decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuietBranch {
    /// `N_{T1} <= 2` and `lambda_tilde <= 0.0001`.
    ExtremelyRare,
    /// Count bound and both goodness-of-fit conditions hold.
    PoissonFit,
    Fail,
}

/// Outcome of the quiet test with every intermediate statistic.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuietVerdict {
    pub branch: QuietBranch,
    pub n_t1: u64,
    /// Estimated intensity `N_{T1} / T1`.
    pub lambda_tilde: f64,
    /// The count bound `q(0.05, lambda_c T1)`.
    pub quantile_bound: u64,
    pub delta_df: f64,
    pub delta_lt: f64,
    pub extremely_rare_ok: bool,
    pub count_ok: bool,
    pub df_ok: bool,
    pub lt_ok: bool,
}

impl QuietVerdict {
    pub fn is_quiet(&self) -> bool {
        self.branch != QuietBranch::Fail
    }
}

/// Runs the quiet test on the first `K T0` time units of `train`.
pub fn classify_quiet(train: &SpikeTrain, cfg: &QuietConfig) -> Result<QuietVerdict> {
    let counts = segment_counts(train, cfg.t0, cfg.k)?;
    let t1 = cfg.t1();
    let n_t1 = counts.total();
    let lambda_tilde = n_t1 as f64 / t1;
    let plugin = lambda_tilde * cfg.t0; // equals the segment mean
    let quantile_bound = poisson_upper_quantile(COUNT_QUANTILE_LEVEL, cfg.lambda_c * t1)?;
    let ddf = delta_df(&counts.counts, plugin, cfg.i_end);
    let dlt = delta_lt(&counts.counts, plugin, cfg.i_end);
    let extremely_rare_ok = n_t1 <= 2 && lambda_tilde <= 0.0001;
    let count_ok = n_t1 <= quantile_bound;
    let df_ok = ddf <= cfg.c_df;
    let lt_ok = dlt <= cfg.c_lt;
    let branch = if extremely_rare_ok {
        QuietBranch::ExtremelyRare
    } else if count_ok && df_ok && lt_ok {
        QuietBranch::PoissonFit
    } else {
        QuietBranch::Fail
    };
    Ok(QuietVerdict {
        branch,
        n_t1,
        lambda_tilde,
        quantile_bound,
        delta_df: ddf,
        delta_lt: dlt,
        extremely_rare_ok,
        count_ok,
        df_ok,
        lt_ok,
    })
}

/// The long-run oscillation interval of the output process of a regularly
/// spiking neuron: geometric-series values bracketing its local minima and
/// maxima.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Benchmarks {
    /// Lower endpoint `e^{-c1 delta} / (1 - e^{-c1 delta})`.
    pub u1: f64,
    /// Upper endpoint `1 / (1 - e^{-c1 delta})`; exceeds `u1` by exactly 1.
    pub u2: f64,
}

/// Benchmarks for median interspike gap `delta` and output decay `c1`.
pub fn output_benchmarks(delta: f64, c1: f64) -> Result<Benchmarks> {
    if !(delta > 0.0 && c1 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need delta > 0 and c1 > 0, got delta = {delta}, c1 = {c1}"
        )));
    }
    let r = (-c1 * delta).exp();
    let u1 = r / (1.0 - r);
    Ok(Benchmarks { u1, u2: u1 + 1.0 })
}

/// Outcome of the regular-spiking test with every intermediate statistic.
/// Statistics that need at least two interspike intervals are `NaN` on
/// degenerate trains; degenerate data is a failing verdict, not an error.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RegularVerdict {
    pub n_t1: u64,
    /// Median interspike gap `Delta(T1)`.
    pub median: f64,
    /// `N_{T1} Delta(T1) / T1`.
    pub coverage: f64,
    pub r05: f64,
    pub r10: f64,
    pub r25: f64,
    pub coverage_ok: bool,
    pub count_ok: bool,
    pub r05_ok: bool,
    pub r10_ok: bool,
    pub r25_ok: bool,
    pub pass: bool,
    /// Output benchmarks at the median, when a decay rate was supplied.
    pub benchmarks: Option<Benchmarks>,
}

/// Runs the regular-spiking test on the first `t1` time units of `train`.
/// `c1` only fills in the output benchmarks of the verdict.
pub fn classify_regular(train: &SpikeTrain, t1: f64, c1: Option<f64>) -> RegularVerdict {
    let times: Vec<f64> =
        train.times().iter().copied().filter(|&t| t <= t1).collect();
    let n_t1 = times.len() as u64;
    let isis: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let (median, r05, r10, r25) = if isis.len() >= 2 {
        let df = EmpiricalDf::new(&isis).expect("nonempty interspike sample");
        let med = df.quantile(0.5).expect("valid level");
        let ratio = |alpha: f64| {
            (df.quantile(1.0 - alpha).unwrap() - df.quantile(alpha).unwrap()) / med
        };
        (med, ratio(0.05), ratio(0.1), ratio(0.25))
    } else {
        (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
    };
    let coverage = n_t1 as f64 * median / t1;
    let coverage_ok = (coverage - 1.0).abs() <= 0.05;
    let count_ok = n_t1 > 20;
    let r05_ok = r05 <= 0.3;
    let r10_ok = r10 <= 0.2;
    let r25_ok = r25 <= 0.1;
    let pass = coverage_ok && count_ok && r05_ok && r10_ok && r25_ok;
    let benchmarks = match c1 {
        Some(c1) if median.is_finite() && median > 0.0 => output_benchmarks(median, c1).ok(),
        _ => None,
    };
    RegularVerdict {
        n_t1,
        median,
        coverage,
        r05,
        r10,
        r25,
        coverage_ok,
        count_ok,
        r05_ok,
        r10_ok,
        r25_ok,
        pass,
        benchmarks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn train(times: Vec<f64>, horizon: f64) -> SpikeTrain {
        SpikeTrain::new(times, horizon, 1.0).unwrap()
    }

    /// Fine-grid Riemann oracle for the distribution-function integral,
    /// independent of the breakpoint implementation.
    fn riemann_delta_df(counts: &[u64], plugin_mean: f64, i_end: f64, step: f64) -> f64 {
        let n = counts.len() as f64;
        let mut total = 0.0;
        let mut v = 0.0;
        while v < i_end {
            let edf = counts.iter().filter(|&&c| c as f64 <= v).count() as f64 / n;
            // naive factorial-series Poisson cdf
            let mut cdf = 0.0;
            let mut term = (-plugin_mean).exp();
            for k in 0..=(v.floor() as u64) {
                if k > 0 {
                    term *= plugin_mean / k as f64;
                }
                cdf += term;
            }
            let w = step.min(i_end - v);
            total += (edf - cdf).abs() * w;
            v += step;
        }
        total
    }

    #[test]
    fn delta_df_pinned_example() {
        // counts [1,0], plug-in mean 0.5, I = [0, 5.5]; value pinned by the
        // fine-grid Riemann oracle before the breakpoint sum was written
        let exact = delta_df(&[1, 0], 0.5, 5.5);
        assert_relative_eq!(exact, 0.213_053_168_765_561_8, max_relative = 1e-10);
        let oracle = riemann_delta_df(&[1, 0], 0.5, 5.5, 1e-4);
        assert!((exact - oracle).abs() < 1e-9);
    }

    #[test]
    fn delta_df_matches_the_riemann_oracle_on_random_counts() {
        let mut rng = crate::rng::seeded_rng(31);
        use rand::Rng;
        for _ in 0..100 {
            let k = rng.random_range(2..30);
            let counts: Vec<u64> = (0..k).map(|_| rng.random_range(0..7)).collect();
            let mean = counts.iter().sum::<u64>() as f64 / k as f64;
            let exact = delta_df(&counts, mean, 5.5);
            let oracle = riemann_delta_df(&counts, mean, 5.5, 1e-4);
            assert!(
                (exact - oracle).abs() < 1e-3,
                "breakpoint sum {exact} vs Riemann {oracle} for {counts:?}"
            );
        }
    }

    #[test]
    fn delta_statistics_vanish_on_the_degenerate_law() {
        assert_eq!(delta_df(&[0, 0, 0], 0.0, 5.5), 0.0);
        assert!(delta_lt(&[0, 0, 0], 0.0, 5.5).abs() < 1e-12);
    }

    #[test]
    fn delta_df_is_permutation_invariant() {
        let a = delta_df(&[3, 0, 1, 1, 0], 1.0, 5.5);
        let b = delta_df(&[0, 1, 3, 0, 1], 1.0, 5.5);
        assert_eq!(a, b);
    }

    #[test]
    fn delta_lt_agrees_with_a_trapezoid_oracle() {
        let counts = [1u64, 0, 2, 0, 0, 1];
        let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
        let fine = {
            let n = 55_000;
            let h = 5.5 / n as f64;
            let f = |v: f64| {
                let psi: f64 = counts.iter().map(|&c| (-v * c as f64).exp()).sum::<f64>()
                    / counts.len() as f64;
                let phi = poisson_laplace(mean, v).unwrap();
                (psi - phi).abs()
            };
            (0..n).map(|i| 0.5 * h * (f(i as f64 * h) + f((i + 1) as f64 * h))).sum::<f64>()
        };
        let fast = delta_lt(&counts, mean, 5.5);
        assert!((fast - fine).abs() < 1e-6, "simpson {fast} vs trapezoid {fine}");
    }

    #[test]
    fn calibration_is_deterministic_and_in_the_reported_range() {
        // a small replication count for speed; the full-size run is part of
        // the acceptance suite
        let key = CalibrationKey::example32(2000, 7);
        let a = calibrate_quantiles(&key).unwrap();
        let b = calibrate_quantiles(&key).unwrap();
        assert_eq!(a, b);
        assert!(a.c_df > 0.0 && a.c_lt > 0.0);
    }

    #[test]
    fn calibration_of_the_zero_intensity_law_is_zero() {
        let key = CalibrationKey { lambda_c: 0.0, ..CalibrationKey::example32(500, 3) };
        let cal = calibrate_quantiles(&key).unwrap();
        assert_eq!(cal.c_df, 0.0);
        assert!(cal.c_lt.abs() < 1e-12);
    }

    #[test]
    fn calibration_cache_round_trips() {
        let dir = std::env::temp_dir().join("spikering-cal-test");
        let path = dir.join("cal.json");
        let _ = std::fs::remove_file(&path);
        let key = CalibrationKey::example32(300, 11);
        let fresh = load_or_calibrate(&path, &key).unwrap();
        let cached = load_or_calibrate(&path, &key).unwrap();
        assert_eq!(fresh, cached);
        // a different key recalibrates rather than reusing the file
        let other_key = CalibrationKey { seed: 12, ..key };
        let other = load_or_calibrate(&path, &other_key).unwrap();
        assert_eq!(other.seed, 12);
    }

    #[test]
    fn quiet_test_on_an_empty_train() {
        let cfg = QuietConfig::new(250.0, 100, 0.075, 0.15);
        let t = train(vec![], 25_000.0);
        let v = classify_quiet(&t, &cfg).unwrap();
        assert_eq!(v.branch, QuietBranch::ExtremelyRare);
        assert_eq!(v.n_t1, 0);
        assert!(v.is_quiet());
    }

    #[test]
    fn quiet_test_rejects_a_dense_periodic_train() {
        // 25 spikes over T1 = 25000 violate the count bound of 19
        let cfg = QuietConfig::new(250.0, 100, 0.075, 0.15);
        let times: Vec<f64> = (1..=25).map(|k| k as f64 * 990.0).collect();
        let t = train(times, 25_000.0);
        let v = classify_quiet(&t, &cfg).unwrap();
        assert_eq!(v.quantile_bound, 19);
        assert!(!v.count_ok);
        assert_eq!(v.branch, QuietBranch::Fail);
    }

    #[test]
    fn quiet_verdict_is_recomputable_from_its_own_numbers() {
        let cfg = QuietConfig::new(250.0, 100, 0.075, 0.15);
        let times: Vec<f64> = (1..=6).map(|k| k as f64 * 3000.0).collect();
        let t = train(times, 25_000.0);
        let v = classify_quiet(&t, &cfg).unwrap();
        assert_eq!(v.count_ok, v.n_t1 <= v.quantile_bound);
        assert_eq!(v.df_ok, v.delta_df <= cfg.c_df);
        assert_eq!(v.lt_ok, v.delta_lt <= cfg.c_lt);
        assert_eq!(
            v.extremely_rare_ok,
            v.n_t1 <= 2 && v.lambda_tilde <= 0.0001
        );
    }

    #[test]
    fn quiet_horizon_too_short_is_an_error() {
        let cfg = QuietConfig::new(250.0, 100, 0.075, 0.15);
        let t = train(vec![1.0], 400.0);
        assert!(classify_quiet(&t, &cfg).is_err());
    }

    #[test]
    fn classifier_is_deterministic() {
        let cfg = QuietConfig::new(250.0, 100, 0.075, 0.15);
        let times: Vec<f64> = (1..=4).map(|k| k as f64 * 5000.0).collect();
        let t = train(times, 25_000.0);
        let a = classify_quiet(&t, &cfg).unwrap();
        let b = classify_quiet(&t, &cfg).unwrap();
        assert_eq!(a.delta_df.to_bits(), b.delta_df.to_bits());
        assert_eq!(a.delta_lt.to_bits(), b.delta_lt.to_bits());
        assert_eq!(a.branch, b.branch);
    }

    #[test]
    fn regular_test_passes_a_periodic_train() {
        let gap = 14.3;
        let times: Vec<f64> = (1..=34).map(|k| k as f64 * gap).collect();
        let t = train(times, 500.0);
        let v = classify_regular(&t, 500.0, Some(0.02));
        assert_eq!(v.n_t1, 34);
        assert_relative_eq!(v.median, gap, max_relative = 1e-12);
        assert_relative_eq!(v.coverage, 34.0 * gap / 500.0, max_relative = 1e-12);
        assert!(v.coverage_ok && v.count_ok);
        assert_eq!((v.r05, v.r10, v.r25), (0.0, 0.0, 0.0));
        assert!(v.pass);
        let b = v.benchmarks.unwrap();
        assert!((b.u1 - 3.01).abs() < 0.02);
    }

    #[test]
    fn regular_test_fails_sparse_or_degenerate_trains() {
        // too few spikes
        let times: Vec<f64> = (1..=10).map(|k| k as f64 * 14.3).collect();
        let v = classify_regular(&train(times, 500.0), 500.0, None);
        assert!(!v.count_ok && !v.pass);
        assert_eq!(v.n_t1, 10);
        // degenerate: one spike, no interspike sample
        let v = classify_regular(&train(vec![100.0], 500.0), 500.0, None);
        assert_eq!(v.n_t1, 1);
        assert!(v.median.is_nan());
        assert!(!v.pass);
    }

    #[test]
    fn regular_test_fails_clustered_spikes() {
        // quantiles far from the median: two interleaved gap lengths
        let mut times = Vec::new();
        let mut t = 1.0;
        for k in 0..30 {
            times.push(t);
            t += if k % 2 == 0 { 2.0 } else { 20.0 };
        }
        let v = classify_regular(&train(times, 500.0), 500.0, None);
        assert!(!v.pass);
        assert!(!v.r05_ok || !v.r10_ok || !v.r25_ok || !v.coverage_ok);
    }

    #[test]
    fn benchmark_values() {
        let b = output_benchmarks(14.4, 0.02).unwrap();
        assert_relative_eq!(b.u2, 3.996_189_110_007_662, max_relative = 1e-12);
        assert_relative_eq!(b.u1, 2.996_189_110_007_662, max_relative = 1e-12);
        assert_eq!(b.u2 - b.u1, 1.0);
        let b = output_benchmarks(14.3, 0.02).unwrap();
        assert!((b.u1 - 3.01).abs() < 0.02);
        assert!(output_benchmarks(0.0, 0.02).is_err());
    }
}
