//! Empirical statistics of spike trains: distribution functions with the
//! inf-quantile convention, segment counts, empirical Laplace transforms,
//! interspike tuple statistics, and the truncated output-pair
//! approximations with their geometric error bound.

use crate::error::{Error, Result};
use crate::output::output_path;
use crate::spike::SpikeTrain;

/// Empirical distribution function of a real sample;
/// `F(v) = #{x_i <= v} / n`.
#[derive(Clone, Debug)]
pub struct EmpiricalDf {
    sorted: Vec<f64>,
}

impl EmpiricalDf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::Domain("empty sample".into()));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("sample contains a non-finite value".into()));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalDf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= v) as f64 / self.sorted.len() as f64
    }

    /// Left limit `F(v-) = #{x_i < v} / n`.
    pub fn eval_left(&self, v: f64) -> f64 {
        self.sorted.partition_point(|&x| x < v) as f64 / self.sorted.len() as f64
    }

    /// The inf-quantile `inf { v : F(v) >= alpha }` — the smallest sample
    /// point at which the empirical mass reaches `alpha`. No interpolation.
    pub fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidInput(format!("alpha must lie in (0,1), got {alpha}")));
        }
        let n = self.sorted.len();
        // smallest k in 1..=n with k/n >= alpha
        let mut lo = 1usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if mid as f64 / n as f64 >= alpha {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(self.sorted[lo - 1])
    }

    /// Largest |F - G| over the union of jump points (and their left
    /// limits) of the two step functions.
    pub fn sup_distance(&self, other: &EmpiricalDf) -> f64 {
        let mut sup = 0.0f64;
        for x in self.sorted.iter().chain(&other.sorted) {
            sup = sup
                .max((self.eval(*x) - other.eval(*x)).abs())
                .max((self.eval_left(*x) - other.eval_left(*x)).abs());
        }
        sup
    }
}

/// Interspike intervals `tau_{j+1} - tau_j`; empty for trains with at most
/// one spike.
pub fn interspike_intervals(train: &SpikeTrain) -> Vec<f64> {
    train.times().windows(2).map(|w| w[1] - w[0]).collect()
}

/// Median of a sample under the inf-quantile convention.
pub fn median(sample: &[f64]) -> Result<f64> {
    EmpiricalDf::new(sample)?.quantile(0.5)
}

/// The ratio `r(alpha) = d(alpha) / median` where `d(alpha)` is the
/// distance between the upper and lower `alpha`-quantiles.
pub fn quantile_ratio(isis: &[f64], alpha: f64) -> Result<f64> {
    if isis.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 interspike intervals, got {}",
            isis.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 0.5), got {alpha}")));
    }
    let df = EmpiricalDf::new(isis)?;
    let med = df.quantile(0.5)?;
    if med <= 0.0 {
        return Err(Error::Domain("median of the interspike sample is zero".into()));
    }
    let d = df.quantile(1.0 - alpha)? - df.quantile(alpha)?;
    Ok(d / med)
}

/// Spike counts on the segments `((k-1) T0, k T0]`, `k = 1..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentCounts {
    pub counts: Vec<u64>,
    pub t0: f64,
}

impl SegmentCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.total() as f64 / self.counts.len() as f64
    }
}

pub fn segment_counts(train: &SpikeTrain, t0: f64, k: usize) -> Result<SegmentCounts> {
    if !(t0 > 0.0) || k == 0 {
        return Err(Error::InvalidInput(format!("need t0 > 0 and K >= 1, got t0 = {t0}, K = {k}")));
    }
    let span = k as f64 * t0;
    if span > train.horizon() * (1.0 + 1e-9) {
        return Err(Error::Domain(format!(
            "K*T0 = {span} exceeds the train horizon {}",
            train.horizon()
        )));
    }
    let counts = (1..=k)
        .map(|j| {
            (train.count_up_to(j as f64 * t0) - train.count_up_to((j - 1) as f64 * t0)) as u64
        })
        .collect();
    Ok(SegmentCounts { counts, t0 })
}

/// Empirical Laplace transform of a count sample at `v >= 0`:
/// `(1/n) sum_k e^{-v xi_k}`.
pub fn empirical_laplace(sample: &[u64], v: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Domain("empty sample".into()));
    }
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!("v must be >= 0, got {v}")));
    }
    let sum: f64 = sample.iter().map(|&x| (-v * x as f64).exp()).sum();
    Ok(sum / sample.len() as f64)
}

/// `N_t / t`.
pub fn spike_rate(train: &SpikeTrain, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    Ok(train.count_up_to(t) as f64 / t)
}

/// Empirical distribution of sliding L-tuples of successive interspike
/// intervals, with box queries and weighted pattern frequencies.
#[derive(Clone, Debug)]
pub struct TupleEdf {
    dim: usize,
    isis: Vec<f64>,
}

impl TupleEdf {
    pub fn new(isis: &[f64], dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("tuple dimension must be positive".into()));
        }
        if isis.len() < dim {
            return Err(Error::Domain(format!(
                "need at least {dim} interspike intervals for {dim}-tuples, got {}",
                isis.len()
            )));
        }
        Ok(TupleEdf { dim, isis: isis.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of tuples `m = #isis - L + 1`.
    pub fn len(&self) -> usize {
        self.isis.len() - self.dim + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[f64]> {
        self.isis.windows(self.dim)
    }

    /// Fraction of tuples componentwise `<= v`.
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.pattern_frequency(v, |_| 1.0)
    }

    /// `(1/m) sum_n 1_{[0,v]}(tuple_n) h(tuple_n)` for a bounded functional
    /// `h` with `|h| <= 1`.
    pub fn pattern_frequency<H: Fn(&[f64]) -> f64>(&self, v: &[f64], h: H) -> f64 {
        assert_eq!(v.len(), self.dim, "query dimension mismatch");
        let mut sum = 0.0;
        for tuple in self.isis.windows(self.dim) {
            if tuple.iter().zip(v).all(|(x, b)| x <= b) {
                let w = h(tuple);
                assert!(w.abs() <= 1.0 + 1e-12, "pattern functional must satisfy |h| <= 1");
                sum += w;
            }
        }
        sum / self.len() as f64
    }
}

/// Fraction of pairs with both coordinates at most `q`.
pub fn edf2(pairs: &[(f64, f64)], q: (f64, f64)) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    pairs.iter().filter(|(a, b)| *a <= q.0 && *b <= q.1).count() as f64 / pairs.len() as f64
}

/// Truncated output-pair approximations over a window of `L` interspike
/// gaps, together with the exact pairs and the geometric tail bound on
/// their distance.
#[derive(Clone, Debug)]
pub struct OutputPairs {
    /// `(V_n, V_{n+1}^-)`: truncated sums over the last `L+1` spikes.
    pub approx: Vec<(f64, f64)>,
    /// Exact pairs `(U at spike n+L, U just before spike n+L+1)` with
    /// `U_0 = 0`.
    pub exact: Vec<(f64, f64)>,
    /// Largest observed distance between exact and truncated values.
    pub sup_gap: f64,
    /// `sum_{l > L} e^{-c1 delta0 l}`, the uniform bound on the gap.
    pub tail_bound: f64,
}

/// Geometric tail `sum_{l > window} e^{-c1 delta0 l}`.
pub fn output_pair_tail_bound(c1: f64, delta0: f64, window: usize) -> f64 {
    let r = (-c1 * delta0).exp();
    r.powi(window as i32 + 1) / (1.0 - r)
}

/// The approximating pairs of the output process: for each start `n`,
/// `V_n = sum_{j=n}^{n+L} e^{-c1 (tau_{n+L} - tau_j)}` and
/// `V_{n+1}^- = V_n e^{-c1 (tau_{n+L+1} - tau_{n+L})}`.
pub fn output_pair_approximations(
    train: &SpikeTrain,
    c1: f64,
    window: usize,
) -> Result<OutputPairs> {
    if window == 0 {
        return Err(Error::InvalidInput("window L must be positive".into()));
    }
    let times = train.times();
    if times.len() < window + 2 {
        return Err(Error::Domain(format!(
            "need at least L+2 = {} spikes, got {}",
            window + 2,
            times.len()
        )));
    }
    let path = output_path(train, c1, 0.0)?;
    let mut approx = Vec::new();
    let mut exact = Vec::new();
    let mut sup_gap = 0.0f64;
    for n in 0..times.len() - window - 1 {
        let anchor = times[n + window];
        let v: f64 = (0..=window).map(|i| (-c1 * (anchor - times[n + i])).exp()).sum();
        let v_minus = v * (-c1 * (times[n + window + 1] - anchor)).exp();
        let u = path.post_jump()[n + window];
        let u_minus = path.pre_jump()[n + window + 1];
        sup_gap = sup_gap.max((u - v).abs()).max((u_minus - v_minus).abs());
        approx.push((v, v_minus));
        exact.push((u, u_minus));
    }
    Ok(OutputPairs {
        approx,
        exact,
        sup_gap,
        tail_bound: output_pair_tail_bound(c1, train.delta0(), window),
    })
}

/// The `(J+1)`-tuple extension: for each start `n`, the pairs at offsets
/// `j = 0..=J` of the same truncated construction.
pub fn output_pair_tuples(
    train: &SpikeTrain,
    c1: f64,
    window: usize,
    j_max: usize,
) -> Result<Vec<Vec<(f64, f64)>>> {
    let base = output_pair_approximations(train, c1, window)?;
    let m = base.approx.len();
    if m < j_max + 1 {
        return Err(Error::Domain(format!(
            "need at least {} approximating pairs for J = {j_max}, got {m}",
            j_max + 1
        )));
    }
    Ok((0..m - j_max)
        .map(|n| (0..=j_max).map(|j| base.approx[n + j]).collect())
        .collect())
}
