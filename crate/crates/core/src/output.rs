//! The output process `U`: unit jumps at spike times, exponential decay of
//! rate `c1` in between.
//!
//! `U` solves the linear jump ODE `dU = -c1 U dt + dN`, so between spikes it
//! is computed in closed form rather than by an Euler scheme; values at the
//! spike times and just before them are exact up to rounding.

use crate::error::{Error, Result};
use crate::spike::SpikeTrain;

/// Exact path of the output process over one spike train.
#[derive(Clone, Debug)]
pub struct OutputPath {
    c1: f64,
    u0: f64,
    times: Vec<f64>,
    pre: Vec<f64>,
    post: Vec<f64>,
}

/// Builds the output path for `train` with decay `c1` and initial value `u0`.
pub fn output_path(train: &SpikeTrain, c1: f64, u0: f64) -> Result<OutputPath> {
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(Error::InvalidInput(format!("c1 must be positive, got {c1}")));
    }
    if !(u0 >= 0.0 && u0.is_finite()) {
        return Err(Error::InvalidInput(format!("u0 must be nonnegative, got {u0}")));
    }
    let times = train.times().to_vec();
    let mut pre = Vec::with_capacity(times.len());
    let mut post = Vec::with_capacity(times.len());
    let mut last_t = 0.0;
    let mut last_u = u0;
    for &t in &times {
        let before = last_u * (-c1 * (t - last_t)).exp();
        pre.push(before);
        let after = before + 1.0;
        post.push(after);
        last_t = t;
        last_u = after;
    }
    Ok(OutputPath { c1, u0, times, pre, post })
}

impl OutputPath {
    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn spike_times(&self) -> &[f64] {
        &self.times
    }

    /// `U` at each spike time (just after the jump).
    pub fn post_jump(&self) -> &[f64] {
        &self.post
    }

    /// `U` just before each spike time.
    pub fn pre_jump(&self) -> &[f64] {
        &self.pre
    }

    /// `U(t)`, decaying in closed form from the last jump at or before `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        match self.times.partition_point(|&s| s <= t) {
            0 => self.u0 * (-self.c1 * t).exp(),
            k => self.post[k - 1] * (-self.c1 * (t - self.times[k - 1])).exp(),
        }
    }

    /// `U` sampled on the grid `0, dt, 2 dt, ..., <= t_end`.
    pub fn sample_grid(&self, dt: f64, t_end: f64) -> Vec<(f64, f64)> {
        let n = (t_end / dt).floor() as u64;
        (0..=n)
            .map(|k| {
                let t = k as f64 * dt;
                (t, self.value_at(t))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn train(times: Vec<f64>, horizon: f64) -> SpikeTrain {
        SpikeTrain::new(times, horizon, 1.0).unwrap()
    }

    #[test]
    fn empty_train_stays_at_zero() {
        let path = output_path(&train(vec![], 100.0), 0.02, 0.0).unwrap();
        assert!(path.post_jump().is_empty());
        for k in 0..100 {
            assert_eq!(path.value_at(k as f64), 0.0);
        }
    }

    #[test]
    fn single_spike_decays_from_one() {
        let path = output_path(&train(vec![1.0], 10.0), 0.02, 0.0).unwrap();
        assert_eq!(path.pre_jump(), &[0.0]);
        assert_eq!(path.post_jump(), &[1.0]);
        assert_relative_eq!(path.value_at(2.0), (-0.02f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn equally_spaced_spikes_approach_the_benchmarks() {
        // gap 14.4 at c1 = 0.02: post-jump values tend to 3.99619,
        // pre-jump to 2.99619 (geometric series)
        let gap = 14.4;
        let times: Vec<f64> = (1..=200).map(|k| k as f64 * gap).collect();
        let path = output_path(&train(times, 3000.0), 0.02, 0.0).unwrap();
        let last_post = *path.post_jump().last().unwrap();
        let last_pre = *path.pre_jump().last().unwrap();
        assert_relative_eq!(last_post, 3.996_189_110_007_662, epsilon = 1e-9);
        assert_relative_eq!(last_pre, 2.996_189_110_007_662, epsilon = 1e-9);
    }

    #[test]
    fn jump_identity_is_exact() {
        let times: Vec<f64> = (1..=50).map(|k| 1.3 * k as f64 + 0.1 * (k % 3) as f64).collect();
        let path = output_path(&SpikeTrain::new(times, 100.0, 1.0).unwrap(), 0.05, 0.7).unwrap();
        for (pre, post) in path.pre_jump().iter().zip(path.post_jump()) {
            assert!(((post - pre) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn post_jump_values_respect_the_geometric_bound() {
        // with u0 = 0 every local maximum is below sum_j e^{-c1 j delta0}
        let c1 = 0.02;
        let delta0 = 1.0;
        let bound = 1.0 / (1.0 - (-c1 * delta0).exp());
        let times: Vec<f64> = (1..=900).map(|k| k as f64 * 1.0001).collect();
        let path = output_path(&SpikeTrain::new(times, 1000.0, delta0).unwrap(), c1, 0.0).unwrap();
        for &u in path.post_jump() {
            assert!(u < bound, "post-jump output {u} above geometric bound {bound}");
        }
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        let t = train(vec![1.0], 10.0);
        assert!(output_path(&t, 0.0, 0.0).is_err());
        assert!(output_path(&t, 0.02, -1.0).is_err());
    }
}
