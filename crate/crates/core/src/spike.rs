//! Spike times and spike trains.
//!
//! A spike begins when the `m` gating variable upcrosses the `h` variable.
//! The end of a spike is the first re-downcrossing of `m` under `h` after a
//! refractory floor `delta0`; only then may a new spike begin. On the grid
//! this is a two-phase state machine fed one `(m, h)` pair per step.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
enum Phase {
    /// `m` was last seen at or below `h`; the next upcrossing fires.
    Armed,
    /// A spike began at `spike_time`; waiting for `m < h` at some
    /// `t > spike_time + delta0` to re-arm.
    Refractory { spike_time: f64 },
}

/// Grid implementation of the stopping-time spike definition.
#[derive(Clone, Copy, Debug)]
pub struct SpikeDetector {
    delta0: f64,
    phase: Phase,
    prev_m: f64,
    prev_h: f64,
}

impl SpikeDetector {
    /// A detector starting at state `(m0, h0)` at time zero. If the system
    /// starts with `m0 > h0` it is treated as mid-spike: nothing is counted
    /// until that excursion ends.
    pub fn new(delta0: f64, m0: f64, h0: f64) -> Self {
        let phase = if m0 > h0 {
            Phase::Refractory { spike_time: 0.0 }
        } else {
            Phase::Armed
        };
        SpikeDetector { delta0, phase, prev_m: m0, prev_h: h0 }
    }

    /// Feeds the gating pair at grid time `t` and returns the spike time if
    /// a spike begins at this step.
    #[inline]
    pub fn observe(&mut self, m: f64, h: f64, t: f64) -> Option<f64> {
        let fired = match self.phase {
            Phase::Armed => {
                if self.prev_m <= self.prev_h && m > h {
                    self.phase = Phase::Refractory { spike_time: t };
                    Some(t)
                } else {
                    None
                }
            }
            Phase::Refractory { spike_time } => {
                if t > spike_time + self.delta0 && m < h {
                    self.phase = Phase::Armed;
                }
                None
            }
        };
        self.prev_m = m;
        self.prev_h = h;
        fired
    }
}

/// Strictly increasing spike times on `(0, horizon]`, with all interspike
/// gaps above the refractory floor.
#[derive(Clone, Debug, PartialEq)]
pub struct SpikeTrain {
    times: Vec<f64>,
    horizon: f64,
    delta0: f64,
}

impl SpikeTrain {
    pub fn new(times: Vec<f64>, horizon: f64, delta0: f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
        }
        for (i, &t) in times.iter().enumerate() {
            if !(t > 0.0 && t <= horizon) {
                return Err(Error::InvalidInput(format!(
                    "spike time {t} outside (0, {horizon}]"
                )));
            }
            if i > 0 && !(t - times[i - 1] > delta0) {
                return Err(Error::InvalidInput(format!(
                    "interspike gap {} at index {i} not above delta0 = {delta0}",
                    t - times[i - 1]
                )));
            }
        }
        Ok(SpikeTrain { times, horizon, delta0 })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// `N_t`: number of spikes in `(0, t]`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feed(det: &mut SpikeDetector, samples: &[(f64, f64, f64)]) -> Vec<f64> {
        let mut out = Vec::new();
        for &(t, m, h) in samples {
            if let Some(tau) = det.observe(m, h, t) {
                out.push(tau);
            }
        }
        out
    }

    #[test]
    fn no_crossing_means_no_spikes() {
        let mut det = SpikeDetector::new(1.0, 0.1, 0.5);
        let samples: Vec<_> = (1..200).map(|k| (k as f64 * 0.1, 0.1, 0.5)).collect();
        assert!(feed(&mut det, &samples).is_empty());
    }

    #[test]
    fn square_pulse_fires_twice() {
        // m-h crosses up at t=5, down at t=9, up again at t=12, delta0 = 1
        let mut det = SpikeDetector::new(1.0, 0.0, 0.5);
        let mut samples = Vec::new();
        let mut t = 0.5;
        while t < 15.0 {
            let above = (t >= 5.0 && t < 9.0) || t >= 12.0;
            let m = if above { 0.9 } else { 0.0 };
            samples.push((t, m, 0.5));
            t += 0.5;
        }
        assert_eq!(feed(&mut det, &samples), vec![5.0, 12.0]);
    }

    #[test]
    fn early_downcrossing_does_not_rearm() {
        // spike at t=1; m dips below h at t=1.5 (inside the refractory
        // window) and returns above at t=1.7 without a new spike; the dip
        // after t = 2 re-arms and the next upcrossing fires.
        let mut det = SpikeDetector::new(1.0, 0.0, 0.5);
        let seq = [
            (1.0, 0.9, 0.5),
            (1.5, 0.1, 0.5),
            (1.7, 0.9, 0.5),
            (2.5, 0.1, 0.5),
            (3.0, 0.9, 0.5),
        ];
        assert_eq!(feed(&mut det, &seq), vec![1.0, 3.0]);
    }

    #[test]
    fn starting_mid_spike_is_not_counted() {
        let mut det = SpikeDetector::new(1.0, 0.9, 0.5);
        let seq = [
            (0.5, 0.9, 0.5),
            (1.5, 0.1, 0.5), // end of the initial excursion, re-arms
            (2.0, 0.9, 0.5), // first counted spike
        ];
        assert_eq!(feed(&mut det, &seq), vec![2.0]);
    }

    #[test]
    fn train_validation() {
        assert!(SpikeTrain::new(vec![1.0, 3.0], 10.0, 1.0).is_ok());
        // gap not above delta0
        assert!(SpikeTrain::new(vec![1.0, 2.0], 10.0, 1.0).is_err());
        // outside (0, horizon]
        assert!(SpikeTrain::new(vec![0.0], 10.0, 1.0).is_err());
        assert!(SpikeTrain::new(vec![11.0], 10.0, 1.0).is_err());
        // decreasing
        assert!(SpikeTrain::new(vec![3.0, 1.0], 10.0, 1.0).is_err());
    }

    #[test]
    fn counting_is_left_open_right_closed() {
        let train = SpikeTrain::new(vec![1.0, 3.0, 7.0], 10.0, 1.0).unwrap();
        assert_eq!(train.count_up_to(0.5), 0);
        assert_eq!(train.count_up_to(1.0), 1);
        assert_eq!(train.count_up_to(3.0), 2);
        assert_eq!(train.count_up_to(10.0), 3);
    }
}
