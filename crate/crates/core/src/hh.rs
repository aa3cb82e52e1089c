//! Deterministic Hodgkin-Huxley dynamics with constant signal.
//!
//! The system is the classical 4-dimensional model
//!
//! ```text
//! dV = a dt - F(V,n,m,h) dt
//! dj = [alpha_j(V)(1-j) - beta_j(V) j] dt ,  j in {n,m,h}
//! ```
//!
//! with the Izhikevich constants. This module provides the rate functions
//! (stable through their removable singularities), the ionic current `F`,
//! steady-state gating, equilibrium solving by inverting the monotone map
//! `F_inf`, explicit Euler integration, and attractor classification for
//! bistability scans over the signal.

use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::spike::{SpikeDetector, SpikeTrain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Simulation box for the membrane potential; random starts are drawn from
/// `(V_MIN, V_MAX) x (0,1)^3` and equilibria are bracketed on `[V_MIN, V_MAX]`.
pub const V_MIN: f64 = -12.0;
pub const V_MAX: f64 = 120.0;

/// Gating variables of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    N,
    M,
    H,
}

/// Opening and closing rates of one gate at a fixed membrane potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateRates {
    pub alpha: f64,
    pub beta: f64,
}

/// The biological variables `(V, n, m, h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BioState {
    pub v: f64,
    pub n: f64,
    pub m: f64,
    pub h: f64,
}

impl BioState {
    pub fn new(v: f64, n: f64, m: f64, h: f64) -> Self {
        BioState { v, n, m, h }
    }

    pub fn is_finite(&self) -> bool {
        (self.v + self.n + self.m + self.h).is_finite()
    }

    /// Largest componentwise distance to `other`.
    pub fn sup_distance(&self, other: &BioState) -> f64 {
        (self.v - other.v)
            .abs()
            .max((self.n - other.n).abs())
            .max((self.m - other.m).abs())
            .max((self.h - other.h).abs())
    }
}

pub(crate) struct AllRates {
    pub n: GateRates,
    pub m: GateRates,
    pub h: GateRates,
}

const EXP_NEG_1_5: f64 = 0.223_130_160_148_429_83; // e^{-1.5}
const EXP_POS_0_5: f64 = 1.648_721_270_700_128_2; // e^{0.5}

/// `x / (e^x - 1)` given `ex = e^x`, evaluated through the removable
/// singularity at `x = 0` by a 4-term Bernoulli expansion when `|x| < 1e-4`.
#[inline]
fn singular_ratio(x: f64, ex: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x / 2.0 + x2 / 12.0 - x2 * x2 / 720.0
    } else {
        x / (ex - 1.0)
    }
}

/// All six rates at once. The three singular-family exponentials share one
/// `exp` call via `e^{1-0.1v} = e^{2.5-0.1v} e^{-1.5}` and
/// `e^{3-0.1v} = e^{2.5-0.1v} e^{0.5}`.
#[inline]
pub(crate) fn all_rates(v: f64) -> AllRates {
    let xm = 2.5 - 0.1 * v;
    let xn = 1.0 - 0.1 * v;
    let em = xm.exp();
    let alpha_n = 0.1 * singular_ratio(xn, em * EXP_NEG_1_5);
    let beta_n = 0.125 * (-v / 80.0).exp();
    let alpha_m = singular_ratio(xm, em);
    let beta_m = 4.0 * (-v / 18.0).exp();
    let alpha_h = 0.07 * (-v / 20.0).exp();
    let beta_h = 1.0 / (em * EXP_POS_0_5 + 1.0);
    AllRates {
        n: GateRates { alpha: alpha_n, beta: beta_n },
        m: GateRates { alpha: alpha_m, beta: beta_m },
        h: GateRates { alpha: alpha_h, beta: beta_h },
    }
}

/// Rates of one gate at membrane potential `v`.
///
/// At the removable singularities (`alpha_n` at `v = 10`, `alpha_m` at
/// `v = 25`) the analytic limit is returned.
pub fn gate_rates(gate: Gate, v: f64) -> Result<GateRates> {
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("membrane potential must be finite, got {v}")));
    }
    let r = all_rates(v);
    Ok(match gate {
        Gate::N => r.n,
        Gate::M => r.m,
        Gate::H => r.h,
    })
}

/// The ionic current
/// `F(v,n,m,h) = 36 n^4 (v+12) + 120 m^3 h (v-120) + 0.3 (v-10.6)`.
#[inline]
pub fn ionic_current(s: &BioState) -> f64 {
    let n2 = s.n * s.n;
    36.0 * n2 * n2 * (s.v + 12.0)
        + 120.0 * s.m * s.m * s.m * s.h * (s.v - 120.0)
        + 0.3 * (s.v - 10.6)
}

/// Steady-state gating `(n_inf, m_inf, h_inf)` at membrane potential `v`,
/// each component `alpha / (alpha + beta)`.
pub fn gating_steady_state(v: f64) -> Result<(f64, f64, f64)> {
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("membrane potential must be finite, got {v}")));
    }
    let r = all_rates(v);
    Ok((
        r.n.alpha / (r.n.alpha + r.n.beta),
        r.m.alpha / (r.m.alpha + r.m.beta),
        r.h.alpha / (r.h.alpha + r.h.beta),
    ))
}

/// `F_inf(v) = F(v, n_inf(v), m_inf(v), h_inf(v))`, strictly increasing on
/// the simulation box.
pub fn f_infinity(v: f64) -> f64 {
    let r = all_rates(v);
    let s = BioState {
        v,
        n: r.n.alpha / (r.n.alpha + r.n.beta),
        m: r.m.alpha / (r.m.alpha + r.m.beta),
        h: r.h.alpha / (r.h.alpha + r.h.beta),
    };
    ionic_current(&s)
}

/// The unique rest point of the system with signal `a`.
#[derive(Clone, Copy, Debug)]
pub struct EquilibriumPoint {
    pub v: f64,
    pub n: f64,
    pub m: f64,
    pub h: f64,
    /// The signal this point was solved for.
    pub signal: f64,
}

impl EquilibriumPoint {
    pub fn bio(&self) -> BioState {
        BioState { v: self.v, n: self.n, m: self.m, h: self.h }
    }
}

const EQUILIBRIUM_RESIDUAL: f64 = 1e-10;

/// Solves `F_inf(v) = a` by bisection on `[V_MIN, V_MAX]` to residual
/// `1e-10` and fills in the steady-state gating.
pub fn equilibrium_point(a: f64) -> Result<EquilibriumPoint> {
    if !a.is_finite() {
        return Err(Error::InvalidInput(format!("signal must be finite, got {a}")));
    }
    let (mut lo, mut hi) = (V_MIN, V_MAX);
    if !(f_infinity(lo) <= a && a <= f_infinity(hi)) {
        return Err(Error::Domain(format!(
            "F_inf endpoints on [{V_MIN}, {V_MAX}] do not straddle a = {a}"
        )));
    }
    let mut v = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = f_infinity(v);
        if (f - a).abs() <= EQUILIBRIUM_RESIDUAL {
            break;
        }
        if f < a {
            lo = v;
        } else {
            hi = v;
        }
        let next = 0.5 * (lo + hi);
        if next == v {
            break;
        }
        v = next;
    }
    if (f_infinity(v) - a).abs() > EQUILIBRIUM_RESIDUAL {
        return Err(Error::Domain(format!("bisection failed to reach residual at a = {a}")));
    }
    let (n, m, h) = gating_steady_state(v)?;
    Ok(EquilibriumPoint { v, n, m, h, signal: a })
}

/// Right-hand side of the deterministic system at state `s` with signal `a`,
/// in the order `(dV, dn, dm, dh)`.
pub fn vector_field(s: &BioState, a: f64) -> [f64; 4] {
    let r = all_rates(s.v);
    [
        a - ionic_current(s),
        r.n.alpha * (1.0 - s.n) - r.n.beta * s.n,
        r.m.alpha * (1.0 - s.m) - r.m.beta * s.m,
        r.h.alpha * (1.0 - s.h) - r.h.beta * s.h,
    ]
}

#[inline]
fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// One explicit Euler step of the biological variables. The caller supplies
/// the full external voltage increment (`a*dt` for the deterministic system,
/// `theta*dt + dX` for the stochastic one), so both integrators share this
/// step bit for bit. Gating is clamped to `[0,1]`: the exact flow preserves
/// the cube but an Euler step can overshoot.
#[inline]
pub(crate) fn bio_euler_step(s: &BioState, dv_external: f64, dt: f64) -> BioState {
    let r = all_rates(s.v);
    BioState {
        v: s.v + dv_external - ionic_current(s) * dt,
        n: clamp01(s.n + (r.n.alpha * (1.0 - s.n) - r.n.beta * s.n) * dt),
        m: clamp01(s.m + (r.m.alpha * (1.0 - s.m) - r.m.beta * s.m) * dt),
        h: clamp01(s.h + (r.h.alpha * (1.0 - s.h) - r.h.beta * s.h) * dt),
    }
}

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt <= 0.01) {
        return Err(Error::InvalidInput(format!("dt must lie in (0, 0.01], got {dt}")));
    }
    Ok(())
}

/// Summary of one deterministic integration.
#[derive(Clone, Debug)]
pub struct DetRun {
    pub final_state: BioState,
    pub train: SpikeTrain,
}

/// Integrates the deterministic system from `s0` under signal `a` up to
/// `t_end` with explicit Euler steps `dt`, detecting spikes with the same
/// `m`/`h`-crossing state machine as the stochastic integrator.
pub fn integrate_deterministic(
    s0: &BioState,
    a: f64,
    dt: f64,
    t_end: f64,
    delta0: f64,
) -> Result<DetRun> {
    check_dt(dt)?;
    if !(t_end > 0.0) {
        return Err(Error::InvalidInput(format!("t_end must be positive, got {t_end}")));
    }
    let steps = (t_end / dt).round() as u64;
    let mut s = *s0;
    let mut det = SpikeDetector::new(delta0, s.m, s.h);
    let mut times = Vec::new();
    for k in 1..=steps {
        s = bio_euler_step(&s, a * dt, dt);
        if !s.is_finite() {
            return Err(Error::Blowup { step: k, t: k as f64 * dt });
        }
        let t = k as f64 * dt;
        if let Some(tau) = det.observe(s.m, s.h, t) {
            times.push(tau);
        }
    }
    let horizon = steps as f64 * dt;
    Ok(DetRun { final_state: s, train: SpikeTrain::new(times, horizon, delta0)? })
}

/// Long-run behaviour of a deterministic trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttractorKind {
    Equilibrium,
    Orbit,
}

#[derive(Clone, Copy, Debug)]
pub struct AttractorVerdict {
    pub kind: AttractorKind,
    /// Spikes observed in the tail window (counting stops at the orbit
    /// threshold when early stopping is on).
    pub spike_count_tail: u64,
    /// Sup-norm distance of the last state to the equilibrium point.
    pub distance_to_equilibrium: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct AttractorOptions {
    pub dt: f64,
    /// Transient discarded before counting, in time units.
    pub burn_in: f64,
    /// Length of the counting window, in time units.
    pub tail: f64,
    /// Tail spike count at or above which the verdict is `Orbit`.
    pub spike_threshold: u64,
    pub delta0: f64,
    /// Stop as soon as the verdict is decided (orbit threshold reached, or
    /// the state is within `1e-6` of the equilibrium and cannot leave).
    pub early_stop: bool,
}

impl Default for AttractorOptions {
    fn default() -> Self {
        AttractorOptions {
            dt: 1e-3,
            burn_in: 1000.0,
            tail: 1000.0,
            spike_threshold: 3,
            delta0: 1.0,
            early_stop: true,
        }
    }
}

const EQ_SNAP: f64 = 1e-6;
const EQ_CHECK_EVERY: u64 = 1000;

/// Integrates from a uniform random start on `(V_MIN,V_MAX) x (0,1)^3` and
/// classifies the trajectory as orbit-attracted or equilibrium-attracted.
pub fn classify_attractor(a: f64, seed: u64, opts: &AttractorOptions) -> Result<AttractorVerdict> {
    check_dt(opts.dt)?;
    let eq = equilibrium_point(a)?;
    let eq_bio = eq.bio();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = BioState {
        v: rng.random_range(V_MIN..V_MAX),
        n: rng.random_range(0.0..1.0),
        m: rng.random_range(0.0..1.0),
        h: rng.random_range(0.0..1.0),
    };
    let dt = opts.dt;
    let n_burn = (opts.burn_in / dt).round() as u64;
    let n_total = n_burn + (opts.tail / dt).round() as u64;
    let mut det = SpikeDetector::new(opts.delta0, s.m, s.h);
    let mut tail_spikes = 0u64;
    for k in 1..=n_total {
        s = bio_euler_step(&s, a * dt, dt);
        if !s.is_finite() {
            return Err(Error::Blowup { step: k, t: k as f64 * dt });
        }
        if det.observe(s.m, s.h, k as f64 * dt).is_some() && k > n_burn {
            tail_spikes += 1;
            if opts.early_stop && tail_spikes >= opts.spike_threshold {
                return Ok(AttractorVerdict {
                    kind: AttractorKind::Orbit,
                    spike_count_tail: tail_spikes,
                    distance_to_equilibrium: s.sup_distance(&eq_bio),
                });
            }
        }
        if opts.early_stop && k % EQ_CHECK_EVERY == 0 && tail_spikes < opts.spike_threshold {
            let d = s.sup_distance(&eq_bio);
            if d < EQ_SNAP {
                return Ok(AttractorVerdict {
                    kind: AttractorKind::Equilibrium,
                    spike_count_tail: tail_spikes,
                    distance_to_equilibrium: d,
                });
            }
        }
    }
    let d = s.sup_distance(&eq_bio);
    Ok(AttractorVerdict {
        kind: if tail_spikes >= opts.spike_threshold {
            AttractorKind::Orbit
        } else {
            AttractorKind::Equilibrium
        },
        spike_count_tail: tail_spikes,
        distance_to_equilibrium: d,
    })
}

/// Fraction of random starts attracted to the orbit, for each signal in
/// `a_grid`. Each (signal, trial) pair runs on its own derived stream, so
/// the result is reproducible and independent of scheduling.
pub fn bistability_scan(
    a_grid: &[f64],
    n_trials: u32,
    master_seed: u64,
    opts: &AttractorOptions,
) -> Result<Vec<f64>> {
    if n_trials < 10 {
        return Err(Error::InvalidInput(format!("need at least 10 trials, got {n_trials}")));
    }
    a_grid
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let orbits = (0..n_trials)
                .into_par_iter()
                .map(|trial| {
                    let seed =
                        derive_seed(master_seed, ((i as u64) << 32) | trial as u64);
                    classify_attractor(a, seed, opts)
                        .map(|v| (v.kind == AttractorKind::Orbit) as u32)
                })
                .try_reduce(|| 0u32, |x, y| Ok(x + y))?;
            Ok(orbits as f64 / n_trials as f64)
        })
        .collect()
}
