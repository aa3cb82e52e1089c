//! The stochastic Hodgkin-Huxley neuron: the 5-dimensional process
//! `(V, n, m, h, X)` where the accumulated input `Y_t = theta t + X_t`
//! drives the voltage and `X` is an Ornstein-Uhlenbeck process.

use crate::error::{Error, Result};
use crate::hh::{bio_euler_step, check_dt, BioState, V_MAX, V_MIN};
use crate::rng::seeded_rng;
use crate::spike::{SpikeDetector, SpikeTrain};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Parameters of the input process: signal `theta`, back-driving force
/// `tau`, and volatility `sigma` of the Ornstein-Uhlenbeck noise.
///
/// Inside a circuit the constant signal is replaced step by step by the
/// transmission value `A_t` of the predecessor neuron; `tau` and `sigma`
/// keep their role unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub theta: f64,
    pub tau: f64,
    pub sigma: f64,
}

impl NoiseParams {
    pub fn new(theta: f64, tau: f64, sigma: f64) -> Self {
        NoiseParams { theta, tau, sigma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidInput(format!("theta must be positive, got {}", self.theta)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidInput(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidInput(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }

    /// Standard deviation `sigma/sqrt(2 tau)` of the invariant law of `X`.
    pub fn stationary_sd(&self) -> f64 {
        (self.sigma * self.sigma / (2.0 * self.tau)).sqrt()
    }
}

/// The full Markov state `(V, n, m, h, X)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullState {
    pub bio: BioState,
    pub x: f64,
}

impl FullState {
    pub fn is_finite(&self) -> bool {
        self.bio.is_finite() && self.x.is_finite()
    }
}

/// One Euler-Maruyama step of the Ornstein-Uhlenbeck coordinate:
/// `x' = x - tau x dt + sigma sqrt(dt) g` with `g` standard normal.
#[inline]
pub fn ou_step(x: f64, p: &NoiseParams, dt: f64, gaussian: f64) -> f64 {
    x - p.tau * x * dt + p.sigma * dt.sqrt() * gaussian
}

/// Exact one-step transition of the Ornstein-Uhlenbeck coordinate
/// (`decay`, `noise_scale`) = `(e^{-tau dt}, sigma sqrt((1-e^{-2 tau dt})/(2 tau)))`.
pub fn ou_exact_coefficients(p: &NoiseParams, dt: f64) -> (f64, f64) {
    let decay = (-p.tau * dt).exp();
    let var = p.sigma * p.sigma * (1.0 - decay * decay) / (2.0 * p.tau);
    (decay, var.sqrt())
}

/// One step of the coupled system under the effective signal `drift`
/// (the constant `theta`, or a circuit input `A_t`). `dV` is the input
/// increment `drift dt + dX` minus `F dt`; gating moves by explicit Euler
/// with the `[0,1]` clamp. With `sigma = 0` and `x = 0` this reduces bit
/// for bit to the deterministic Euler step.
#[inline]
pub fn neuron_step(s: &FullState, drift: f64, p: &NoiseParams, dt: f64, gaussian: f64) -> FullState {
    let x_new = ou_step(s.x, p, dt, gaussian);
    let dv_external = drift * dt + (x_new - s.x);
    FullState { bio: bio_euler_step(&s.bio, dv_external, dt), x: x_new }
}

/// Initial condition of a single-neuron run.
#[derive(Clone, Copy, Debug)]
pub enum InitCondition {
    /// `X_0` from the invariant law `N(0, sigma^2/(2 tau))`, biological
    /// variables uniform on `(V_MIN, V_MAX) x (0,1)^3`.
    RandomStationary,
    Explicit(FullState),
}

#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    pub dt: f64,
    /// Length of the recorded window.
    pub t_end: f64,
    /// Initial stretch that is simulated and discarded; the recorded window
    /// starts from its terminal state and times restart at zero.
    pub burn_in: f64,
    /// Refractory floor of the spike detector.
    pub delta0: f64,
    pub init: InitCondition,
    /// Store every k-th grid point of the recorded window; `None` stores
    /// nothing. Spike detection always runs at full resolution.
    pub store_every: Option<u64>,
    /// Use the exact OU transition instead of Euler-Maruyama.
    pub exact_ou: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            dt: 1e-3,
            t_end: 400.0,
            burn_in: 0.0,
            delta0: 1.0,
            init: InitCondition::RandomStationary,
            store_every: None,
            exact_ou: false,
        }
    }
}

/// One stored grid point of a trajectory.
#[derive(Clone, Copy, Debug)]
pub struct SamplePoint {
    pub t: f64,
    pub v: f64,
    pub n: f64,
    pub m: f64,
    pub h: f64,
    pub x: f64,
}

/// Result of a single-neuron simulation.
#[derive(Clone, Debug)]
pub struct NeuronRun {
    pub train: SpikeTrain,
    pub final_state: FullState,
    /// Decimated trajectory of the recorded window; empty unless requested.
    pub samples: Vec<SamplePoint>,
}

fn sample_of(t: f64, s: &FullState) -> SamplePoint {
    SamplePoint { t, v: s.bio.v, n: s.bio.n, m: s.bio.m, h: s.bio.h, x: s.x }
}

/// Simulates the stochastic neuron under `p` for `opts.t_end` time units
/// (after the optional burn-in), deterministically in `seed`.
pub fn simulate_neuron(p: &NoiseParams, opts: &SimOptions, seed: u64) -> Result<NeuronRun> {
    p.validate()?;
    check_dt(opts.dt)?;
    if !(opts.t_end > 0.0) {
        return Err(Error::InvalidInput(format!("t_end must be positive, got {}", opts.t_end)));
    }
    if !(opts.burn_in >= 0.0) {
        return Err(Error::InvalidInput(format!("burn_in must be >= 0, got {}", opts.burn_in)));
    }
    let mut rng = seeded_rng(seed);
    let mut state = match opts.init {
        InitCondition::RandomStationary => {
            let bio = BioState {
                v: rng.random_range(V_MIN..V_MAX),
                n: rng.random_range(0.0..1.0),
                m: rng.random_range(0.0..1.0),
                h: rng.random_range(0.0..1.0),
            };
            let g: f64 = rng.sample(StandardNormal);
            FullState { bio, x: p.stationary_sd() * g }
        }
        InitCondition::Explicit(s) => s,
    };

    let dt = opts.dt;
    let n_burn = (opts.burn_in / dt).round() as u64;
    let n_record = (opts.t_end / dt).round() as u64;
    let n_total = n_burn + n_record;
    let exact = opts.exact_ou.then(|| ou_exact_coefficients(p, dt));

    let mut detector = SpikeDetector::new(opts.delta0, state.bio.m, state.bio.h);
    let mut times = Vec::new();
    let mut samples = Vec::new();
    if let Some(every) = opts.store_every {
        assert!(every > 0, "store_every must be positive");
        samples.reserve((n_record / every + 1) as usize);
        if n_burn == 0 {
            samples.push(sample_of(0.0, &state));
        }
    }

    for k in 1..=n_total {
        let g: f64 = rng.sample(StandardNormal);
        state = match exact {
            None => neuron_step(&state, p.theta, p, dt, g),
            Some((decay, scale)) => {
                let x_new = state.x * decay + scale * g;
                let dv_external = p.theta * dt + (x_new - state.x);
                FullState { bio: bio_euler_step(&state.bio, dv_external, dt), x: x_new }
            }
        };
        if !state.is_finite() {
            return Err(Error::Blowup { step: k, t: k as f64 * dt });
        }
        let t = k as f64 * dt;
        if detector.observe(state.bio.m, state.bio.h, t).is_some() && k > n_burn {
            times.push((k - n_burn) as f64 * dt);
        }
        if let Some(every) = opts.store_every {
            if k >= n_burn && (k - n_burn) % every == 0 {
                samples.push(sample_of((k - n_burn) as f64 * dt, &state));
            }
        }
    }

    let horizon = n_record as f64 * dt;
    Ok(NeuronRun {
        train: SpikeTrain::new(times, horizon, opts.delta0)?,
        final_state: state,
        samples,
    })
}
