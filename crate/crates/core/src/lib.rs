//! Stochastic Hodgkin-Huxley neurons with Ornstein-Uhlenbeck input, spike
//! train statistics, quiet-behaviour and regular-spiking classifiers, and
//! block-structured excitatory/inhibitory ring circuits that self-organize
//! into rotating activity patterns.
//!
//! The crate is organized in layers:
//!
//! * [`hh`] — the deterministic system: rate functions, equilibria,
//!   attractor classification, bistability scans;
//! * [`spike`], [`neuron`], [`output`] — the stochastic neuron, its spike
//!   trains and its jump-decay output process;
//! * [`stats`] — empirical distribution functions, quantiles, interspike
//!   tuple statistics, output-pair approximations;
//! * [`poisson`], [`regime`] — Poisson references, Monte-Carlo calibrated
//!   critical values, the quiet and regular-spiking tests;
//! * [`circuit`], [`reference`] — coupled ring circuits and the
//!   deterministic reference model.

pub mod circuit;
pub mod error;
pub mod hh;
pub mod neuron;
pub mod output;
pub mod poisson;
pub mod reference;
pub mod regime;
pub mod rng;
pub mod spike;
pub mod stats;

pub use error::{Error, Result};
pub use hh::{BioState, EquilibriumPoint, Gate, GateRates};
pub use neuron::{FullState, NoiseParams};
pub use output::OutputPath;
pub use spike::{SpikeDetector, SpikeTrain};
