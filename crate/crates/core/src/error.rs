use thiserror::Error;

/// Errors produced by the simulation and statistics layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an input-domain precondition (non-finite value,
    /// step size out of range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested computation is undefined for the given data
    /// (empty sample, bracket failure, horizon too short, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The explicit Euler scheme produced a non-finite state.
    #[error("integration blew up at step {step} (t = {t})")]
    Blowup { step: u64, t: f64 },

    /// A neuron in a circuit produced a non-finite state.
    #[error("circuit neuron {neuron} blew up at step {step} (t = {t})")]
    CircuitBlowup { neuron: usize, step: u64, t: f64 },

    /// A structural parameter of a circuit or experiment is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("calibration cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
