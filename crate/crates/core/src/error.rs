//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("packet width must be positive and finite (got {0})")]
    InvalidPacketWidth(f64),

    #[error("packet mean momentum must be finite (got {0})")]
    InvalidPacketMomentum(f64),

    #[error("probability must lie in [0, 1] (got {0})")]
    InvalidProbability(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilityVector(String),

    #[error("angle must be finite (got {0})")]
    InvalidAngle(f64),

    #[error("operation requires the theta = 0 signal state (got theta = {0})")]
    SignalNotUp(f64),

    #[error("rapidity must be finite (got {0})")]
    NonFiniteRapidity(f64),

    #[error("operation is undefined at the infinite-rapidity sentinel")]
    InfiniteRapidity,

    #[error("four-momentum is off shell: q0 = {q0}, spatial part gives {expected}")]
    OffShell { q0: f64, expected: f64 },

    #[error("{name} must lie in [0, 1) (got {value})")]
    WeightOutOfRange { name: &'static str, value: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("probability and state counts differ: {probs} vs {states}")]
    LengthMismatch { probs: usize, states: usize },

    #[error("channel maps require 0 < theta < pi (got {0})")]
    ThetaOutsideDomain(f64),

    #[error("invalid integration spec: {0}")]
    InvalidIntegrationSpec(String),

    #[error(
        "quadrature did not converge: estimate {estimate} with error {error_estimate} \
         after {evaluations} evaluations"
    )]
    QuadratureDidNotConverge {
        estimate: f64,
        error_estimate: f64,
        evaluations: u64,
    },

    #[error("no sign change on [{lo}, {hi}] while bracketing the crossing angle")]
    NoSignChange { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
