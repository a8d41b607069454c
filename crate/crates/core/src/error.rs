use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation and optimization routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular geometry: transmitter and receiver coincide")]
    SingularGeometry,

    #[error("infeasible trajectory: {0}")]
    InfeasibleTrajectory(String),

    #[error("grid budget exceeded: {needed} lattice points requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("objective evaluation returned a non-finite value at {at:?}")]
    Evaluation { at: Vec<f64> },

    #[error("internal consistency: {0}")]
    Consistency(String),

    /// `slot` is 1-based.
    #[error("information causality violated at slot {slot}")]
    InfeasiblePlan { slot: usize },

    #[error("invalid comparison: {0}")]
    InvalidComparison(String),

    #[error("no feasible operating point: {0}")]
    Infeasible(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
