use crate::shapes::Pixel;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a single step was rejected by the simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("illegal move from {from} to {to}")]
    IllegalMove { from: Pixel, to: Pixel },
    #[error("snow on {at} but no throw target")]
    MissingThrow { at: Pixel },
    #[error("throw from {from} to {to} is not to a 4-neighbour")]
    IllegalThrow { from: Pixel, to: Pixel },
    #[error("throw onto {at} would raise depth to {depth} (cap {cap})")]
    DepthViolation { at: Pixel, depth: u32, cap: u32 },
    #[error("throw from {from} to outside pixel {to} is not the ejection edge")]
    IllegalEjection { from: Pixel, to: Pixel },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid depth cap {0}: must be at least 2")]
    InvalidCap(u32),
    #[error("invalid length {0}: must be at least 1")]
    InvalidLength(u32),
    #[error("invalid shape descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: StepError,
    },
    #[error("malformed plan text at line {line}: {message}")]
    PlanFormat { line: usize, message: String },
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("search exhausted after {explored} states (budget {budget})")]
    Exhausted { explored: usize, budget: usize },
    #[error("generated plan is defective: {0}")]
    InternalPlan(String),
}
