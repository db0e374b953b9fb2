use thiserror::Error;

/// Errors raised by the geometry, objective, solver, certificate and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeronError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid step schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("point is not in the set (distance {distance:e} exceeds tolerance {tol:e})")]
    NotInSet { distance: f64, tol: f64 },

    #[error(
        "point lies in target set {index} (distance {distance:e}); the unit vector is undefined"
    )]
    InsideTarget { index: usize, distance: f64 },

    #[error("direction vector {index} is zero")]
    ZeroDirection { index: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("scenario does not match the one the result was produced from")]
    ScenarioMismatch,

    #[error("no bounding box can be derived: constraint and all targets are unbounded")]
    NoBoundingBox,

    #[error("oracle budget exceeded: {requested} evaluations requested, cap is {cap}")]
    BudgetExceeded { requested: u128, cap: u128 },

    #[error("malformed trace: {0}")]
    Trace(String),
}

pub type Result<T, E = HeronError> = std::result::Result<T, E>;
