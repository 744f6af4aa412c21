use thiserror::Error;

/// Errors raised by the physics operations.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// operation ran in, so the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument or configuration field failed validation.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// An input lies outside the mathematical domain of an operation.
    #[error("{quantity} = {value} is outside the domain ({requirement})")]
    Domain {
        quantity: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The requested value exceeds the supremum of a bounded map.
    #[error("{quantity} = {value} exceeds the supremum {supremum} of the {map}")]
    OutOfRange {
        map: &'static str,
        quantity: &'static str,
        value: f64,
        supremum: f64,
    },

    /// An inversion or equation has no real solution.
    #[error("no solution for {what}: {detail}")]
    NoSolution { what: &'static str, detail: String },

    /// Evaluation overflowed the scalar type.
    #[error("{quantity} saturated: argument {argument} exceeds the representable limit {limit}")]
    Saturation {
        quantity: &'static str,
        argument: f64,
        limit: f64,
    },

    /// Iterative solve hit its iteration cap.
    #[error("root finding did not converge within {iterations} iterations (bracket [{lo}, {hi}])")]
    NotConverged { iterations: usize, lo: f64, hi: f64 },

    /// Time step too coarse for the grid.
    #[error("phase-wrap guard violated: dt * max omega = {phase} >= pi; use dt < {dt_max}")]
    PhaseWrap { phase: f64, dt_max: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}
