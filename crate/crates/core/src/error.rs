use thiserror::Error;

/// Errors raised by the risk library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiskError {
    #[error("invalid step: horizon {horizon} s, dt {dt} s")]
    InvalidStep { horizon: f64, dt: f64 },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("non-uniform sampling at index {index}: step {step} s differs from {expected} s")]
    NonUniformSampling { index: usize, step: f64, expected: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("non-positive variance: {0}")]
    NonPositiveVariance(f64),

    #[error("empty distance profile")]
    EmptyProfile,

    #[error("distance profile reaches {covered} s but the horizon is {horizon} s")]
    ProfileTooShort { covered: f64, horizon: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("inconsistent scenario spec: {0}")]
    InconsistentSpec(String),

    #[error("prediction horizon {horizon} s must exceed the scenario lead time {start_offset} s")]
    HorizonTooShort { horizon: f64, start_offset: f64 },

    #[error("empty group: {0}")]
    EmptyGroup(String),

    #[error("oracle step too coarse: rate*step = {0} exceeds 0.1")]
    StepTooCoarse(f64),
}

pub type Result<T> = std::result::Result<T, RiskError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> RiskError {
    RiskError::InvalidParam { name, reason: reason.into() }
}
