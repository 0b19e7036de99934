use thiserror::Error;

/// Errors surfaced by world construction, evaluation, and the learners.
///
/// Learner errors are ordinary outcomes of a trial (e.g. no consistent
/// member exists in agnostic data); the experiment runner records them per
/// trial instead of aborting a batch.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("target set is empty at input {input}")]
    EmptyTarget { input: u64 },

    #[error("hypothesis class must be non-empty")]
    EmptyClass,

    #[error("duplicate hypothesis id `{0}` in class")]
    DuplicateId(String),

    #[error("no consistent hypothesis for the given sample (m = {m})")]
    NoConsistentHypothesis { m: usize },

    #[error("plausible set is empty at mistake threshold {threshold}")]
    EmptyPlausibleSet { threshold: f64 },

    #[error("no hypothesis satisfies both surrogate conditions; retry with more data")]
    SurrogateConditionsUnsatisfied,

    #[error("pair vectors are incomparable: {0}")]
    IncomparablePairVectors(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("world `{world}` has no exact expectation for `{hypothesis}`; use Monte Carlo")]
    NoExactExpectation { world: String, hypothesis: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
