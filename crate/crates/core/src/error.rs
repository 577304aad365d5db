use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("random cost is not defined on the scenarios of this probability space")]
    DomainMismatch,
    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("all scenario probabilities are zero")]
    EmptySupport,
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("unknown realization ({0}, {1})")]
    UnknownRealization(String, String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("unknown trajectory `{0}`")]
    UnknownTrajectory(String),
    #[error("no tradeoff witness: {0}")]
    NoWitness(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("assumption unmet: {0}")]
    AssumptionUnmet(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
