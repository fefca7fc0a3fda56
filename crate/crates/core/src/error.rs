use thiserror::Error;

/// Errors raised by net construction, exploration and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("transition `{transition}` is not enabled")]
    NotEnabled { transition: String },

    #[error("firing `{transition}` would put a second token on place `{place}`")]
    SafenessViolation { transition: String, place: String },

    #[error("exploration budget of {limit} markings exceeded")]
    ExplorationBudgetExceeded { limit: usize },

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("the loop of a lasso consists only of unobservable actions")]
    UnobservableCycle,

    #[error("invalid run: {0}")]
    InvalidRun(String),

    #[error("unobservable action `{action}` is shared by components {components:?}")]
    SharedUnobservable {
        action: String,
        components: Vec<String>,
    },

    #[error("fault `{0}` is not declared unobservable")]
    FaultNotUnobservable(String),

    #[error("action `{0}` is declared both observable and unobservable")]
    PartitionOverlap(String),

    #[error("`{0}` is not a fault action")]
    NotAFault(String),

    #[error("component index {index} out of range for a system of {len} components")]
    NoSuchComponent { index: usize, len: usize },

    #[error("results are missing for component {component} and fault `{fault}`")]
    IncompleteResults { component: usize, fault: String },

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("malformed net: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
