use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A key or inclusion dependency refers to columns the relation does not have.
    #[error("constraint error: {0}")]
    Constraint(String),
    #[error("usage error: {0}")]
    Usage(String),
    /// The requested search space is larger than the configured budget.
    #[error("resource error: {what} needs about {estimate} candidates, budget is {budget}")]
    Resource {
        what: String,
        estimate: BigUint,
        budget: u64,
    },
    /// An inverse mapping was applied to something outside the forward image.
    #[error("recovery error: {0}")]
    Recovery(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, estimate: impl Into<BigUint>, budget: u64) -> Self {
        Error::Resource {
            what: what.into(),
            estimate: estimate.into(),
            budget,
        }
    }
}
