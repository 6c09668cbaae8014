use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A document failed to parse or validate; `field` names the offending key.
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("resource limit exceeded: {expanded} node expansions (budget {budget})")]
    ResourceLimit { expanded: u64, budget: u64 },

    /// A solver reported a schedule as feasible that the verifier rejects.
    #[error("{algorithm} produced an invalid schedule for seed {seed}: {detail}")]
    Verification {
        seed: u64,
        algorithm: String,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}
