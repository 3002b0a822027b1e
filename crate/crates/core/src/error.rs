use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("quasimap does not factor through the target cone: {0}")]
    TargetViolation(String),
    #[error("not a log Fano quasimap: {0}")]
    NotFano(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no termination after {0} iterations")]
    NonTermination(usize),
    #[error("degenerate Weierstrass model: {0}")]
    DegenerateModel(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::TargetViolation(_) => "TargetViolation",
            Error::NotFano(_) => "NotFanoError",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NonTermination(_) => "NonTermination",
            Error::DegenerateModel(_) => "DegenerateModel",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn degenerate<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::DegenerateInput(msg.into()))
}
