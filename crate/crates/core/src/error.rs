use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("plat closure has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("diagram is not nice: {0}")]
    NotNice(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("convention violation: {0}")]
    ConventionViolation(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("grading indeterminate: {0}")]
    GradingIndeterminate(String),
    #[error("filtration violation: {0}")]
    FiltrationViolation(String),
    #[error("not a differential: {0}")]
    NotADifferential(String),
    #[error("invalid move: {0}")]
    Move(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Move(_) => 2,
            Error::NotAKnot(_) => 3,
            Error::NotNice(_) => 4,
            _ => 5,
        }
    }
}
