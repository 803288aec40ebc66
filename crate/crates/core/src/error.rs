use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("expected a positive rational, got {0}")]
    NonPositive(String),

    #[error("{value} is not an integer multiple of 1/{base}^{level}")]
    LevelTooLow {
        value: String,
        base: u32,
        level: u32,
    },

    #[error("breakpoints are not strictly increasing at index {0}")]
    NotMonotone(usize),

    #[error("breakpoints must start at (0,0) and end at (1,1)")]
    BadEndpoints,

    #[error("{0} lies outside the domain")]
    OutOfDomain(String),

    #[error("map is not differentiable at {0}")]
    NonDifferentiable(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("letter `{0}` is not bound in the alphabet")]
    UnboundLetter(String),

    #[error("not an element of F({n}): {reason}")]
    NotMember { n: u32, reason: String },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
