use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composite d^{degree}+1 . d^{degree} is nonzero")]
    CompositeNonzero { degree: i32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("element is not a nonzerodivisor on the complex")]
    NotNonzerodivisor,
    #[error("filtration level {0} lies outside the stored window and no extension pattern covers it")]
    WindowTooSmall(i64),
    #[error("precision {needed} exceeds configured bound {bound}")]
    PrecisionExhausted { needed: u32, bound: u32 },
    #[error("division failure: {0}")]
    DivisionFailure(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("truncation too tight: {0}")]
    TruncationTooTight(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
