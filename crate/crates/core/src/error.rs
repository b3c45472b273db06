use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("expansion order {requested} exceeds capacity {capacity}")]
    ExpansionCapacity { requested: i64, capacity: i64 },
    #[error("cyclic sum operator is singular at mode {0}")]
    SingularCyclicSum(i32),
    #[error("not a total difference: {0}")]
    NotTotalDifference(String),
    #[error("series constant term is not a unit")]
    NotUnit,
    #[error("malformed operator: {0}")]
    Malformed(String),
    #[error("truncation depth insufficient: need exponent {needed}, exact only from {valid}")]
    DepthInsufficient { needed: i32, valid: i32 },
    #[error("window mismatch")]
    WindowMismatch,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("unknown generator pair: {0}")]
    UnknownPair(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
