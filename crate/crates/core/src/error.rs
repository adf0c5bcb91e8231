//! Error type shared by every module of the engine.

use thiserror::Error;

use crate::algebra::series::Var;

/// Failures raised by the exact-arithmetic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("constant term {0} is not invertible")]
    NotInvertible(String),
    #[error("series must have zero constant term")]
    NonZeroConstant,
    #[error("logarithm requires constant term 1")]
    ConstantNotOne,
    #[error("series variables differ: {0:?} vs {1:?}")]
    VariableMismatch(Var, Var),
    #[error("index {index} exceeds truncation order {order}")]
    BeyondOrder { index: usize, order: usize },
    #[error("repeated interpolation node at position {0}")]
    RepeatedNode(usize),
    #[error("{nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("exact division failed: {0}")]
    NotExact(String),
    #[error("hbar window [{lo}, {hi}] exceeds cap [{cap_lo}, {cap_hi}]")]
    WindowOverflow {
        lo: i64,
        hi: i64,
        cap_lo: i64,
        cap_hi: i64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("residual t-dependence: {0}")]
    ResidualT(String),
    #[error("u^{d} coefficient at x1^{k1} x2^{k2} is not divisible by hbar1 + hbar2")]
    NotDivisible { d: usize, k1: usize, k2: usize },
    #[error("resonant weights: {0}")]
    Resonance(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("pole at hbar = {0}")]
    Pole(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("unsupported valence pattern: {0}")]
    Valence(String),
    #[error("checker modes disagree: {0}")]
    ModeDisagreement(String),
    #[error("malformed rational literal {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
