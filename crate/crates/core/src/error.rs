use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("partial quotient sequence must not be empty")]
    EmptySequence,
    #[error("partial quotient at position {index} is zero")]
    ZeroTerm { index: usize },
    #[error("invalid sequence literal {0:?}")]
    Parse(String),
    #[error("fraction {k}/{n} is outside 1 <= k < n")]
    FractionRange { k: String, n: String },
    #[error("fraction {k}/{n} is not coprime")]
    NotCoprime { k: String, n: String },
    #[error("bound must be at least 2, got {0}")]
    BoundTooSmall(u64),
    #[error("the sequence (1) represents 1/1, which has no reduced fraction in (0,1)")]
    UnitSequence,
    #[error("sequence {0} is not bounded in average by {1}")]
    NotAvgBounded(String, u64),
    #[error("sequence is already uniformly bounded; no shifting step applies")]
    Fixpoint,
    #[error("shifting exceeded its iteration budget of {0} steps")]
    BudgetExceeded(u128),
    #[error("value does not fit the chosen scalar type")]
    Overflow,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

impl CfError {
    /// True for broken internal invariants as opposed to rejected input.
    pub fn is_internal(&self) -> bool {
        matches!(self, CfError::BudgetExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, CfError>;
