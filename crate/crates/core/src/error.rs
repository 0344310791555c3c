use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = McfError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum McfError {
    #[error("refinement budget exhausted after {rounds} rounds")]
    NonTerminating { rounds: u32 },

    #[error("oracle cannot refine any further")]
    OracleExhausted,

    #[error("operands belong to different number fields")]
    FieldMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("integrality is undecidable for oracle values")]
    UndecidableForOracle,

    #[error("invalid number field: {0}")]
    InvalidField(String),

    #[error("interruption: last complete quotient is integral at index {index}")]
    Interruption { index: usize },

    #[error("sequences are not admissible at index {index}: {condition}")]
    Admissibility { index: usize, condition: String },

    #[error("free entries violate admissibility at index {index}: {condition}")]
    AdmissibilityConflict { index: usize, condition: String },

    #[error("tilde recursion disagrees with definition at index {0}")]
    RecursionMismatch(i64),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("expansions differ at index {0}")]
    PrefixMismatch(usize),

    #[error("hypothesis `{hypothesis}` violated at index {index}")]
    HypothesisViolated { hypothesis: String, index: usize },

    #[error("degenerate cubic: {reason}")]
    DegenerateCubic { reason: String, poly: Vec<BigInt> },

    #[error("more than one real root reproduces the expansion prefix")]
    RootSelectionAmbiguous,

    #[error("period blocks differ")]
    PeriodMismatch,

    #[error("repetition windows overlap at schedule entry {0}")]
    ScheduleOverlap(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl McfError {
    pub fn input(msg: impl Into<String>) -> Self {
        McfError::InvalidInput(msg.into())
    }

    /// True for failures caused by running out of refinement (budget or source).
    pub fn is_refinement_failure(&self) -> bool {
        matches!(self, McfError::NonTerminating { .. } | McfError::OracleExhausted)
    }
}
