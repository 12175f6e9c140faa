use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index set is not a matroid circuit (nullity {nullity})")]
    NotACircuit { nullity: usize },

    #[error("enumeration budget exceeded: {needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("direction is not blocked by any bound")]
    Unbounded,

    #[error("step length is zero at the current point")]
    DegenerateStep,

    #[error("starting point is infeasible")]
    InfeasibleStart,

    #[error("walk exceeded the limit of {0} steps")]
    StepLimit(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
