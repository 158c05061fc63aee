use thiserror::Error;

/// Errors raised by the graph, index, baseline and workload layers.
#[derive(Debug, Error)]
pub enum RlcError {
    #[error("invalid label sequence: {0}")]
    InvalidSequence(String),

    #[error("arithmetic overflow while {0}")]
    Overflow(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("infeasible graph parameters: {0}")]
    InfeasibleGraph(String),

    #[error("constraint of length {len} exceeds recursion bound k = {k}")]
    UnsupportedConstraint { len: usize, k: usize },

    #[error("constraint is not a minimum repeat (non-primitive label sequence)")]
    NonPrimitiveConstraint,

    #[error("{0} not found")]
    NotFound(String),

    #[error("corrupt index: {0}")]
    CorruptIndex(String),

    #[error("index build aborted after {processed} of {total} vertices ({entries} entries): {reason}")]
    IndexBuildFailure { processed: usize, total: usize, entries: usize, reason: String },

    #[error("candidate space of {0} constraints exceeds the enumeration guard")]
    CandidateSpaceTooLarge(u128),

    #[error("could not fill the {class} query set: {filled} of {wanted} after {draws} draws")]
    UnsatisfiableWorkload { class: &'static str, filled: usize, wanted: usize, draws: u64 },

    #[error("evaluator `{evaluator}` answered {got} for query #{query} (expected {expected})")]
    EvaluatorMismatch { evaluator: String, query: usize, expected: bool, got: bool },

    #[error("configuration rejected: {0}")]
    ConfigRejected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = RlcError> = std::result::Result<T, E>;
