use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two widths that must agree do not.
    #[error("width mismatch: expected {expected}, found {found}")]
    Width { expected: usize, found: usize },

    /// A value does not fit the range it is used in.
    #[error("value {value} out of range [0, {bound})")]
    Range { value: u64, bound: u64 },

    /// Malformed structure (dangling wires, bad arity, empty circuits, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// Malformed serialized document.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// An instance failed validation.
    #[error("invalid instance: {}", .0.join("; "))]
    Invalid(Vec<String>),

    /// A solution was paired with an instance of another problem.
    #[error("solution for {solution} cannot be checked against a {instance} instance")]
    VariantMismatch { instance: String, solution: String },

    /// A pull-back received a target solution of a case the construction rules out.
    #[error("soundness violation in {reduction}: target case {case} {detail}")]
    SoundnessViolation {
        reduction: String,
        case: u8,
        detail: String,
    },

    /// Two reductions were chained whose problems do not line up.
    #[error("cannot chain {first} (target {target}) with {second} (source {source_problem})")]
    ChainMismatch {
        first: String,
        target: String,
        second: String,
        source_problem: String,
    },

    /// Exhaustive search found no solution. Totality makes this an implementation bug.
    #[error("search exhausted without a solution for {0}")]
    Exhausted(String),

    /// Instance too large for the brute-force oracles.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("unknown reduction id `{0}`")]
    UnknownReduction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
