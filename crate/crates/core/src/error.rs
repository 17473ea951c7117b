use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("pole projection on a series that still carries the exponential monomial E")]
    UnexpandedExponential,
    #[error("recovery substitution needs the E-closed form, found explicit t")]
    ExpandedInput,
    #[error("limit q -> 0 diverges: negative q power {power} survives")]
    DivergentLimit { power: i32 },
    #[error("forest of degree {degree} exceeds the degree cap {cap}")]
    DegreeExceeded { degree: usize, cap: usize },
    #[error("functional is not a character")]
    NotACharacter,
    #[error("functional is not an infinitesimal character")]
    NotInfinitesimal,
    #[error("exponential of angle {0} is not a representable monomial")]
    NotRepresentable(String),
    #[error("counterterm for lower-degree tree {0} is missing")]
    MissingLowerDegree(String),
    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),
    #[error("closed-form evolution failed: {0}")]
    DivergentEvolution(String),
    #[error("functional does not vanish on the empty forest")]
    NonzeroCounit,
    #[error("pole bound violated on {tree}: lowest eps power {lowest}, allowed {allowed}")]
    PoleBoundViolated {
        tree: String,
        lowest: i32,
        allowed: i32,
    },
    #[error("rule has no factor for tree {0}")]
    RuleIncomplete(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("tree {0} appears twice in the rule")]
    DuplicateTree(String),
    #[error("malformed tree encoding: {0}")]
    InvalidTree(String),
    #[error("hierarchy depth must be at least 1")]
    InvalidDepth,
    #[error("degree caps differ: {0} vs {1}")]
    CapMismatch(usize, usize),
}
