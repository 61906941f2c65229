use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group closure exceeds the element cap of {cap}")]
    SizeLimit { cap: usize },

    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("elements do not form a subgroup: {0}")]
    NotASubgroup(String),

    #[error("not an automorphism: theta({x}*{y}) != theta({x})*theta({y})")]
    NotAnAutomorphism { x: usize, y: usize },

    #[error("automorphism is not involutive: theta(theta({x})) != {x}")]
    NotInvolutive { x: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weight must be strictly positive (index {index} has value {value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("weight is not K-bi-invariant: elements {a} and {b} share a double coset but differ in value")]
    WeightNotBiInvariant { a: usize, b: usize },

    #[error("function is not K-bi-invariant: elements {a} and {b} share a double coset but differ in value")]
    FunctionNotBiInvariant { a: usize, b: usize },

    #[error("weight must equal 1 at the identity (found {value})")]
    WeightNotUnitAtIdentity { value: f64 },

    #[error("spherical function must equal 1 at the identity (found {value})")]
    NotNormalized { value: String },

    #[error("bi-invariant algebra is not commutative: delta_{i} * delta_{j} != delta_{j} * delta_{i} at element {x}")]
    NotCommutative { i: usize, j: usize, x: usize },

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("operator is not a multiplier: {0}")]
    NotAMultiplier(String),

    #[error("internal consistency check failed: {0}")]
    ConsistencyViolation(String),

    #[error("{0}")]
    Input(String),
}
