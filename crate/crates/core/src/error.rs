use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("character {index} is not primitive")]
    NonPrimitive { index: usize },

    #[error("subvarieties {first} and {second} coincide")]
    Duplicate { first: usize, second: usize },

    #[error("index {index} out of range for a ground set of size {size}")]
    BadIndex { index: usize, size: usize },

    #[error("index sets overlap")]
    Overlap,

    #[error("set has nullity {nullity}, expected nullity 1")]
    Nullity { nullity: usize },

    #[error("not a circuit")]
    NotCircuit,

    #[error("not a basis of the matroid")]
    NotBasis,

    #[error("set is dependent")]
    Dependent,

    #[error("set is not central")]
    NotCentral,

    #[error("point does not lie on the requested intersection")]
    PointNotOnIntersection,

    #[error("layer not found in the poset of layers")]
    UnknownLayer,

    #[error("parameters (a, b) = ({a}, {b}) not supported here: {reason}")]
    Parameters { a: usize, b: usize, reason: String },

    #[error("unknown example: {0}")]
    UnknownExample(String),

    #[error("malformed rational {0:?}")]
    Rational(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
