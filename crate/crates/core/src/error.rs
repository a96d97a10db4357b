use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooSmall { target: u32, degree: u32 },

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error(
        "polynomial is not homogeneous: term `{term}` has degree {found}, expected {expected}"
    )]
    NotHomogeneous {
        term: String,
        found: u32,
        expected: u32,
    },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reduction modulo {prime} is identically zero")]
    ZeroReduction { prime: u64 },

    #[error("point is singular; tangent-section multiplicity is undefined there")]
    SingularPoint,

    #[error("point does not lie on the hypersurface")]
    PointNotOnHypersurface,

    #[error("tangent hyperplane is contained in the hypersurface")]
    DegenerateTangentSection,

    #[error("search exhausted within radius {radius}")]
    SearchExhausted { radius: u64 },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
