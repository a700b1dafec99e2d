use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid local dimension {0}: every party needs dimension >= 2")]
    InvalidDimension(usize),

    #[error("a space needs at least one party")]
    EmptySpace,

    #[error("total dimension {0} exceeds the supported maximum of {1}")]
    TooLarge(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("party {party} out of range for a {parties}-party space")]
    PartyOutOfRange { party: usize, parties: usize },

    #[error("invalid bipartition: {0}")]
    InvalidCut(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max entry deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("operator is numerically zero")]
    ZeroOperator,

    #[error("best product overlap is exactly zero")]
    ZeroOverlap,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not an orthonormal basis: {0}")]
    NotOrthonormal(String),

    #[error("state set is not of the constructed GHZ form: {0}")]
    NotGhzSet(String),

    #[error("malformed state-set file at `{field}`: {message}")]
    Format { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
