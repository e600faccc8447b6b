use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pulse profile is empty")]
    EmptyProfile,

    #[error("pulse profile sample times must be strictly increasing (violated at index {index})")]
    NonMonotoneProfile { index: usize },

    #[error("sampled pulse rejected (non-positive duration or negative exchange) after {attempts} attempt(s)")]
    RejectedSample { attempts: u32 },

    #[error("Kraus set is not trace preserving (max |sum K^dag K - I| = {deviation:e})")]
    IncompleteKraus { deviation: f64 },

    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
