use thiserror::Error;

/// Errors produced while building, validating or analysing states.
#[derive(Debug, Error)]
pub enum Error {
    #[error("su(n) requires n >= 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generators are not orthonormal: Gram matrix deviates from 2*I by {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not Hermitian: max asymmetry {deviation:e} at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("trace deviation {deviation} from unit trace")]
    TraceDeviation { deviation: f64 },

    #[error("state is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("degenerate spectrum: reduced-state eigenvalue {min_eigenvalue:e} below floor {floor:e}; use finite-difference mode")]
    DegenerateSpectrum { min_eigenvalue: f64, floor: f64 },

    #[error("unphysical Gaussian state: {0}")]
    UnphysicalGaussian(String),

    #[error("no real standard form: {0}")]
    NoStandardForm(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("form is outside the squeezed-thermal family: {0}")]
    OutsideSqueezedThermal(String),

    #[error("Fock truncation lost {deficit:e} of the trace (limit {limit:e}); increase the cutoff")]
    TruncationDeficit { deficit: f64, limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error reflects a numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::DegenerateSpectrum { .. } | Error::Singular(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
