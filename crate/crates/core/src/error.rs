use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("chain of {qubits} qubits exceeds the configured maximum of {max} (dimension 2^{qubits})")]
    DimensionTooLarge { qubits: usize, max: usize },

    #[error("{0} coupling is not supported by this construction")]
    UnsupportedCoupling(String),

    #[error("matrix of dimension {dim} is not Hermitian: max |H - H^dagger| = {defect:e} exceeds {tolerance:e}")]
    NotHermitian {
        dim: usize,
        defect: f64,
        tolerance: f64,
    },

    #[error("eigensolver failed to converge on {dim}x{dim} matrix (max |H_ij| = {max_abs:e}, trace = {trace:e})")]
    NoConvergence { dim: usize, max_abs: f64, trace: f64 },

    #[error("eigendecomposition of {dim}x{dim} matrix violates its accuracy contract: {detail}")]
    Accuracy { dim: usize, detail: String },

    #[error("state is not normalized: |psi| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("band holds {population} states, at least {required} are needed")]
    BandTooSmall { population: usize, required: usize },

    #[error("central-band formulas need an even qubit count, got L = {0}")]
    OddChainLength(usize),

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical kernel rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::Accuracy { .. } | Error::NotHermitian { .. }
        )
    }
}
