use std::path::PathBuf;

use thiserror::Error;

use crate::discrimination::Povm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (anti-Hermitian part {defect:.3e} exceeds tolerance)")]
    NonHermitianInput { defect: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NegativeEigenvalue { min_eigenvalue: f64 },

    #[error("Taylor series for exp(-iHt) did not converge (tail bound {tail_bound:.3e})")]
    SeriesNotConverged { tail_bound: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("state has vanishing norm {norm:.3e} after evolution")]
    ZeroNorm { norm: f64 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("target index {target} out of range for an ensemble of {len} states")]
    TargetOutOfRange { target: usize, len: usize },

    #[error("MED solver stopped after {iterations} iterations with residual {residual:.3e}")]
    NotConverged {
        iterations: usize,
        residual: f64,
        best: Box<Povm>,
    },

    #[error("at nh = {nh}, t = {t}: {source}")]
    AtSample {
        nh: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// Strips [`Error::AtSample`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtSample { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self.root(), Error::Config(_) | Error::Domain(_))
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self.root(),
            Error::NotConverged { .. } | Error::SeriesNotConverged { .. }
        )
    }
}
