use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected an {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongDimensions {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not Hermitian: max |m - m^dagger| = {violation:e}")]
    NotHermitian { violation: f64 },
    #[error("matrix does not have unit trace: |Tr m - 1| = {violation:e}")]
    NotUnitTrace { violation: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("Pauli coefficient has imaginary residue {residue:e}; input is not Hermitian")]
    NonHermitianInput { residue: f64 },
    #[error("amplitudes are not normalized: sum |amp|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("Bloch vector has norm {norm} > 1")]
    BlochVectorTooLong { norm: f64 },
    #[error("not a proper rotation: residual {residual:e}")]
    NotRotation { residual: f64 },
    #[error("invalid W-class parameters: {0}")]
    InvalidParams(String),
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
