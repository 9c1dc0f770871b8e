//! Complex random-matrix primitives: Gaussian and Haar sampling, a Jacobi
//! Hermitian eigensolver and shifted log-determinants.

mod eigen;
mod logdet;
mod matrix;
mod rng;
mod sampling;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use logdet::{log2_det_hpd, log_det_shifted};
pub use matrix::ComplexMatrix;
pub use rng::RngStream;
pub use sampling::{sample_complex_gaussian, sample_haar_unitary};

/// Relative tolerance used to decide whether an input is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("Gaussian draw was numerically rank deficient")]
    RankDeficient,
}
