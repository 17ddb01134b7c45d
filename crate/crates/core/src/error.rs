use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("Schur-complement pivot block is singular (condition estimate {0:.3e}); test the full matrix directly")]
    SingularPivot(f64),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("point {0} is not in the open unit disk")]
    OutsideDisk(Complex64),

    #[error("invalid interpolation data: {0}")]
    InvalidData(String),

    #[error("invalid Blaschke product: {0}")]
    InvalidBlaschke(String),

    #[error("interpolation node {node} coincides with Blaschke zero {zero}; use the overlap route")]
    Overlap { node: Complex64, zero: Complex64 },

    #[error("interpolation node at a zero of B: this is a Carathéodory-Fejér problem with the derivative condition at that point; use the overlap route")]
    NodeAtBlaschkeZero,

    #[error("ill-conditioned Stein operator (condition estimate {0:.3e})")]
    IllConditionedStein(f64),

    #[error("invalid kernel parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate problem: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
