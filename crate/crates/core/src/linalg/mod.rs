//! Dense complex linear algebra for small matrices.

use core::fmt;

pub mod hermitian;
pub mod lu;
pub mod matrix;
pub mod poly;
pub mod schur;
pub mod svd;
pub mod trig;

pub use hermitian::{hermitian_eigen, hermitian_eigenvalues, lambda_max, rotated_real_part_eigenvalues, HermitianEigen};
pub use lu::{cholesky_upper, determinant, hadamard_bound, inv_upper};
pub use matrix::{c, cis, cr, ComplexMatrix, C64};
pub use poly::{poly_complex_roots, poly_real_roots, ComplexRoot, RealPolynomial, RealRoot};
pub use schur::{eigenvalues, schur, schur_ordered, Schur};
pub use svd::{null_space, staircase, svd, Staircase, Svd};
pub use trig::{sample_angles, trig_interpolate, TrigPolynomial};

#[derive(Clone, Debug, PartialEq)]
pub enum LinalgError {
    NotSquare { rows: usize, cols: usize },
    NotHermitian { row: usize, col: usize },
    NonFinite { row: usize, col: usize },
    DimensionMismatch { expected: usize, found: usize },
    NoConvergence,
    /// The polynomial vanishes identically; every point is a root.
    EverywhereZero,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => write!(f, "matrix is {}x{}, expected square", rows, cols),
            LinalgError::NotHermitian { row, col } => {
                write!(f, "matrix is not Hermitian at entry ({}, {})", row, col)
            }
            LinalgError::NonFinite { row, col } => write!(f, "non-finite entry at ({}, {})", row, col),
            LinalgError::DimensionMismatch { expected, found } => {
                write!(f, "expected {} entries, found {}", expected, found)
            }
            LinalgError::NoConvergence => write!(f, "iteration did not converge"),
            LinalgError::EverywhereZero => write!(f, "polynomial is identically zero"),
        }
    }
}

impl core::error::Error for LinalgError {}
