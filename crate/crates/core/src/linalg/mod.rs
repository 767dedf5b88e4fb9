//! Dense complex matrices, tensor-product helpers and the Hermitian eigensolver.

mod eigen;
mod matrix;
mod random;
pub mod text;

pub use eigen::{
    hermitian_eigenvalues, is_psd, EigenResult, DEFAULT_EIGEN_TOL, DEFAULT_PSD_TOL, MAX_SWEEPS,
};
pub use matrix::{
    bell_projector, kron, matrix_unit, partial_transpose, DenseMatrix, HermitianMatrix, Subsystem,
    HERMITIAN_TOL,
};
pub use random::{
    complex_gaussian, derive_seed, gaussian_matrix, random_pure_state, random_unitary,
    rng_from_seed,
};

pub use num_complex::Complex64;
