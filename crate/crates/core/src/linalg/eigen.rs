//! Cyclic Jacobi eigenvalue iteration for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! the classical real Jacobi rotation, so the diagonal stays real throughout.
//! Only eigenvalues are produced.

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

/// Default convergence tolerance, relative to `max(1, largest |entry|)`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-11;

/// Default PSD tolerance used for all classification decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

pub const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Number of completed sweeps.
    pub iterations: usize,
    /// Frobenius norm of the strictly off-diagonal part at termination.
    pub off_diagonal_residual: f64,
}

impl EigenResult {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

fn off_diagonal_norm(a: &[Complex64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues of `h`, ascending.
///
/// Iterates until the off-diagonal Frobenius norm drops to `tol * scale`, with
/// `scale = max(1, max |h_ij|)`. Fails after [`MAX_SWEEPS`] sweeps.
pub fn hermitian_eigenvalues(h: &HermitianMatrix, tol: f64) -> Result<EigenResult> {
    assert!(tol > 0.0, "eigensolver tolerance must be positive");
    let d = h.dim();
    let scale = h.scale();
    let target = tol * scale;
    let mut a: Vec<Complex64> = h.as_matrix().as_slice().to_vec();
    for i in 0..d {
        a[i * d + i].im = 0.0;
    }

    let mut sweeps = 0;
    let mut residual = off_diagonal_norm(&a, d);
    while residual > target || !residual.is_finite() {
        if sweeps == MAX_SWEEPS || !residual.is_finite() {
            return Err(Error::NoConvergence { sweeps, residual });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, d, p, q);
            }
        }
        sweeps += 1;
        residual = off_diagonal_norm(&a, d);
    }

    let mut eigenvalues: Vec<f64> = (0..d).map(|i| a[i * d + i].re).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(EigenResult {
        eigenvalues,
        iterations: sweeps,
        off_diagonal_residual: residual,
    })
}

/// Annihilates `a[p][q]` (and `a[q][p]`) with a unitary similarity.
fn rotate(a: &mut [Complex64], d: usize, p: usize, q: usize) {
    let g = a[p * d + q];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let app = a[p * d + p].re;
    let aqq = a[q * d + q].re;
    // skip pivots that are already below rounding level of the diagonal
    if abs_g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * d + q] = Complex64::new(0.0, 0.0);
        a[q * d + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = g / abs_g;
    let theta = (aqq - app) / (2.0 * abs_g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // R = [[c, s], [-s conj(e), c conj(e)]] acting on columns p, q; then rows with R*.
    let pc = phase.conj();
    for k in 0..d {
        let akp = a[k * d + p];
        let akq = a[k * d + q];
        a[k * d + p] = akp * c - akq * pc * s;
        a[k * d + q] = akp * s + akq * pc * c;
    }
    for k in 0..d {
        let apk = a[p * d + k];
        let aqk = a[q * d + k];
        a[p * d + k] = apk * c - aqk * phase * s;
        a[q * d + k] = apk * s + aqk * phase * c;
    }
    a[p * d + p] = Complex64::new(app - t * abs_g, 0.0);
    a[q * d + q] = Complex64::new(aqq + t * abs_g, 0.0);
    a[p * d + q] = Complex64::new(0.0, 0.0);
    a[q * d + p] = Complex64::new(0.0, 0.0);
}

/// `min eigenvalue >= -tol * max(1, max |h_ij|)`.
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> Result<bool> {
    assert!(tol >= 0.0, "PSD tolerance must be non-negative");
    let eig = hermitian_eigenvalues(h, DEFAULT_EIGEN_TOL)?;
    Ok(eig.min() >= -tol * h.scale())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{bell_projector, DenseMatrix};

    fn herm(rows: usize, data: &[f64]) -> HermitianMatrix {
        HermitianMatrix::new(DenseMatrix::from_real(rows, rows, data).unwrap()).unwrap()
    }

    fn assert_spectrum(h: &HermitianMatrix, expected: &[f64]) {
        let r = hermitian_eigenvalues(h, DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(r.eigenvalues.len(), expected.len());
        for (got, want) in r.eigenvalues.iter().zip(expected) {
            assert!(
                (got - want).abs() < 1e-12,
                "{:?} vs {:?}",
                r.eigenvalues,
                expected
            );
        }
        assert!(r.off_diagonal_residual <= DEFAULT_EIGEN_TOL * h.scale());
    }

    #[test]
    fn diagonal_input() {
        assert_spectrum(
            &herm(3, &[3., 0., 0., 0., 1., 0., 0., 0., 2.]),
            &[1., 2., 3.],
        );
    }

    #[test]
    fn pauli_x() {
        assert_spectrum(&herm(2, &[0., 1., 1., 0.]), &[-1., 1.]);
    }

    #[test]
    fn pauli_y_complex() {
        let m = DenseMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_spectrum(&HermitianMatrix::new(m).unwrap(), &[-1., 1.]);
    }

    #[test]
    fn bell_projector_three() {
        let mut expected = vec![0.0; 8];
        expected.push(3.0);
        assert_spectrum(&bell_projector(3), &expected);
    }

    #[test]
    fn one_by_one() {
        assert_spectrum(&herm(1, &[-4.5]), &[-4.5]);
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(
            &HermitianMatrix::new(DenseMatrix::identity(4)).unwrap(),
            DEFAULT_PSD_TOL
        )
        .unwrap());
        assert!(!is_psd(&herm(2, &[1., 0., 0., -0.5]), DEFAULT_PSD_TOL).unwrap());
        assert!(is_psd(&bell_projector(3), DEFAULT_PSD_TOL).unwrap());
    }
}
