//! Numeric ground truth that does not use any closed-form region.
//!
//! * k-positivity through the block matrix `[Phi(e_ij)]_{i,j<=k}`, which is a
//!   complete test for this family because it is self-adjoint and equivariant
//!   (`Phi(U X U*) = V Phi(X) V*` with `V = conj(U) (x) U`). The criterion is
//!   not exposed for arbitrary maps.
//! * complete positivity through the Choi matrix.
//! * Monte-Carlo falsification with Haar-random pure states. A `true` verdict
//!   from [`monte_carlo_falsify`] only means that no counterexample was found.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    derive_seed, gaussian_matrix, hermitian_eigenvalues, is_psd, kron, random_pure_state,
    random_unitary, rng_from_seed, DenseMatrix, HermitianMatrix, DEFAULT_EIGEN_TOL,
};
use crate::maps::{apply_extended, apply_map, block_matrix, choi_matrix, MapKind, MapParams};
use crate::regions::{Classification, BETA_CP_BRANCH};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleVerdict {
    pub predicate: String,
    pub verdict: bool,
    /// Smallest eigenvalue of the tested matrix.
    pub min_eigenvalue: f64,
    /// Unit vector in `C^k (x) C^n` whose projector is mapped to a matrix with
    /// a negative eigenvalue. Present only when `verdict` is false.
    #[serde(skip)]
    pub witness: Option<DenseMatrix>,
    /// Smallest eigenvalue of `(i_k (x) Phi)(|w><w|)` for the witness `w`.
    pub witness_min_eigenvalue: Option<f64>,
}

fn min_eigenvalue(h: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h, DEFAULT_EIGEN_TOL)?.min())
}

/// Normalized `sum_{i<k} e_i (x) e_i` in `C^k (x) C^n`.
fn maximally_entangled(k: usize, n: usize) -> DenseMatrix {
    let amp = Complex64::new(1.0 / (k as f64).sqrt(), 0.0);
    DenseMatrix::from_fn(k * n, 1, |r, _| {
        if r % n == r / n {
            amp
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `(i_k (x) Phi_kind)(|x><x|)` as a Hermitian matrix.
pub fn image_of_state(
    kind: MapKind,
    p: &MapParams,
    k: usize,
    x: &DenseMatrix,
) -> Result<HermitianMatrix> {
    let proj = DenseMatrix::outer(x, x)?;
    HermitianMatrix::new(apply_extended(kind, p, k, &proj)?)
}

fn verdict_for(
    predicate: String,
    h: &HermitianMatrix,
    kind: MapKind,
    p: &MapParams,
    k: usize,
    tol: f64,
) -> Result<OracleVerdict> {
    let min = min_eigenvalue(h)?;
    let verdict = min >= -tol * h.scale();
    let (witness, witness_min_eigenvalue) = if verdict {
        (None, None)
    } else {
        let w = maximally_entangled(k, p.n);
        let wmin = min_eigenvalue(&image_of_state(kind, p, k, &w)?)?;
        (Some(w), Some(wmin))
    };
    Ok(OracleVerdict {
        predicate,
        verdict,
        min_eigenvalue: min,
        witness,
        witness_min_eigenvalue,
    })
}

/// k-positivity of `Phi` via the block matrix (k >= 2) or `Phi(e_11)` (k = 1).
pub fn numeric_k_positive(p: &MapParams, k: usize, tol: f64) -> Result<OracleVerdict> {
    if k == 0 || k > p.n {
        return Err(Error::OutOfRange(format!(
            "k must satisfy 1 <= k <= n = {}, got {k}",
            p.n
        )));
    }
    let h = if k == 1 {
        let mut e11 = DenseMatrix::zeros(p.n, p.n);
        e11[(0, 0)] = Complex64::new(1.0, 0.0);
        HermitianMatrix::new(apply_map(MapKind::Phi, p, &e11)?)?
    } else {
        block_matrix(p, k)?
    };
    verdict_for(format!("{k}_positive"), &h, MapKind::Phi, p, k, tol)
}

/// Complete positivity of `kind` via its Choi matrix.
pub fn numeric_completely_positive(
    p: &MapParams,
    kind: MapKind,
    tol: f64,
) -> Result<OracleVerdict> {
    let c = choi_matrix(kind, p)?;
    verdict_for(
        format!("completely_positive[{kind}]"),
        &c,
        kind,
        p,
        p.n,
        tol,
    )
}

/// Samples `trials` Haar-random pure states of `C^k (x) C^n` and reports the
/// most negative eigenvalue of their images under `i_k (x) Phi`.
///
/// Trial `t` uses the stream `derive_seed(seed, t)`; the result does not
/// depend on how trials are scheduled.
pub fn monte_carlo_falsify(
    p: &MapParams,
    k: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<OracleVerdict> {
    if trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let results: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = random_pure_state(k * p.n, derive_seed(seed, t as u64));
            let img = image_of_state(MapKind::Phi, p, k, &x)?;
            Ok((min_eigenvalue(&img)?, img.scale()))
        })
        .collect::<Result<_>>()?;
    let (worst, &(min, scale)) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("at least one trial");
    let verdict = min >= -tol * scale;
    let witness = (!verdict).then(|| random_pure_state(k * p.n, derive_seed(seed, worst as u64)));
    Ok(OracleVerdict {
        predicate: format!("monte_carlo_{k}_positive"),
        verdict,
        min_eigenvalue: min,
        witness_min_eigenvalue: witness.as_ref().map(|_| min),
        witness,
    })
}

/// `max_t ||Phi(U X U*) - V Phi(X) V*||_max / max(1, ||Phi(X)||_max)` with
/// `V = conj(U) (x) U`, over `trials` Haar unitaries `U` and Gaussian `X`.
pub fn equivariance_residual(p: &MapParams, trials: usize, seed: u64) -> Result<f64> {
    let residuals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let u = random_unitary(p.n, derive_seed(seed, 2 * t as u64));
            let mut rng = rng_from_seed(derive_seed(seed, 2 * t as u64 + 1));
            let x = gaussian_matrix(p.n, p.n, &mut rng);
            equivariance_defect(p, &u, &x)
        })
        .collect::<Result<_>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Relative equivariance defect for one unitary `u` and input `x`.
pub fn equivariance_defect(p: &MapParams, u: &DenseMatrix, x: &DenseMatrix) -> Result<f64> {
    let lhs = apply_map(MapKind::Phi, p, &(&(u * x) * &u.adjoint()))?;
    let v = kron(&u.conj(), u);
    let phi_x = apply_map(MapKind::Phi, p, x)?;
    let rhs = &(&v * &phi_x) * &v.adjoint();
    Ok(lhs.max_abs_diff(&rhs) / phi_x.max_abs().max(1.0))
}

/// Complete positivity and complete copositivity agree numerically at `p`.
pub fn cp_ccp_equivalence(p: &MapParams, tol: f64) -> Result<bool> {
    let cp = is_psd(&choi_matrix(MapKind::Phi, p)?, tol)?;
    let ccp = is_psd(&choi_matrix(MapKind::PhiComposeTranspose, p)?, tol)?;
    Ok(cp == ccp)
}

fn probe_seed(p: &MapParams) -> u64 {
    derive_seed(p.alpha.to_bits(), p.beta.to_bits())
}

/// `Phi1` is completely copositive exactly when `Phi2` is completely positive,
/// and `Phi1 + Phi2 = Phi` on a random probe.
pub fn decomposition_consistency(p: &MapParams, tol: f64) -> Result<bool> {
    let ccp1 = is_psd(&choi_matrix(MapKind::Phi1ComposeTranspose, p)?, tol)?;
    let cp2 = is_psd(&choi_matrix(MapKind::Phi2, p)?, tol)?;
    let mut rng = rng_from_seed(probe_seed(p));
    let a = gaussian_matrix(p.n, p.n, &mut rng);
    let sum = &apply_map(MapKind::Phi1, p, &a)? + &apply_map(MapKind::Phi2, p, &a)?;
    let whole = apply_map(MapKind::Phi, p, &a)?;
    Ok(ccp1 == cp2 && sum.max_abs_diff(&whole) <= 1e-12 * whole.max_abs().max(1.0))
}

/// Numeric counterpart of [`crate::regions::classify`].
///
/// `decomposable_sufficient` is `C_{Phi1 o T} >= 0` and `C_{Phi2} >= 0`, the
/// certificate behind the closed-form sufficient condition.
pub fn numeric_classify(p: &MapParams, tol: f64) -> Result<Classification> {
    let c = numeric_flags(p, tol)?;
    c.check_invariants()?;
    Ok(c)
}

/// Same as [`numeric_classify`] without the invariant check, so that
/// round-off on a boundary shows up as a flag rather than an error.
pub fn numeric_flags(p: &MapParams, tol: f64) -> Result<Classification> {
    let positive = numeric_k_positive(p, 1, tol)?.verdict;
    if p.n != 3 {
        return Ok(Classification {
            positive,
            ..Classification::default()
        });
    }
    let two_positive = numeric_k_positive(p, 2, tol)?.verdict;
    let completely_positive = numeric_completely_positive(p, MapKind::Phi, tol)?.verdict;
    let completely_copositive =
        numeric_completely_positive(p, MapKind::PhiComposeTranspose, tol)?.verdict;
    let decomposable_sufficient = numeric_completely_positive(p, MapKind::Phi2, tol)?.verdict
        && numeric_completely_positive(p, MapKind::Phi1ComposeTranspose, tol)?.verdict;
    Ok(Classification {
        positive,
        two_positive,
        completely_positive,
        completely_copositive,
        positive_not_cp: positive && !completely_positive,
        two_positive_not_cp: two_positive && !completely_positive,
        decomposable_sufficient,
        decomposable_and_two_positive: p.beta <= BETA_CP_BRANCH
            && decomposable_sufficient
            && two_positive
            && !completely_positive,
        higher_order: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_PSD_TOL;

    fn p(alpha: f64, beta: f64) -> MapParams {
        MapParams::n3(alpha, beta).unwrap()
    }

    #[test]
    fn two_positive_on_boundary() {
        let v = numeric_k_positive(&p(1.0, 0.0), 2, DEFAULT_PSD_TOL).unwrap();
        assert!(v.verdict);
        assert!(v.min_eigenvalue.abs() < 1e-12);
        assert!(v.witness.is_none());
    }

    #[test]
    fn not_two_positive_with_witness() {
        let v = numeric_k_positive(&p(0.5, 0.0), 2, DEFAULT_PSD_TOL).unwrap();
        assert!(!v.verdict);
        assert!((v.min_eigenvalue + 0.5).abs() < 1e-12);
        let w = v.witness.unwrap();
        assert!((w.frobenius_norm_sqr() - 1.0).abs() < 1e-14);
        // the witness projector is the k-block scaled by 1/k
        assert!((v.witness_min_eigenvalue.unwrap() - v.min_eigenvalue / 2.0).abs() < 1e-12);
    }

    #[test]
    fn one_positive_uses_phi_e11() {
        assert!(
            numeric_k_positive(&p(0.0, 1.0), 1, DEFAULT_PSD_TOL)
                .unwrap()
                .verdict
        );
        let v = numeric_k_positive(&p(-0.5, 1.0), 1, DEFAULT_PSD_TOL).unwrap();
        assert!(!v.verdict);
        assert_eq!(v.witness_min_eigenvalue.unwrap(), v.min_eigenvalue);
        assert!(numeric_k_positive(&p(0.0, 1.0), 4, DEFAULT_PSD_TOL).is_err());
        assert!(numeric_k_positive(&p(0.0, 1.0), 0, DEFAULT_PSD_TOL).is_err());
    }

    #[test]
    fn complete_positivity() {
        assert!(
            numeric_completely_positive(&p(1.0, 0.0), MapKind::Phi, DEFAULT_PSD_TOL)
                .unwrap()
                .verdict
        );
        assert!(
            !numeric_completely_positive(&p(0.9, 0.0), MapKind::Phi, DEFAULT_PSD_TOL)
                .unwrap()
                .verdict
        );
        assert!(
            numeric_completely_positive(&p(3.0, -1.0), MapKind::Phi2, DEFAULT_PSD_TOL)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn monte_carlo_finds_violation() {
        let v = monte_carlo_falsify(&p(0.5, 0.0), 2, 500, 1, DEFAULT_PSD_TOL).unwrap();
        let block = numeric_k_positive(&p(0.5, 0.0), 2, DEFAULT_PSD_TOL).unwrap();
        assert!(!v.verdict || !block.verdict);
        assert!(v.min_eigenvalue <= -1e-6 || block.witness_min_eigenvalue.unwrap() <= -1e-6);
    }

    #[test]
    fn monte_carlo_in_cp_interior() {
        let v = monte_carlo_falsify(&p(5.0, 0.0), 3, 500, 2, DEFAULT_PSD_TOL).unwrap();
        assert!(v.verdict);
        assert!(v.witness.is_none());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_falsify(&p(0.2, -0.3), 2, 64, 99, DEFAULT_PSD_TOL).unwrap();
        let b = monte_carlo_falsify(&p(0.2, -0.3), 2, 64, 99, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(a.min_eigenvalue.to_bits(), b.min_eigenvalue.to_bits());
    }

    #[test]
    fn monte_carlo_witness_reproduces_minimum() {
        let q = p(0.5, -1.5);
        let v = monte_carlo_falsify(&q, 2, 200, 5, DEFAULT_PSD_TOL).unwrap();
        if let Some(w) = &v.witness {
            let m = min_eigenvalue(&image_of_state(MapKind::Phi, &q, 2, w).unwrap()).unwrap();
            assert!(m <= v.min_eigenvalue + 2.0 * DEFAULT_PSD_TOL);
        }
    }

    #[test]
    fn equivariance_holds() {
        assert!(equivariance_residual(&p(0.7, -1.9), 100, 3).unwrap() <= 1e-9);
        let q4 = MapParams::new(2.0, -1.0, 4).unwrap();
        assert!(equivariance_residual(&q4, 100, 4).unwrap() <= 1e-9);
    }

    #[test]
    fn identity_is_an_equivariance_fixed_point() {
        let q = p(1.5, 2.5);
        let u = random_unitary(3, 8);
        assert!(equivariance_defect(&q, &u, &DenseMatrix::identity(3)).unwrap() < 1e-13);
    }

    #[test]
    fn cp_ccp_examples() {
        for (a, b) in [(1.0, 0.0), (0.0, 0.0), (3.0, -1.0)] {
            assert!(cp_ccp_equivalence(&p(a, b), DEFAULT_PSD_TOL).unwrap());
        }
    }

    #[test]
    fn decomposition_examples() {
        for (a, b) in [(3.0, -1.0), (1.0, -1.0), (0.0, 1.0)] {
            assert!(decomposition_consistency(&p(a, b), DEFAULT_PSD_TOL).unwrap());
        }
        let q = p(3.0, -1.0);
        assert!(is_psd(&choi_matrix(MapKind::Phi2, &q).unwrap(), DEFAULT_PSD_TOL).unwrap());
        let q = p(1.0, -1.0);
        assert!(!is_psd(&choi_matrix(MapKind::Phi2, &q).unwrap(), DEFAULT_PSD_TOL).unwrap());
    }

    #[test]
    fn numeric_classify_matches_closed_form_examples() {
        for (a, b) in [
            (5.0, 0.0),
            (0.5, 0.0),
            (-1.0, 0.0),
            (2.9, -1.0),
            (2.7, -1.0),
        ] {
            let q = p(a, b);
            assert_eq!(
                numeric_classify(&q, DEFAULT_PSD_TOL).unwrap(),
                crate::regions::classify(&q).unwrap(),
                "({a}, {b})"
            );
        }
    }
}
