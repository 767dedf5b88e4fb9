//! Closed-form eigenvalue multisets and their comparison with numeric spectra.
//!
//! Four matrices have explicit spectra:
//!
//! | source     | matrix                         | dimension |
//! |------------|--------------------------------|-----------|
//! | `PhiE11`   | `Phi(e_11)`                    | `n^2`     |
//! | `ChoiPhi`  | Choi matrix of `Phi`, n = 3    | 27        |
//! | `Block2`   | `[Phi(e_ij)]_{i,j=1}^2`, n = 3 | 18        |
//! | `ChoiPhi2` | Choi matrix of `Phi2`, n = 3   | 27        |
//!
//! For the two Choi matrices the multiplicities and scaling below are the
//! ones obtained by direct diagonalization: `C_Phi` has `alpha - 1` six times,
//! `alpha + 1` fifteen times and no `alpha` eigenvalue, and the paired roots of
//! `C_Phi2` are `(alpha + (6 + 3b +- t)/2) / 2`. The sign of every eigenvalue,
//! and hence every region, is unaffected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, matrix_unit, EigenResult, HermitianMatrix, DEFAULT_EIGEN_TOL,
};
use crate::maps::{apply_map, block_matrix, choi_matrix, MapKind, MapParams};
use crate::regions::smallest_cubic_root;

/// Default relative tolerance for closed-form vs numeric comparisons.
pub const DEFAULT_SPECTRUM_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumSource {
    PhiE11,
    ChoiPhi,
    Block2,
    ChoiPhi2,
}

impl SpectrumSource {
    pub const ALL: [SpectrumSource; 4] = [
        SpectrumSource::PhiE11,
        SpectrumSource::ChoiPhi,
        SpectrumSource::Block2,
        SpectrumSource::ChoiPhi2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumSource::PhiE11 => "phi_e11",
            SpectrumSource::ChoiPhi => "choi_phi",
            SpectrumSource::Block2 => "block2",
            SpectrumSource::ChoiPhi2 => "choi_phi2",
        }
    }

    pub fn dimension(self, n: usize) -> usize {
        match self {
            SpectrumSource::PhiE11 => n * n,
            SpectrumSource::ChoiPhi | SpectrumSource::ChoiPhi2 => 27,
            SpectrumSource::Block2 => 18,
        }
    }

    /// Closed-form spectrum at `p` (`n` is only used by `PhiE11`).
    pub fn closed_form(self, p: &MapParams) -> ClosedFormSpectrum {
        match self {
            SpectrumSource::PhiE11 => spectrum_phi_e11(p),
            SpectrumSource::ChoiPhi => spectrum_choi(p.alpha, p.beta),
            SpectrumSource::Block2 => spectrum_block2(p.alpha, p.beta),
            SpectrumSource::ChoiPhi2 => spectrum_choi_phi2(p.alpha, p.beta),
        }
    }

    /// The matrix whose spectrum the closed form describes.
    pub fn matrix(self, p: &MapParams) -> Result<HermitianMatrix> {
        if self != SpectrumSource::PhiE11 && p.n != 3 {
            return Err(Error::UnsupportedDimension {
                what: self.name(),
                n: p.n,
            });
        }
        match self {
            SpectrumSource::PhiE11 => {
                HermitianMatrix::new(apply_map(MapKind::Phi, p, &matrix_unit(p.n, 1, 1)?)?)
            }
            SpectrumSource::ChoiPhi => choi_matrix(MapKind::Phi, p),
            SpectrumSource::Block2 => block_matrix(p, 2),
            SpectrumSource::ChoiPhi2 => choi_matrix(MapKind::Phi2, p),
        }
    }

    pub fn numeric(self, p: &MapParams) -> Result<EigenResult> {
        hermitian_eigenvalues(&self.matrix(p)?, DEFAULT_EIGEN_TOL)
    }
}

impl fmt::Display for SpectrumSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpectrumSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpectrumSource::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown spectrum source `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSpectrum {
    /// `(eigenvalue, multiplicity)` pairs, in the order the factors appear.
    pub entries: Vec<(f64, usize)>,
    pub source: SpectrumSource,
}

impl ClosedFormSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Expanded multiset, ascending.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|&(x, m)| std::iter::repeat_n(x, m))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(x, _)| x)
            .fold(f64::INFINITY, f64::min)
    }

    /// `sum value * multiplicity`, which equals the matrix trace.
    pub fn trace(&self) -> f64 {
        self.entries.iter().map(|&(x, m)| x * m as f64).sum()
    }
}

/// Spectrum of `Phi_{alpha,beta,n}(e_11)`.
pub fn spectrum_phi_e11(p: &MapParams) -> ClosedFormSpectrum {
    let (alpha, beta, n) = (p.alpha, p.beta, p.n);
    let nf = n as f64;
    let root = (nf * nf * beta * beta - 4.0 * (nf - 2.0) * beta + 4.0).sqrt();
    ClosedFormSpectrum {
        entries: vec![
            (alpha, n * (n - 2)),
            (1.0 + alpha, 2 * (n - 1)),
            (alpha + (2.0 + nf * beta - root) / 2.0, 1),
            (alpha + (2.0 + nf * beta + root) / 2.0, 1),
        ],
        source: SpectrumSource::PhiE11,
    }
}

/// Spectrum of the Choi matrix of `Phi_{alpha,beta,3}`.
pub fn spectrum_choi(alpha: f64, beta: f64) -> ClosedFormSpectrum {
    let s = (9.0 * beta * beta - 10.0 * beta + 17.0).sqrt();
    ClosedFormSpectrum {
        entries: vec![
            (alpha - 1.0, 6),
            (alpha + 1.0, 15),
            (alpha + (3.0 + 3.0 * beta - s) / 2.0, 3),
            (alpha + (3.0 + 3.0 * beta + s) / 2.0, 3),
        ],
        source: SpectrumSource::ChoiPhi,
    }
}

/// Spectrum of `[Phi_{alpha,beta,3}(e_ij)]_{i,j=1}^2`.
///
/// The cubic factor contributes `alpha + r` twice for each root `r` of
/// `x^3 + (-2-3b) x^2 + (-2+4b) x + 2b`.
pub fn spectrum_block2(alpha: f64, beta: f64) -> ClosedFormSpectrum {
    let mut entries = vec![
        (2.0 + alpha, 1),
        (alpha - 1.0, 1),
        (1.0 + alpha, 7),
        (alpha, 3),
    ];
    let roots = smallest_cubic_root(beta).all_real_roots;
    entries.extend(roots.iter().map(|r| (alpha + r, 2)));
    ClosedFormSpectrum {
        entries,
        source: SpectrumSource::Block2,
    }
}

/// Spectrum of the Choi matrix of `Phi2[alpha, beta]`.
pub fn spectrum_choi_phi2(alpha: f64, beta: f64) -> ClosedFormSpectrum {
    let t = (9.0 * beta * beta - 28.0 * beta + 36.0).sqrt();
    ClosedFormSpectrum {
        entries: vec![
            (alpha / 2.0, 21),
            ((alpha + (6.0 + 3.0 * beta - t) / 2.0) / 2.0, 3),
            ((alpha + (6.0 + 3.0 * beta + t) / 2.0) / 2.0, 3),
        ],
        source: SpectrumSource::ChoiPhi2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub source: SpectrumSource,
    pub max_abs_deviation: f64,
    pub matched: bool,
    /// `(closed_form, numeric)` after sorting both ascending.
    pub pairing: Vec<(f64, f64)>,
}

/// Pairs both multisets in ascending order and compares them.
///
/// `tol` is relative to `max(1, largest |closed-form eigenvalue|)`.
pub fn verify_spectrum(
    closed: &ClosedFormSpectrum,
    numeric: &EigenResult,
    tol: f64,
) -> Result<SpectrumReport> {
    let cf = closed.values();
    if cf.len() != numeric.eigenvalues.len() {
        return Err(Error::CountMismatch {
            closed: cf.len(),
            numeric: numeric.eigenvalues.len(),
        });
    }
    let mut num = numeric.eigenvalues.clone();
    num.sort_by(f64::total_cmp);
    let scale = cf.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let pairing: Vec<(f64, f64)> = cf.into_iter().zip(num).collect();
    let max_abs_deviation = pairing
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SpectrumReport {
        source: closed.source,
        max_abs_deviation,
        matched: max_abs_deviation <= tol * scale,
        pairing,
    })
}

/// Closed form vs numeric diagonalization of `source` at `p`.
pub fn check_source(source: SpectrumSource, p: &MapParams, tol: f64) -> Result<SpectrumReport> {
    let numeric = source.numeric(p)?;
    verify_spectrum(&source.closed_form(p), &numeric, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, beta: f64) -> MapParams {
        MapParams::n3(alpha, beta).unwrap()
    }

    fn numeric(source: SpectrumSource, q: &MapParams) -> EigenResult {
        source.numeric(q).unwrap()
    }

    #[test]
    fn phi_e11_origin() {
        let s = spectrum_phi_e11(&p(0.0, 0.0));
        assert_eq!(s.entries, vec![(0.0, 3), (1.0, 4), (0.0, 1), (2.0, 1)]);
        assert_eq!(s.values(), vec![0., 0., 0., 0., 1., 1., 1., 1., 2.]);
    }

    #[test]
    fn phi_e11_n4() {
        let s = spectrum_phi_e11(&MapParams::new(1.0, 0.0, 4).unwrap());
        assert_eq!(s.entries, vec![(1.0, 8), (2.0, 6), (1.0, 1), (3.0, 1)]);
        assert_eq!(s.total_multiplicity(), 16);
    }

    #[test]
    fn multiplicity_totals() {
        for n in 3..=5 {
            let q = MapParams::new(0.3, -0.7, n).unwrap();
            assert_eq!(spectrum_phi_e11(&q).total_multiplicity(), n * n);
        }
        for (a, b) in [(0.0, 0.0), (1.7, -2.2), (-3.0, 3.5)] {
            assert_eq!(spectrum_choi(a, b).total_multiplicity(), 27);
            assert_eq!(spectrum_block2(a, b).total_multiplicity(), 18);
            assert_eq!(spectrum_choi_phi2(a, b).total_multiplicity(), 27);
        }
    }

    #[test]
    fn choi_spectrum_on_cp_boundary() {
        let s = spectrum_choi(1.0, 0.0);
        let zeros = s.values().iter().filter(|v| v.abs() < 1e-15).count();
        assert_eq!(zeros, 6);
        assert_eq!(s.min(), 0.0);
        assert_eq!(spectrum_choi(0.0, 0.0).min(), -1.0);
    }

    #[test]
    fn choi_spectrum_trace_matches_matrix() {
        let mut rng = crate::linalg::rng_from_seed(17);
        use rand::Rng;
        for _ in 0..10 {
            let (a, b) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let s = spectrum_choi(a, b);
            assert!((s.trace() - (27.0 * a + 18.0 + 9.0 * b)).abs() < 1e-11);
            let c = choi_matrix(MapKind::Phi, &p(a, b)).unwrap();
            assert!((s.trace() - c.trace()).abs() < 1e-11);
        }
    }

    #[test]
    fn block2_at_one_zero() {
        let s = spectrum_block2(1.0, 0.0);
        let s3 = 3f64.sqrt();
        let mut want = vec![3.0, 0.0];
        want.extend([2.0; 7]);
        want.extend([1.0; 3]);
        want.extend([2.0 - s3, 2.0 - s3, 1.0, 1.0, 2.0 + s3, 2.0 + s3]);
        want.sort_by(f64::total_cmp);
        for (g, w) in s.values().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(s.min().abs() < 1e-15);
    }

    #[test]
    fn choi_phi2_origin_and_boundary() {
        let s = spectrum_choi_phi2(0.0, 0.0);
        assert_eq!(s.entries, vec![(0.0, 21), (0.0, 3), (3.0, 3)]);
        let alpha = (-3.0 + 73f64.sqrt()) / 2.0;
        assert!(spectrum_choi_phi2(alpha, -1.0).min().abs() < 1e-14);
    }

    #[test]
    fn choi_phi2_sign_tracks_decomposability_condition() {
        for &(a, b) in &[
            (0.0, 1.0),
            (-0.1, 1.0),
            (2.8, -1.0),
            (2.7, -1.0),
            (0.5, 0.0),
        ] {
            let closed_min = spectrum_choi_phi2(a, b).min();
            let t = (9.0 * b * b - 28.0 * b + 36.0_f64).sqrt();
            let cond = a >= 0.0 && a >= (-(6.0 + 3.0 * b) + t) / 2.0;
            assert_eq!(closed_min >= 0.0, cond, "({a}, {b})");
        }
    }

    #[test]
    fn numeric_matches_closed_form() {
        let q = p(1.0, -1.0);
        for source in SpectrumSource::ALL {
            let r = check_source(source, &q, DEFAULT_SPECTRUM_TOL).unwrap();
            assert!(r.matched, "{source}: {}", r.max_abs_deviation);
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let q = p(0.5, 0.5);
        let mut eig = numeric(SpectrumSource::ChoiPhi, &q);
        eig.eigenvalues[10] += 1e-3;
        let r = verify_spectrum(&spectrum_choi(0.5, 0.5), &eig, DEFAULT_SPECTRUM_TOL).unwrap();
        assert!(!r.matched);
        assert!((r.max_abs_deviation - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn count_mismatch_is_an_error() {
        let eig = numeric(SpectrumSource::Block2, &p(0.0, 0.0));
        assert!(matches!(
            verify_spectrum(&spectrum_choi(0.0, 0.0), &eig, DEFAULT_SPECTRUM_TOL),
            Err(Error::CountMismatch {
                closed: 27,
                numeric: 18
            })
        ));
    }

    #[test]
    fn three_by_three_only_sources_reject_larger_n() {
        let q = MapParams::new(0.0, 0.0, 4).unwrap();
        assert!(SpectrumSource::ChoiPhi.matrix(&q).is_err());
        assert!(SpectrumSource::PhiE11.matrix(&q).is_ok());
    }
}
