//! The map family, its two-term split, transpose compositions and Choi matrices.
//!
//! Tensor layout: an element of `M_n (x) M_n` is indexed by `(i*n + k, j*n + l)`.
//! The Choi matrix `sum e_ij (x) Phi(e_ij)` puts the input factor outermost, so
//! entry `(i*n^2 + r, j*n^2 + s)` is `Phi(e_ij)[r][s]`. Block matrices
//! `[Phi(e_ij)]_{i,j<k}` use the same convention.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, HermitianMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
}

impl MapParams {
    pub fn new(alpha: f64, beta: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!(
                "n must be at least 3, got {n}"
            )));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "alpha and beta must be finite, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta, n })
    }

    /// Shorthand for the `n = 3` member.
    pub fn n3(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 3)
    }

    pub fn output_dim(&self) -> usize {
        self.n * self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    /// `A^t (x) 1 + 1 (x) A + Tr(A)(alpha 1 + beta B)`
    Phi,
    /// `A^t (x) 1 + Tr(A)/2 (alpha 1 + beta B)`, n = 3 only
    Phi1,
    /// `1 (x) A + Tr(A)/2 (alpha 1 + beta B)`, n = 3 only
    Phi2,
    /// `Phi(A^t)`
    PhiComposeTranspose,
    /// `Phi1(A^t)`, n = 3 only
    Phi1ComposeTranspose,
}

impl MapKind {
    pub const ALL: [MapKind; 5] = [
        MapKind::Phi,
        MapKind::Phi1,
        MapKind::Phi2,
        MapKind::PhiComposeTranspose,
        MapKind::Phi1ComposeTranspose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Phi => "phi",
            MapKind::Phi1 => "phi1",
            MapKind::Phi2 => "phi2",
            MapKind::PhiComposeTranspose => "phi_t",
            MapKind::Phi1ComposeTranspose => "phi1_t",
        }
    }

    fn requires_n3(self) -> bool {
        matches!(
            self,
            MapKind::Phi1 | MapKind::Phi2 | MapKind::Phi1ComposeTranspose
        )
    }

    pub fn check_admissible(self, p: &MapParams) -> Result<()> {
        if self.requires_n3() && p.n != 3 {
            return Err(Error::UnsupportedDimension {
                what: self.name(),
                n: p.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "unknown map kind `{s}` (expected one of phi, phi1, phi2, phi_t, phi1_t)"
                ))
            })
    }
}

/// Which of `L (x) 1`, `1 (x) R` appear and with what trace weight.
struct Terms<'a> {
    left: Option<&'a DenseMatrix>,
    right: Option<&'a DenseMatrix>,
    trace_weight: f64,
}

fn assemble(p: &MapParams, terms: &Terms<'_>, trace: Complex64) -> DenseMatrix {
    let n = p.n;
    let c = trace * terms.trace_weight;
    let shift = c * p.alpha;
    let bell = c * p.beta;
    DenseMatrix::from_fn(n * n, n * n, |r, s| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (s / n, s % n);
        let mut v = Complex64::new(0.0, 0.0);
        if let Some(left) = terms.left {
            if k == l {
                v += left[(i, j)];
            }
        }
        if let Some(right) = terms.right {
            if i == j {
                v += right[(k, l)];
            }
        }
        if r == s {
            v += shift;
        }
        if i == k && j == l {
            v += bell;
        }
        v
    })
}

/// Image of the `n x n` matrix `a` under the map `kind` with parameters `p`.
pub fn apply_map(kind: MapKind, p: &MapParams, a: &DenseMatrix) -> Result<DenseMatrix> {
    kind.check_admissible(p)?;
    if a.rows() != p.n || a.cols() != p.n {
        return Err(Error::DimensionMismatch(format!(
            "map input must be {n}x{n}, got {}x{}",
            a.rows(),
            a.cols(),
            n = p.n
        )));
    }
    let at = a.transpose();
    let terms = match kind {
        MapKind::Phi => Terms {
            left: Some(&at),
            right: Some(a),
            trace_weight: 1.0,
        },
        MapKind::PhiComposeTranspose => Terms {
            left: Some(a),
            right: Some(&at),
            trace_weight: 1.0,
        },
        MapKind::Phi1 => Terms {
            left: Some(&at),
            right: None,
            trace_weight: 0.5,
        },
        MapKind::Phi1ComposeTranspose => Terms {
            left: Some(a),
            right: None,
            trace_weight: 0.5,
        },
        MapKind::Phi2 => Terms {
            left: None,
            right: Some(a),
            trace_weight: 0.5,
        },
    };
    Ok(assemble(p, &terms, a.trace()))
}

/// `[Phi_kind(e_ij)]_{i,j=1}^k` as a dense `k n^2` square matrix.
fn unit_block_matrix(kind: MapKind, p: &MapParams, k: usize) -> Result<DenseMatrix> {
    kind.check_admissible(p)?;
    let n = p.n;
    let d = n * n;
    let mut out = DenseMatrix::zeros(k * d, k * d);
    for i in 0..k {
        for j in 0..k {
            let mut e = DenseMatrix::zeros(n, n);
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let img = apply_map(kind, p, &e)?;
            for r in 0..d {
                for s in 0..d {
                    out[(i * d + r, j * d + s)] = img[(r, s)];
                }
            }
        }
    }
    Ok(out)
}

/// Choi matrix `sum_{ij} e_ij (x) Phi_kind(e_ij)`, of dimension `n^3`.
pub fn choi_matrix(kind: MapKind, p: &MapParams) -> Result<HermitianMatrix> {
    HermitianMatrix::new(unit_block_matrix(kind, p, p.n)?)
}

/// `[Phi(e_ij)]_{i,j=1}^k` for `2 <= k <= n`.
pub fn block_matrix(p: &MapParams, k: usize) -> Result<HermitianMatrix> {
    if !(2..=p.n).contains(&k) {
        return Err(Error::OutOfRange(format!(
            "block size k must satisfy 2 <= k <= n = {}, got {k}",
            p.n
        )));
    }
    HermitianMatrix::new(unit_block_matrix(MapKind::Phi, p, k)?)
}

/// `(i_k (x) Phi_kind)(m)` for `m` in `M_k (x) M_n`, applied block by block.
pub fn apply_extended(
    kind: MapKind,
    p: &MapParams,
    k: usize,
    m: &DenseMatrix,
) -> Result<DenseMatrix> {
    kind.check_admissible(p)?;
    let n = p.n;
    if k == 0 || m.rows() != k * n || m.cols() != k * n {
        return Err(Error::DimensionMismatch(format!(
            "extended map with k = {k}, n = {n} needs a {d}x{d} input, got {}x{}",
            m.rows(),
            m.cols(),
            d = k * n
        )));
    }
    let d = n * n;
    let mut out = DenseMatrix::zeros(k * d, k * d);
    for bi in 0..k {
        for bj in 0..k {
            let block = DenseMatrix::from_fn(n, n, |r, s| m[(bi * n + r, bj * n + s)]);
            let img = apply_map(kind, p, &block)?;
            for r in 0..d {
                for s in 0..d {
                    out[(bi * d + r, bj * d + s)] = img[(r, s)];
                }
            }
        }
    }
    Ok(out)
}

/// `(i_k (x) Phi)(m)`.
pub fn apply_extended_map(p: &MapParams, k: usize, m: &DenseMatrix) -> Result<DenseMatrix> {
    apply_extended(MapKind::Phi, p, k, m)
}
