//! Seeded Haar-random unitaries and pure states.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::DenseMatrix;

/// Derives an independent stream seed for item `index` of a run seeded with `seed`
/// (splitmix64 finalizer over the pair).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// `rows x cols` matrix of i.i.d. standard complex Gaussians.
pub fn gaussian_matrix<R: rand::Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed `d x d` unitary, deterministic per seed.
///
/// Modified Gram-Schmidt on the columns of a complex Gaussian matrix; the
/// implied R factor has a positive real diagonal, which is the phase fix that
/// makes the Q factor Haar.
pub fn random_unitary(d: usize, seed: u64) -> DenseMatrix {
    assert!(d >= 1, "random_unitary needs d >= 1");
    let mut rng = rng_from_seed(seed);
    loop {
        let g = gaussian_matrix(d, d, &mut rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

fn orthonormalize_columns(g: &DenseMatrix) -> Option<DenseMatrix> {
    let d = g.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..g.cols())
        .map(|j| (0..d).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let v = &mut rest[0];
                let proj: Complex64 = qk.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    Some(DenseMatrix::from_fn(d, g.cols(), |i, j| cols[j][i]))
}

/// Haar-random unit vector in `C^d`, as a `d x 1` matrix.
pub fn random_pure_state(d: usize, seed: u64) -> DenseMatrix {
    assert!(d >= 1, "random_pure_state needs d >= 1");
    let mut rng = rng_from_seed(seed);
    loop {
        let v = gaussian_matrix(d, 1, &mut rng);
        let norm = v.frobenius_norm_sqr().sqrt();
        if norm > 1e-12 {
            return v.scale(Complex64::new(1.0 / norm, 0.0));
        }
    }
}
