//! Seeded random matrices. All generators use ChaCha8 so streams are stable
//! across platforms and releases.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CMat, RMat, I};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of sample `index` in a run seeded by `seed` (splitmix64 finalizer).
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Symmetric matrix with independent entries uniform in `[-1, 1]` on and
/// above the diagonal.
pub fn symmetric(dim: usize, rng: &mut impl Rng) -> RMat {
    let mut m = RMat::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.random_range(-1.0..=1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

pub fn real(rows: usize, cols: usize, rng: &mut impl Rng) -> RMat {
    RMat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

pub fn complex(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    })
}

pub fn complex_symmetric(dim: usize, rng: &mut impl Rng) -> CMat {
    let m = complex(dim, dim, rng);
    (&m + m.transpose()) * Complex64::new(0.5, 0.0)
}

pub fn hermitian(dim: usize, rng: &mut impl Rng) -> CMat {
    let m = complex(dim, dim, rng);
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `exp(iH)` with `H` a random Hermitian matrix.
pub fn unitary(dim: usize, rng: &mut impl Rng) -> CMat {
    (hermitian(dim, rng) * I).exp()
}

/// Random element of `U(dim - l, l)`: `exp(η K)` with `K` anti-Hermitian and
/// `η = diag(+1 × (dim - l), -1 × l)`, so `a† η a = η`.
pub fn pseudo_unitary(dim: usize, l: usize, rng: &mut impl Rng) -> CMat {
    let k = hermitian(dim, rng) * I;
    let eta = signature_diagonal(dim, l).map(|v| Complex64::new(v, 0.0));
    (eta * k).exp()
}

/// `diag(+1 × (dim - l), -1 × l)`.
pub fn signature_diagonal(dim: usize, l: usize) -> RMat {
    RMat::from_fn(dim, dim, |i, j| match (i == j, i < dim - l) {
        (false, _) => 0.0,
        (true, true) => 1.0,
        (true, false) => -1.0,
    })
}

/// A random invertible complex matrix, kept away from singularity by adding
/// a multiple of the identity.
pub fn invertible_complex(dim: usize, rng: &mut impl Rng) -> CMat {
    complex(dim, dim, rng) + CMat::identity(dim, dim) * Complex64::new(2.0, 0.0)
}
