//! Small dense helpers shared by the geometric modules.
//!
//! Everything here works on `nalgebra::DMatrix`; dimensions are tiny (2n ≤ 8)
//! so clarity wins over blocking or in-place tricks.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest absolute entry of a real matrix.
pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Largest modulus among the entries of a complex matrix.
pub fn cmax_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()))
}

/// `max(1, ‖m‖_max)`, the scale used to turn absolute tolerances into
/// relative ones for matrices that are far from unit size.
pub fn unit_scale(m: &RMat) -> f64 {
    max_abs(m).max(1.0)
}

pub fn cunit_scale(m: &CMat) -> f64 {
    cmax_abs(m).max(1.0)
}

pub fn complexify(m: &RMat) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|c| c.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|c| c.im)
}

pub fn conj(m: &CMat) -> CMat {
    m.map(|c| c.conj())
}

/// Splits a square `2n × 2n` matrix into its four `n × n` blocks.
pub fn blocks<T: nalgebra::Scalar + Copy>(
    m: &DMatrix<T>,
) -> (DMatrix<T>, DMatrix<T>, DMatrix<T>, DMatrix<T>) {
    let n = m.nrows() / 2;
    (
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    )
}

/// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
pub fn from_blocks<T: nalgebra::Scalar + Copy>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    c: &DMatrix<T>,
    d: &DMatrix<T>,
) -> DMatrix<T> {
    let n = a.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)],
        (true, false) => b[(i, j - n)],
        (false, true) => c[(i - n, j)],
        (false, false) => d[(i - n, j - n)],
    })
}

fn to_faer<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> faer::Mat<T> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: nalgebra::Scalar + Copy>(m: faer::MatRef<'_, T>, cols: usize) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), cols, |i, j| m[(i, j)])
}

/// Singular values sorted in decreasing order; empty if the iteration
/// fails to converge.
pub fn singular_values(m: &RMat) -> Vec<f64> {
    to_faer(m).singular_values().unwrap_or_default()
}

pub fn csingular_values(m: &CMat) -> Vec<f64> {
    to_faer(m).singular_values().unwrap_or_default()
}

/// Number of singular values above `rel * σ_max`.
pub fn numerical_rank(sv: &[f64], rel: f64) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Orthonormal basis (in the Euclidean sense) of the column space of `m`,
/// keeping the `rank` leading left singular vectors.
pub fn column_space(m: &CMat, rank: usize) -> CMat {
    let svd = to_faer(m).thin_svd().expect("svd of a small dense matrix");
    from_faer(svd.U(), rank)
}

pub fn real_column_space(m: &RMat, rank: usize) -> RMat {
    let svd = to_faer(m).thin_svd().expect("svd of a small dense matrix");
    from_faer(svd.U(), rank)
}

/// Right singular vectors paired with the singular values, both in
/// decreasing order of singular value.
pub fn right_singular(m: &RMat) -> (Vec<f64>, RMat) {
    let svd = to_faer(m).thin_svd().expect("svd of a small dense matrix");
    let k = m.nrows().min(m.ncols());
    let s = (0..k).map(|i| svd.S()[i]).collect();
    (s, from_faer(svd.V(), k))
}

/// Eigen-decomposition of the symmetric part of `m`, eigenvalues ascending.
pub fn sym_eigen(m: &RMat) -> (Vec<f64>, RMat) {
    let sym = symmetrize(m);
    let eig = to_faer(&sym).self_adjoint_eigen(faer::Side::Lower).expect("symmetric eigensolver");
    let vals = (0..sym.nrows()).map(|i| eig.S()[i]).collect();
    (vals, from_faer(eig.U(), sym.ncols()))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    to_faer(&herm).self_adjoint_eigenvalues(faer::Side::Lower).expect("hermitian eigensolver")
}

/// Counts `(positive, negative)` eigenvalues, refusing to decide when any
/// eigenvalue lies within `rel * max|λ|` of zero.
pub fn inertia(eigenvalues: &[f64], rel: f64) -> crate::Result<(usize, usize)> {
    let top = eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let band = rel * top;
    let mut pos = 0;
    let mut neg = 0;
    for &v in eigenvalues {
        if v.abs() <= band || !v.is_finite() {
            return Err(crate::Error::IndeterminateSignature { eigenvalue: v, band });
        }
        if v > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Ok((pos, neg))
}

/// Inverse through LU, `None` when the smallest singular value is below
/// `rel * σ_max`.
pub fn guarded_inverse(m: &RMat, rel: f64) -> Option<RMat> {
    let sv = singular_values(m);
    let top = *sv.first()?;
    let bottom = *sv.last()?;
    if top == 0.0 || bottom <= rel * top {
        return None;
    }
    m.clone().lu().try_inverse()
}

pub fn cguarded_inverse(m: &CMat, rel: f64) -> Option<CMat> {
    let sv = csingular_values(m);
    let top = *sv.first()?;
    let bottom = *sv.last()?;
    if top == 0.0 || bottom <= rel * top {
        return None;
    }
    m.clone().lu().try_inverse()
}

pub fn symmetrize(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

pub fn csymmetrize(m: &CMat) -> CMat {
    (m + m.transpose()) * Complex64::new(0.5, 0.0)
}
