//! Complex `n`-planes in `ℂ²ⁿ`, real-Lagrangian planes and the
//! correspondence `J ↔ V″` with the `-i` eigenspace of `J`.
//!
//! Also the parabolic subgroup `P` stabilizing `Π = {(x, 0)}` inside
//! `Sp(2n, ℂ)`, and its intersection with the pseudo-unitary group of `Q_l`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    self, blocks, cmax_abs, complexify, conj, cunit_scale, from_blocks, CMat, I,
};
use crate::sampling;
use crate::serial::{self, ComplexRows};
use crate::symplectic::{self, j0, CompatibleStructure, ComplexStructure, SymplecticForm};
use crate::tol;
use crate::{Error, Result};

/// Calibration of the Hermitian form `h(w₁, w₂) = i ω(w₁, w̄₂)` against the
/// taming index: `l` is the number of positive eigenvalues of `H`.
///
/// On `V″` we have `J v = -i v`, so `ω(v, v̄) = i vᵀ S v̄` with `S = -Ω J`
/// and therefore `h(v, v) = -S(v, v̄)`. Negative directions of `S` are
/// positive directions of `h`. Checked against the `J₀ Q_l` family in the
/// tests.
pub const INDEX_COUNTS_POSITIVE: bool = true;

/// Taming index read off a signature `(p, q)` of `H`.
pub fn index_from_signature(signature: (usize, usize)) -> usize {
    if INDEX_COUNTS_POSITIVE {
        signature.0
    } else {
        signature.1
    }
}

/// An `n`-dimensional complex subspace of `ℂ²ⁿ` given by a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexRows", into = "ComplexRows")]
pub struct ComplexPlane {
    n: usize,
    basis: CMat,
}

impl TryFrom<ComplexRows> for ComplexPlane {
    type Error = Error;
    fn try_from(rows: ComplexRows) -> Result<Self> {
        ComplexPlane::new(serial::from_complex_rows(&rows)?)
    }
}

impl From<ComplexPlane> for ComplexRows {
    fn from(p: ComplexPlane) -> Self {
        serial::to_complex_rows(&p.basis)
    }
}

impl ComplexPlane {
    /// Requires a `2n × n` basis of full column rank.
    pub fn new(basis: CMat) -> Result<Self> {
        let n = basis.ncols();
        if n == 0 || basis.nrows() != 2 * n {
            return Err(Error::InvalidDimension(format!(
                "basis must be 2n×n, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        let rank = linalg::numerical_rank(&linalg::csingular_values(&basis), tol::PLANE_RANK_REL);
        if rank != n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        Ok(Self { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// `W̄`.
    pub fn conjugate(&self) -> Self {
        Self { n: self.n, basis: conj(&self.basis) }
    }

    /// The same plane with basis `W · m`.
    pub fn rebased(&self, m: &CMat) -> Result<Self> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.n),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        Self::new(&self.basis * m)
    }

    /// Orthonormal basis of the same plane.
    pub fn orthonormal(&self) -> CMat {
        linalg::column_space(&self.basis, self.n)
    }

    /// Equality as subspaces: `rank [W₁ | W₂] = n` after orthonormalizing.
    pub fn same_plane(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        let (a, b) = (self.orthonormal(), other.orthonormal());
        let stacked = CMat::from_fn(2 * self.n, 2 * self.n, |i, j| {
            if j < self.n {
                a[(i, j)]
            } else {
                b[(i, j - self.n)]
            }
        });
        linalg::numerical_rank(&linalg::csingular_values(&stacked), tol::PLANE_RANK_REL) == self.n
    }
}

fn check_form(w: &ComplexPlane, form: &SymplecticForm) -> Result<()> {
    if form.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", form.dim(), form.n()),
            found: format!("{}x{}", w.basis().nrows(), w.n()),
        });
    }
    Ok(())
}

/// `[W | W̄]` as a square matrix.
fn with_conjugate(w: &ComplexPlane) -> CMat {
    let n = w.n();
    let b = w.basis();
    CMat::from_fn(2 * n, 2 * n, |i, j| if j < n { b[(i, j)] } else { b[(i, j - n)].conj() })
}

/// The `-i` eigenspace `V″` of `J`, as the column space of `½(I + iJ)`.
pub fn j_to_plane(j: &CompatibleStructure) -> Result<ComplexPlane> {
    let n = j.n();
    let (_, minus) = symplectic::projectors(j.structure());
    let rank = linalg::numerical_rank(&linalg::csingular_values(&minus), tol::PLANE_RANK_REL);
    if rank != n {
        return Err(Error::RankDeficient { rank, expected: n });
    }
    ComplexPlane::new(linalg::column_space(&minus, n))
}

/// `Wᵀ Ω W`, the restriction of `ω` to `W` extended bilinearly.
pub fn isotropy_defect(w: &ComplexPlane, form: &SymplecticForm) -> Result<f64> {
    check_form(w, form)?;
    let b = w.basis();
    Ok(cmax_abs(&(b.transpose() * complexify(form.omega()) * b)))
}

fn lagrangian_violation(w: &ComplexPlane, form: &SymplecticForm) -> Result<Option<String>> {
    let defect = isotropy_defect(w, form)?;
    let scale = cunit_scale(w.basis()).powi(2) * linalg::unit_scale(form.omega());
    if defect > tol::ALGEBRAIC * scale {
        return Ok(Some(format!("not isotropic (‖WᵀΩW‖ = {defect:e})")));
    }
    let full = with_conjugate(w);
    let rank = linalg::numerical_rank(&linalg::csingular_values(&full), tol::PLANE_RANK_REL);
    if rank != 2 * w.n() {
        return Ok(Some(format!("W ∩ W̄ ≠ 0 (rank [W | W̄] = {rank})")));
    }
    Ok(None)
}

/// Isotropic with `W ∩ W̄ = 0`.
pub fn is_real_lagrangian(w: &ComplexPlane, form: &SymplecticForm) -> bool {
    matches!(lagrangian_violation(w, form), Ok(None))
}

/// `J = [W | W̄] diag(-iI, iI) [W | W̄]⁻¹` together with the largest
/// imaginary entry found before truncation.
pub fn plane_to_j_with_residue(
    w: &ComplexPlane,
    form: &SymplecticForm,
) -> Result<(CompatibleStructure, f64)> {
    check_form(w, form)?;
    if let Some(reason) = lagrangian_violation(w, form)? {
        return Err(Error::NotRealLagrangian(reason));
    }
    let n = w.n();
    let full = with_conjugate(w);
    let inv = linalg::cguarded_inverse(&full, tol::SINGULAR_REL)
        .ok_or_else(|| Error::NotRealLagrangian("[W | W̄] is singular".into()))?;
    let eig = CMat::from_fn(2 * n, 2 * n, |i, j| match (i == j, i < n) {
        (true, true) => -I,
        (true, false) => I,
        _ => Complex64::new(0.0, 0.0),
    });
    let jc = &full * eig * inv;
    let residue = linalg::max_abs(&linalg::imag_part(&jc));
    if residue > tol::REALITY * cunit_scale(&jc) {
        return Err(Error::RealityFailure(residue));
    }
    let j = CompatibleStructure::new(ComplexStructure::new(linalg::real_part(&jc))?, form.clone())?;
    Ok((j, residue))
}

/// The compatible structure whose `-i` eigenspace is `W`.
pub fn plane_to_j(w: &ComplexPlane, form: &SymplecticForm) -> Result<CompatibleStructure> {
    plane_to_j_with_residue(w, form).map(|(j, _)| j)
}

/// `H_{ab} = i ω(w_a, w̄_b)`.
pub fn hermitian_matrix(w: &ComplexPlane, form: &SymplecticForm) -> Result<CMat> {
    check_form(w, form)?;
    let b = w.basis();
    Ok(b.transpose() * complexify(form.omega()) * conj(b) * I)
}

/// `(positive, negative)` eigenvalue counts of `H`.
pub fn hermitian_signature(w: &ComplexPlane, form: &SymplecticForm) -> Result<(usize, usize)> {
    if let Some(reason) = lagrangian_violation(w, form)? {
        return Err(Error::NotRealLagrangian(reason));
    }
    let h = hermitian_matrix(w, form)?;
    linalg::inertia(&linalg::hermitian_eigenvalues(&h), tol::SIGNATURE_REL)
}

/// The plane spanned by `e_j + i f_j` for `j ≤ n - l` and `e_j - i f_j`
/// after, in the standard symplectic basis `f_j = e_{j+n}`.
pub fn canonical_plane(n: usize, l: usize) -> Result<ComplexPlane> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    if l > n {
        return Err(Error::InvalidIndex { l, n });
    }
    let basis = CMat::from_fn(2 * n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else if i == j + n {
            if j < n - l {
                I
            } else {
                -I
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ComplexPlane::new(basis)
}

/// Outcome of testing `g ∈ Sp(2n, ℂ)` for membership in `P`.
#[derive(Debug, Clone, PartialEq)]
pub enum Parabolic {
    /// `g = [[a, a e], [0, a⁻ᵀ]]` with `e = eᵀ`.
    Member { a: CMat, e: CMat },
    /// The lower-left block is not zero; its size is reported.
    Outside { lower_left: f64 },
}

/// `gᵀ J₀ g = J₀` over `ℂ`, within tolerance.
pub fn complex_sp_deviation(g: &CMat) -> Result<f64> {
    let dim = g.nrows();
    if dim == 0 || dim % 2 != 0 || g.ncols() != dim {
        return Err(Error::InvalidDimension("g must be an even square matrix".into()));
    }
    let omega = complexify(&j0(dim / 2));
    Ok(cmax_abs(&(g.transpose() * &omega * g - &omega)))
}

fn check_complex_sp(g: &CMat) -> Result<()> {
    let dev = complex_sp_deviation(g)?;
    if dev > tol::ALGEBRAIC * cunit_scale(g).powi(2) {
        return Err(Error::NotSymplectic(dev));
    }
    Ok(())
}

/// Splits an element of `P` into `(a, e)`; elements of `Sp(2n, ℂ)` outside
/// `P` are reported, not errors.
pub fn parabolic_decompose(g: &CMat) -> Result<Parabolic> {
    check_complex_sp(g)?;
    let (a, b, c, _) = blocks(g);
    let lower_left = cmax_abs(&c);
    if lower_left > tol::ALGEBRAIC * cunit_scale(g) {
        return Ok(Parabolic::Outside { lower_left });
    }
    let a_inv = linalg::cguarded_inverse(&a, tol::SINGULAR_REL).ok_or(Error::SingularBlock("a"))?;
    let e = a_inv * b;
    let asym = cmax_abs(&(&e - e.transpose()));
    if asym > tol::ALGEBRAIC * cunit_scale(&e) * cunit_scale(g).powi(2) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(Parabolic::Member { a, e: linalg::csymmetrize(&e) })
}

/// `[[a, a e], [0, a⁻ᵀ]]`.
pub fn parabolic_assemble(a: &CMat, e: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n || e.nrows() != n || e.ncols() != n {
        return Err(Error::InvalidDimension("a and e must be equal nonempty square matrices".into()));
    }
    let asym = cmax_abs(&(e - e.transpose()));
    if asym > tol::ALGEBRAIC * cunit_scale(e) {
        return Err(Error::NotSymmetric(asym));
    }
    let a_inv = linalg::cguarded_inverse(a, tol::SINGULAR_REL).ok_or(Error::SingularBlock("a"))?;
    Ok(from_blocks(a, &(a * e), &CMat::zeros(n, n), &a_inv.transpose()))
}

/// `gᵀ Q_l ḡ = Q_l`.
pub fn preserves_q_metric(g: &CMat, l: usize) -> Result<bool> {
    let n = g.nrows() / 2;
    let q = complexify(&symplectic::q_matrix(n, l)?);
    if g.nrows() != 2 * n || g.ncols() != 2 * n {
        return Err(Error::InvalidDimension("g must be an even square matrix".into()));
    }
    let dev = cmax_abs(&(g.transpose() * &q * conj(g) - q));
    Ok(dev <= tol::ALGEBRAIC * cunit_scale(g).powi(2))
}

/// `a* 1_{n-l,l} a = 1_{n-l,l}`.
pub fn is_pseudo_unitary(a: &CMat, l: usize) -> Result<bool> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::InvalidDimension("a must be a nonempty square matrix".into()));
    }
    if l > n {
        return Err(Error::InvalidIndex { l, n });
    }
    let eta = complexify(&sampling::signature_diagonal(n, l));
    let dev = cmax_abs(&(a.adjoint() * &eta * a - eta));
    Ok(dev <= tol::ALGEBRAIC * cunit_scale(a).powi(2))
}
