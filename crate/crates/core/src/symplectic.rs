//! Real symplectic linear algebra: forms, symplectic bases, compatible
//! complex structures and their taming index, canonical forms `J₀Q_l`, and
//! sampling from `Sp(2n, ℝ)`.
//!
//! Conventions. A form is stored as its Gram matrix `Ω`, so
//! `ω(X, Y) = Xᵀ Ω Y`. The standard form is `J₀ = [[0, -I], [I, 0]]`, which
//! is also the standard complex structure. The symmetric form attached to a
//! compatible `J` is `S = -Ω J`; with this sign `(J₀, J₀)` gives `S = I`,
//! and the taming index `l` is half the number of negative eigenvalues of
//! `S`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    self, complexify, max_abs, real_column_space, sym_eigen, unit_scale, CMat, RMat, I,
};
use crate::sampling;
use crate::serial::{self, Rows};
use crate::tol;
use crate::{Error, Result};

/// Gram matrix of a nondegenerate antisymmetric bilinear form on `ℝ²ⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Rows", into = "Rows")]
pub struct SymplecticForm {
    n: usize,
    omega: RMat,
}

impl SymplecticForm {
    pub fn new(omega: RMat) -> Result<Self> {
        let dim = omega.nrows();
        if dim == 0 || dim % 2 != 0 || omega.ncols() != dim {
            return Err(Error::InvalidDimension(format!(
                "form must be a nonempty even square matrix, got {}x{}",
                omega.nrows(),
                omega.ncols()
            )));
        }
        let asym = max_abs(&(&omega + omega.transpose()));
        if asym > tol::ALGEBRAIC * unit_scale(&omega) {
            return Err(Error::NotAntisymmetric(asym));
        }
        let sv = linalg::singular_values(&omega);
        let (top, bottom) = (sv[0], sv[dim - 1]);
        if top == 0.0 || bottom <= tol::DEGENERACY_REL * top {
            return Err(Error::Degenerate { step: 0, pivot: bottom });
        }
        Ok(Self { n: dim / 2, omega })
    }

    /// The standard form `J₀`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        Ok(Self { n, omega: j0(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn omega(&self) -> &RMat {
        &self.omega
    }

    /// `ω(x, y)` for real column vectors.
    pub fn eval(&self, x: &RMat, y: &RMat) -> f64 {
        (x.transpose() * &self.omega * y)[(0, 0)]
    }

    pub fn is_standard(&self) -> bool {
        self.omega == j0(self.n)
    }
}

impl TryFrom<Rows> for SymplecticForm {
    type Error = Error;
    fn try_from(rows: Rows) -> Result<Self> {
        Self::new(serial::from_rows(&rows)?)
    }
}

impl From<SymplecticForm> for Rows {
    fn from(f: SymplecticForm) -> Rows {
        serial::to_rows(&f.omega)
    }
}

/// A real linear complex structure `J`, `J² = -I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Rows", into = "Rows")]
pub struct ComplexStructure {
    n: usize,
    j: RMat,
}

impl ComplexStructure {
    pub fn new(j: RMat) -> Result<Self> {
        let dim = j.nrows();
        if dim == 0 || dim % 2 != 0 || j.ncols() != dim {
            return Err(Error::InvalidDimension(format!(
                "complex structure must be a nonempty even square matrix, got {}x{}",
                j.nrows(),
                j.ncols()
            )));
        }
        let dev = square_plus_identity(&j);
        if dev > tol::ALGEBRAIC * unit_scale(&j).powi(2) {
            return Err(Error::NotComplexStructure(dev));
        }
        Ok(Self { n: dim / 2, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat {
        &self.j
    }

    pub fn into_matrix(self) -> RMat {
        self.j
    }

    /// `g J g⁻¹`.
    pub fn conjugated(&self, g: &RMat) -> Result<Self> {
        let g_inv = linalg::guarded_inverse(g, tol::SINGULAR_REL)
            .ok_or(Error::SingularBlock("g"))?;
        Self::new(g * &self.j * g_inv)
    }
}

impl TryFrom<Rows> for ComplexStructure {
    type Error = Error;
    fn try_from(rows: Rows) -> Result<Self> {
        Self::new(serial::from_rows(&rows)?)
    }
}

impl From<ComplexStructure> for Rows {
    fn from(j: ComplexStructure) -> Rows {
        serial::to_rows(&j.j)
    }
}

/// A complex structure compatible with a symplectic form, together with its
/// taming index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibleStructure {
    base: ComplexStructure,
    form: SymplecticForm,
    index: usize,
}

impl CompatibleStructure {
    pub fn new(base: ComplexStructure, form: SymplecticForm) -> Result<Self> {
        if !is_compatible(&base, &form)? {
            return Err(Error::NotCompatible("Jᵀ Ω J ≠ Ω".into()));
        }
        let index = taming_index(&base, &form)?;
        Ok(Self { base, form, index })
    }

    /// Wraps a matrix compatible with the standard form.
    pub fn standard(j: RMat) -> Result<Self> {
        let n = j.nrows() / 2;
        Self::new(ComplexStructure::new(j)?, SymplecticForm::standard(n)?)
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.base
    }

    pub fn matrix(&self) -> &RMat {
        self.base.matrix()
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }
}

fn square_plus_identity(j: &RMat) -> f64 {
    let dim = j.nrows();
    max_abs(&(j * j + RMat::identity(dim, dim)))
}

fn check_dims(j: &RMat, form: &SymplecticForm) -> Result<()> {
    if j.nrows() != form.dim() || j.ncols() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", form.dim()),
            found: format!("{}x{}", j.nrows(), j.ncols()),
        });
    }
    Ok(())
}

/// `J₀ = [[0, -I], [I, 0]]` in `n × n` blocks.
pub fn j0(n: usize) -> RMat {
    RMat::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            -1.0
        } else if i >= n && j + n == i {
            1.0
        } else {
            0.0
        }
    })
}

/// The standard symplectic form on `ℝ²ⁿ`.
pub fn standard_form(n: usize) -> Result<SymplecticForm> {
    SymplecticForm::standard(n)
}

/// `Q_l = diag(1_{n-l,l}, 1_{n-l,l})` with `1_{n-l,l} = diag(+1 × (n-l), -1 × l)`.
pub fn q_matrix(n: usize, l: usize) -> Result<RMat> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    if l > n {
        return Err(Error::InvalidIndex { l, n });
    }
    let eta = sampling::signature_diagonal(n, l);
    Ok(linalg::from_blocks(&eta, &RMat::zeros(n, n), &RMat::zeros(n, n), &eta))
}

/// The canonical compatible structure `J₀ Q_l` of index `l`.
pub fn canonical_structure(n: usize, l: usize) -> Result<RMat> {
    Ok(j0(n) * q_matrix(n, l)?)
}

/// Builds a symplectic basis by the inductive reduction: pick a pair
/// `(X, Y)` with `ω(X, Y) = -1`, pass to the ω-annihilator of `{X, Y}` and
/// repeat. The pair is chosen by maximal `|ω|` on the current subspace.
///
/// The returned `B` has columns `X₁ … Xₙ, Y₁ … Yₙ` and satisfies
/// `Bᵀ Ω B = J₀`.
pub fn build_symplectic_basis(form: &SymplecticForm) -> Result<RMat> {
    let n = form.n();
    let omega = form.omega();
    let scale = max_abs(omega);
    let mut sub = RMat::identity(2 * n, 2 * n);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);

    for step in 0..n {
        let restricted = sub.transpose() * omega * &sub;
        let k = sub.ncols();
        let (mut a, mut b, mut pivot) = (0, 1, 0.0_f64);
        for i in 0..k {
            for j in (i + 1)..k {
                if restricted[(i, j)].abs() > pivot.abs() {
                    (a, b, pivot) = (i, j, restricted[(i, j)]);
                }
            }
        }
        if pivot.abs() <= tol::DEGENERACY_REL * scale {
            return Err(Error::Degenerate { step, pivot });
        }
        let x = sub.column(a).into_owned();
        let y = sub.column(b).into_owned() * (-1.0 / pivot);

        if step + 1 < n {
            let x_m = RMat::from_column_slice(2 * n, 1, x.as_slice());
            let y_m = RMat::from_column_slice(2 * n, 1, y.as_slice());
            // ω(x, y) = -1, so u ↦ u - ω(y, u) x + ω(x, u) y kills both pairings.
            let wx = x_m.transpose() * omega * &sub;
            let wy = y_m.transpose() * omega * &sub;
            let projected = &sub - &x_m * wy + &y_m * wx;
            sub = real_column_space(&projected, 2 * (n - step - 1));
        }
        xs.push(x);
        ys.push(y);
    }
    xs.extend(ys);
    Ok(RMat::from_columns(&xs))
}

/// `J² = -I` and `Jᵀ Ω J = Ω`, both within tolerance.
pub fn is_compatible(j: &ComplexStructure, form: &SymplecticForm) -> Result<bool> {
    let m = j.matrix();
    check_dims(m, form)?;
    let scale = unit_scale(m).powi(2);
    if square_plus_identity(m) > tol::ALGEBRAIC * scale {
        return Ok(false);
    }
    let omega = form.omega();
    let dev = max_abs(&(m.transpose() * omega * m - omega));
    Ok(dev <= tol::ALGEBRAIC * scale * unit_scale(omega))
}

/// Half the number of negative eigenvalues of `S = -Ω J`.
pub fn taming_index(j: &ComplexStructure, form: &SymplecticForm) -> Result<usize> {
    let m = j.matrix();
    check_dims(m, form)?;
    let s = -(form.omega() * m);
    let asym = max_abs(&(&s - s.transpose()));
    if asym > tol::ALGEBRAIC * unit_scale(&s) * unit_scale(m) {
        return Err(Error::NotCompatible(format!("S = -ΩJ is not symmetric ({asym:e})")));
    }
    let (vals, _) = sym_eigen(&s);
    let (_, neg) = linalg::inertia(&vals, tol::SIGNATURE_REL)?;
    if neg % 2 != 0 {
        return Err(Error::NotCompatible(format!("odd number of negative directions ({neg})")));
    }
    Ok(neg / 2)
}

/// Finds `g ∈ Sp(2n, ℝ)` with `g⁻¹ J g = J₀ Q_l`.
///
/// Builds a basis that is both symplectic and orthogonal for `S = -ΩJ`:
/// on the current `J`-invariant subspace take an eigenvector `X` of the
/// restricted `S` with `S(X, X) = σ = ±1` (positive directions first), set
/// `Y = σ J X`, then pass to the common `ω`/`S` complement of `{X, JX}`.
pub fn canonical_conjugator(j: &ComplexStructure, form: &SymplecticForm) -> Result<(RMat, usize)> {
    check_dims(j.matrix(), form)?;
    if !form.is_standard() {
        return Err(Error::NonStandardForm);
    }
    if !is_compatible(j, form)? {
        return Err(Error::NotCompatible("Jᵀ Ω J ≠ Ω".into()));
    }
    let l = taming_index(j, form)?;
    let n = form.n();
    let jm = j.matrix();
    let omega = form.omega();
    let s = linalg::symmetrize(&-(omega * jm));
    let band = tol::SIGNATURE_REL * linalg::singular_values(&s)[0];

    let mut sub = RMat::identity(2 * n, 2 * n);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for step in 0..n {
        let sigma = if step < n - l { 1.0 } else { -1.0 };
        let restricted = sub.transpose() * &s * &sub;
        let (vals, vecs) = sym_eigen(&restricted);
        let k = if sigma > 0.0 { vals.len() - 1 } else { 0 };
        let lambda = vals[k];
        if sigma * lambda <= band {
            return Err(Error::Degenerate { step, pivot: lambda });
        }
        let x = &sub * vecs.column(k) / lambda.abs().sqrt();
        let y = jm * &x * sigma;

        if step + 1 < n {
            let wx = x.transpose() * omega * &sub;
            let wy = y.transpose() * omega * &sub;
            let projected = &sub - &x * wy + &y * wx;
            sub = real_column_space(&projected, 2 * (n - step - 1));
        }
        xs.push(x);
        ys.push(y);
    }
    xs.extend(ys);
    Ok((RMat::from_columns(&xs), l))
}

/// `gᵀ Ω g = Ω` within tolerance.
pub fn sp_membership(g: &RMat, form: &SymplecticForm) -> Result<bool> {
    check_dims(g, form)?;
    let omega = form.omega();
    let dev = max_abs(&(g.transpose() * omega * g - omega));
    Ok(dev <= tol::ALGEBRAIC * unit_scale(g).powi(2) * unit_scale(omega))
}

/// Seeded element `exp(Ω⁻¹ Sym)` of `Sp(2n, ℝ)` for the standard form, with
/// `Sym` symmetric and entries uniform in `[-1, 1]`.
pub fn random_sp(n: usize, seed: u64) -> Result<RMat> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let sym = sampling::symmetric(2 * n, &mut sampling::rng(seed));
    exp_hamiltonian(&sym)
}

/// `exp(Ω⁻¹ Sym)` for the standard form. `Ω⁻¹ Sym` lies in the symplectic
/// Lie algebra whenever `Sym` is symmetric.
pub fn exp_hamiltonian(sym: &RMat) -> Result<RMat> {
    let dim = sym.nrows();
    if dim == 0 || dim % 2 != 0 || sym.ncols() != dim {
        return Err(Error::InvalidDimension("generator must be an even square matrix".into()));
    }
    let dev = max_abs(&(sym - sym.transpose()));
    if dev > tol::ALGEBRAIC * unit_scale(sym) {
        return Err(Error::NotSymmetric(dev));
    }
    // Ω⁻¹ = -J₀ for the standard form.
    let generator = -(j0(dim / 2) * sym);
    Ok(generator.exp())
}

/// `(J⁺, J⁻) = (½(I - iJ), ½(I + iJ))`, the projections onto the `+i` and
/// `-i` eigenspaces of `J` in `ℂ²ⁿ`.
pub fn projectors(j: &ComplexStructure) -> (CMat, CMat) {
    let dim = j.matrix().nrows();
    let id = CMat::identity(dim, dim);
    let ij = complexify(j.matrix()) * I;
    let half = Complex64::new(0.5, 0.0);
    ((&id - &ij) * half, (&id + &ij) * half)
}
