//! Pointwise integrability residuals of the twistor structure and the
//! sampled joint kernel over an `Sp(2n, ℝ)` orbit of compatible structures.
//!
//! The conditions are
//!
//! * torsion: `J⁺ T(J⁻X, J⁻Y) = 0`,
//! * curvature: `J⁻ R(J⁺X, J⁺Y) J⁺ = 0`,
//! * curvature of type (0,2): `R(J⁻X, J⁻Y) = 0`,
//!
//! with `J^± = ½(I ∓ iJ)`. Every residual is the largest entry over pairs
//! of standard basis vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::linalg::{self, cmax_abs, complexify, max_abs, CMat, RMat};
use crate::sampling;
use crate::serial::{self, Rows};
use crate::symplectic::{self, j0, ComplexStructure};
use crate::tol;
use crate::{Error, Result};

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    Ok(())
}

fn pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..dim).flat_map(move |i| (i + 1..dim).map(move |j| (i, j)))
}

/// Components `T^k_{ij}` of a torsion-like tensor, stored as one
/// antisymmetric `2n × 2n` matrix per output index `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rows>", into = "Vec<Rows>")]
pub struct TorsionTensor {
    n: usize,
    t: Vec<RMat>,
}

impl TryFrom<Vec<Rows>> for TorsionTensor {
    type Error = Error;
    fn try_from(rows: Vec<Rows>) -> Result<Self> {
        TorsionTensor::new(rows.iter().map(|r| serial::from_rows(r)).collect::<Result<_>>()?)
    }
}

impl From<TorsionTensor> for Vec<Rows> {
    fn from(t: TorsionTensor) -> Self {
        t.t.iter().map(serial::to_rows).collect()
    }
}

impl TorsionTensor {
    pub fn new(t: Vec<RMat>) -> Result<Self> {
        let dim = t.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidDimension(format!("need 2n component matrices, got {dim}")));
        }
        for m in &t {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim}x{dim}"),
                    found: format!("{}x{}", m.nrows(), m.ncols()),
                });
            }
            let dev = max_abs(&(m + m.transpose()));
            if dev > tol::ALGEBRAIC * linalg::unit_scale(m) {
                return Err(Error::NotAntisymmetric(dev));
            }
        }
        Ok(Self { n: dim / 2, t })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, t: vec![RMat::zeros(2 * n, 2 * n); 2 * n] })
    }

    /// Entries uniform in `[-1, 1]`, antisymmetrized.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        check_n(n)?;
        let dim = 2 * n;
        let t = (0..dim)
            .map(|_| {
                let a = sampling::real(dim, dim, rng);
                (&a - a.transpose()) * 0.5
            })
            .collect();
        Ok(Self { n, t })
    }

    /// Unit tensors `T^k_{ij} = -T^k_{ji} = 1`, `i < j`, ordered by `k`
    /// then `(i, j)`.
    pub fn basis(n: usize) -> Result<Vec<Self>> {
        check_n(n)?;
        let dim = 2 * n;
        let mut out = Vec::with_capacity(dim * dim * (dim - 1) / 2);
        for k in 0..dim {
            for (i, j) in pairs(dim) {
                let mut t = vec![RMat::zeros(dim, dim); dim];
                t[k][(i, j)] = 1.0;
                t[k][(j, i)] = -1.0;
                out.push(Self { n, t });
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[RMat] {
        &self.t
    }

    /// `T(u, v)` for complex vectors.
    pub fn eval(&self, u: &CMat, v: &CMat) -> CMat {
        let dim = 2 * self.n;
        CMat::from_fn(dim, 1, |k, _| (u.transpose() * complexify(&self.t[k]) * v)[(0, 0)])
    }

    /// `(g·T)(X, Y) = g T(g⁻¹X, g⁻¹Y)`.
    pub fn transformed(&self, g: &RMat) -> Result<Self> {
        let g_inv = invert(g, 2 * self.n)?;
        let pulled: Vec<RMat> = self.t.iter().map(|m| g_inv.transpose() * m * &g_inv).collect();
        let dim = 2 * self.n;
        let t = (0..dim)
            .map(|k| (0..dim).fold(RMat::zeros(dim, dim), |acc, kk| acc + &pulled[kk] * g[(k, kk)]))
            .collect();
        Ok(Self { n: self.n, t })
    }
}

/// Values `R(e_i, e_j)` of a curvature-like tensor, each in `sp(2n, ℝ)` for
/// the standard form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rows>>", into = "Vec<Vec<Rows>>")]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<Vec<RMat>>,
}

impl TryFrom<Vec<Vec<Rows>>> for CurvatureTensor {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Rows>>) -> Result<Self> {
        let r = rows
            .iter()
            .map(|row| row.iter().map(|m| serial::from_rows(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        CurvatureTensor::new(r)
    }
}

impl From<CurvatureTensor> for Vec<Vec<Rows>> {
    fn from(c: CurvatureTensor) -> Self {
        c.r.iter().map(|row| row.iter().map(serial::to_rows).collect()).collect()
    }
}

impl CurvatureTensor {
    pub fn new(r: Vec<Vec<RMat>>) -> Result<Self> {
        let dim = r.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidDimension(format!("need 2n rows of values, got {dim}")));
        }
        let omega = j0(dim / 2);
        for row in &r {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim} values per row"),
                    found: format!("{}", row.len()),
                });
            }
            for m in row {
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{dim}x{dim}"),
                        found: format!("{}x{}", m.nrows(), m.ncols()),
                    });
                }
                let om = &omega * m;
                let dev = max_abs(&(&om - om.transpose()));
                if dev > tol::ALGEBRAIC * linalg::unit_scale(m) {
                    return Err(Error::NotSymplectic(dev));
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let dev = max_abs(&(&r[i][j] + &r[j][i]));
                if dev > tol::ALGEBRAIC * linalg::unit_scale(&r[i][j]) {
                    return Err(Error::NotAntisymmetric(dev));
                }
            }
        }
        Ok(Self { n: dim / 2, r })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 2 * n;
        Ok(Self { n, r: vec![vec![RMat::zeros(dim, dim); dim]; dim] })
    }

    /// `R(e_i, e_j) = -R(e_j, e_i) = values[k]` for the `k`-th pair `i < j`.
    fn from_pair_values(n: usize, values: Vec<RMat>) -> Self {
        let dim = 2 * n;
        let mut r = vec![vec![RMat::zeros(dim, dim); dim]; dim];
        for ((i, j), v) in pairs(dim).zip(values) {
            r[j][i] = -&v;
            r[i][j] = v;
        }
        Self { n, r }
    }

    /// Each value `Ω⁻¹ Sym` with `Sym` uniform symmetric.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        check_n(n)?;
        let dim = 2 * n;
        let values = pairs(dim).map(|_| -(j0(n) * sampling::symmetric(dim, rng))).collect();
        Ok(Self::from_pair_values(n, values))
    }

    /// The given value on the pair `(e_i, e_j)`, `i < j`, and zero elsewhere.
    pub fn single(n: usize, i: usize, j: usize, value: RMat) -> Result<Self> {
        check_n(n)?;
        let dim = 2 * n;
        if i >= j || j >= dim {
            return Err(Error::InvalidParameter(format!("need i < j < {dim}, got ({i}, {j})")));
        }
        let values = pairs(dim).map(|p| if p == (i, j) { value.clone() } else { RMat::zeros(dim, dim) }).collect();
        Self::new(Self::from_pair_values(n, values).r)
    }

    /// Unit tensors: one pair `i < j` carrying `-J₀ E` for `E` running over
    /// the symmetric basis `E_aa`, `E_ab + E_ba`.
    pub fn basis(n: usize) -> Result<Vec<Self>> {
        check_n(n)?;
        let dim = 2 * n;
        let mut sym_basis = Vec::with_capacity(n * (2 * n + 1));
        for a in 0..dim {
            for b in a..dim {
                let mut e = RMat::zeros(dim, dim);
                e[(a, b)] = 1.0;
                e[(b, a)] = 1.0;
                sym_basis.push(-(j0(n) * e));
            }
        }
        let pair_list: Vec<_> = pairs(dim).collect();
        let mut out = Vec::with_capacity(pair_list.len() * sym_basis.len());
        for &p in &pair_list {
            for s in &sym_basis {
                let values = pair_list.iter().map(|&q| if q == p { s.clone() } else { RMat::zeros(dim, dim) }).collect();
                out.push(Self::from_pair_values(n, values));
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize) -> &RMat {
        &self.r[i][j]
    }

    /// `R(u, v) = Σ u_i v_j R(e_i, e_j)` for complex vectors.
    pub fn eval(&self, u: &CMat, v: &CMat) -> CMat {
        let dim = 2 * self.n;
        let mut out = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let c = u[(i, 0)] * v[(j, 0)];
                if c != Complex64::new(0.0, 0.0) {
                    out += complexify(&self.r[i][j]) * c;
                }
            }
        }
        out
    }

    /// `(g·R)(X, Y) = g R(g⁻¹X, g⁻¹Y) g⁻¹`.
    pub fn transformed(&self, g: &RMat) -> Result<Self> {
        let dim = 2 * self.n;
        let g_inv = invert(g, dim)?;
        let conj: Vec<Vec<RMat>> = self.r.iter().map(|row| row.iter().map(|m| g * m * &g_inv).collect()).collect();
        let r = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let mut acc = RMat::zeros(dim, dim);
                        for a in 0..dim {
                            for b in 0..dim {
                                let c = g_inv[(a, i)] * g_inv[(b, j)];
                                if c != 0.0 {
                                    acc += &conj[a][b] * c;
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n: self.n, r })
    }
}

fn invert(g: &RMat, dim: usize) -> Result<RMat> {
    if g.nrows() != dim || g.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: format!("{dim}x{dim}"),
            found: format!("{}x{}", g.nrows(), g.ncols()),
        });
    }
    linalg::guarded_inverse(g, tol::SINGULAR_REL).ok_or(Error::SingularBlock("g"))
}

fn check_structure(n: usize, j: &ComplexStructure) -> Result<()> {
    if j.n() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", 2 * n),
            found: format!("{0}x{0}", 2 * j.n()),
        });
    }
    Ok(())
}

fn column(m: &CMat, k: usize) -> CMat {
    m.columns(k, 1).into_owned()
}

/// Complex torsion-like tensor `r^k(a, b) = (J⁺ T(J⁻e_a, J⁻e_b))_k`, as one
/// `2n × 2n` matrix per `k`.
pub fn torsion_residual_tensor(t: &TorsionTensor, j: &ComplexStructure) -> Result<Vec<CMat>> {
    check_structure(t.n(), j)?;
    let dim = 2 * t.n();
    let (plus, minus) = symplectic::projectors(j);
    let mut out = vec![CMat::zeros(dim, dim); dim];
    for (a, b) in pairs(dim) {
        let v = &plus * t.eval(&column(&minus, a), &column(&minus, b));
        for k in 0..dim {
            out[k][(a, b)] = v[(k, 0)];
            out[k][(b, a)] = -v[(k, 0)];
        }
    }
    Ok(out)
}

/// `max_{a<b} ‖J⁺ T(J⁻e_a, J⁻e_b)‖_max`.
pub fn torsion_residual(t: &TorsionTensor, j: &ComplexStructure) -> Result<f64> {
    Ok(torsion_residual_tensor(t, j)?.iter().map(cmax_abs).fold(0.0, f64::max))
}

/// Complex curvature-like tensor `(a, b) ↦ J⁻ R(J⁺e_a, J⁺e_b) J⁺`.
pub fn curvature_residual_tensor(r: &CurvatureTensor, j: &ComplexStructure) -> Result<Vec<Vec<CMat>>> {
    check_structure(r.n(), j)?;
    let (plus, minus) = symplectic::projectors(j);
    Ok(pair_table(r.n(), |a, b| &minus * r.eval(&column(&plus, a), &column(&plus, b)) * &plus))
}

/// `max_{a<b} ‖J⁻ R(J⁺e_a, J⁺e_b) J⁺‖_max`.
pub fn curvature_residual(r: &CurvatureTensor, j: &ComplexStructure) -> Result<f64> {
    Ok(table_max(&curvature_residual_tensor(r, j)?))
}

/// Complex curvature-like tensor `(a, b) ↦ R(J⁻e_a, J⁻e_b)`.
pub fn curvature_02_residual_tensor(r: &CurvatureTensor, j: &ComplexStructure) -> Result<Vec<Vec<CMat>>> {
    check_structure(r.n(), j)?;
    let (_, minus) = symplectic::projectors(j);
    Ok(pair_table(r.n(), |a, b| r.eval(&column(&minus, a), &column(&minus, b))))
}

/// `max_{a<b} ‖R(J⁻e_a, J⁻e_b)‖_max`.
pub fn curvature_02_residual(r: &CurvatureTensor, j: &ComplexStructure) -> Result<f64> {
    Ok(table_max(&curvature_02_residual_tensor(r, j)?))
}

fn pair_table(n: usize, f: impl Fn(usize, usize) -> CMat) -> Vec<Vec<CMat>> {
    let dim = 2 * n;
    let mut out = vec![vec![CMat::zeros(dim, dim); dim]; dim];
    for (a, b) in pairs(dim) {
        let v = f(a, b);
        out[b][a] = -&v;
        out[a][b] = v;
    }
    out
}

fn table_max(table: &[Vec<CMat>]) -> f64 {
    table.iter().flatten().map(cmax_abs).fold(0.0, f64::max)
}

/// `g·r` for a complex torsion-like tensor given as in
/// [`torsion_residual_tensor`].
pub fn act_on_torsion_like(g: &RMat, r: &[CMat]) -> Result<Vec<CMat>> {
    let dim = r.len();
    let g_inv = complexify(&invert(g, dim)?);
    let gc = complexify(g);
    let pulled: Vec<CMat> = r.iter().map(|m| g_inv.transpose() * m * &g_inv).collect();
    Ok((0..dim).map(|k| (0..dim).fold(CMat::zeros(dim, dim), |acc, kk| acc + &pulled[kk] * gc[(k, kk)])).collect())
}

/// `g·r` for a complex curvature-like tensor given as in
/// [`curvature_residual_tensor`].
pub fn act_on_curvature_like(g: &RMat, r: &[Vec<CMat>]) -> Result<Vec<Vec<CMat>>> {
    let dim = r.len();
    let g_inv = invert(g, dim)?;
    let (gc, gic) = (complexify(g), complexify(&g_inv));
    let conj: Vec<Vec<CMat>> = r.iter().map(|row| row.iter().map(|m| &gc * m * &gic).collect()).collect();
    Ok((0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let mut acc = CMat::zeros(dim, dim);
                    for a in 0..dim {
                        for b in 0..dim {
                            acc += &conj[a][b] * Complex64::new(g_inv[(a, i)] * g_inv[(b, j)], 0.0);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

/// Which integrability condition a kernel computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Torsion,
    Curvature,
    Curvature02,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Torsion, Kind::Curvature, Kind::Curvature02];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Torsion => "torsion",
            Kind::Curvature => "curvature",
            Kind::Curvature02 => "curvature02",
        }
    }

    /// Dimension of the tensor space: `d·C(d, 2)` for torsion and
    /// `C(d, 2)·n(2n + 1)` for curvature, `d = 2n`.
    pub fn component_count(self, n: usize) -> usize {
        let d = 2 * n;
        match self {
            Kind::Torsion => d * d * (d - 1) / 2,
            Kind::Curvature | Kind::Curvature02 => d * (d - 1) / 2 * n * (2 * n + 1),
        }
    }

    /// Polynomial degree of the residual in the entries of `J`.
    fn degree(self) -> i32 {
        match self {
            Kind::Torsion => 3,
            Kind::Curvature => 4,
            Kind::Curvature02 => 2,
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown kind {s:?}")))
    }
}

enum Basis {
    Torsion(Vec<TorsionTensor>),
    Curvature(Vec<CurvatureTensor>),
}

impl Basis {
    fn new(kind: Kind, n: usize) -> Result<Self> {
        Ok(match kind {
            Kind::Torsion => Basis::Torsion(TorsionTensor::basis(n)?),
            Kind::Curvature | Kind::Curvature02 => Basis::Curvature(CurvatureTensor::basis(n)?),
        })
    }

    fn len(&self) -> usize {
        match self {
            Basis::Torsion(b) => b.len(),
            Basis::Curvature(b) => b.len(),
        }
    }

    /// Real and imaginary parts of every residual entry, one column per
    /// basis tensor.
    fn block(&self, kind: Kind, j: &ComplexStructure) -> Result<RMat> {
        let columns: Vec<Vec<Complex64>> = match (self, kind) {
            (Basis::Torsion(b), _) => b
                .iter()
                .map(|t| Ok(torsion_residual_tensor(t, j)?.iter().flat_map(upper_entries).collect()))
                .collect::<Result<_>>()?,
            (Basis::Curvature(b), Kind::Curvature) => b
                .iter()
                .map(|r| Ok(table_entries(&curvature_residual_tensor(r, j)?)))
                .collect::<Result<_>>()?,
            (Basis::Curvature(b), _) => b
                .iter()
                .map(|r| Ok(table_entries(&curvature_02_residual_tensor(r, j)?)))
                .collect::<Result<_>>()?,
        };
        let rows = columns.first().map_or(0, Vec::len);
        Ok(RMat::from_fn(2 * rows, columns.len(), |i, c| {
            let z = columns[c][i / 2];
            if i % 2 == 0 {
                z.re
            } else {
                z.im
            }
        }))
    }
}

fn upper_entries(m: &CMat) -> Vec<Complex64> {
    pairs(m.nrows()).map(|(a, b)| m[(a, b)]).collect()
}

fn table_entries(table: &[Vec<CMat>]) -> Vec<Complex64> {
    pairs(table.len()).flat_map(|(a, b)| table[a][b].iter().copied().collect::<Vec<_>>()).collect()
}

/// The `s`-th sampled structure: `J₀Q_l` for `s = 0`, otherwise
/// `g J₀Q_l g⁻¹` with `g = random_sp(n, sample_seed(seed, s))`.
pub fn sample_structure(n: usize, l: usize, seed: u64, s: usize) -> Result<ComplexStructure> {
    let base = symplectic::canonical_structure(n, l)?;
    if s == 0 {
        return ComplexStructure::new(base);
    }
    let g = symplectic::random_sp(n, sampling::sample_seed(seed, s as u64))?;
    ComplexStructure::new(&g * base * invert(&g, 2 * n)?)
}

/// Result of a joint-kernel computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub kind: Kind,
    pub n: usize,
    pub l: usize,
    pub samples: usize,
    pub components: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Singular values of the stacked system around the rank cut.
    pub singular_tail: Vec<f64>,
    /// Orthonormal kernel vectors in the coordinates of the unit basis.
    #[serde(skip)]
    pub kernel_basis: RMat,
}

/// Counts singular values above `1e-8 · max(σ_max, 1)` and insists on a
/// gap of at least `1e3` across the cut.
pub fn decide_rank(sv: &[f64]) -> Result<usize> {
    let reference = sv.first().copied().unwrap_or(0.0).max(1.0);
    let threshold = tol::KERNEL_RANK_REL * reference;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    if rank > 0 && rank < sv.len() {
        let kept = sv[rank - 1];
        let dropped = sv[rank];
        if dropped > 0.0 && kept / dropped < tol::SPECTRAL_GAP {
            return Err(Error::IndeterminateRank(sv.to_vec()));
        }
    }
    Ok(rank)
}

/// The joint kernel of the residual operator over `samples` structures in
/// the orbit of `J₀Q_l`.
pub fn invariant_kernel(kind: Kind, n: usize, l: usize, samples: usize, seed: u64, exec: Exec) -> Result<KernelReport> {
    check_n(n)?;
    if l > n {
        return Err(Error::InvalidIndex { l, n });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let basis = Basis::new(kind, n)?;
    let components = basis.len();
    let blocks = exec.try_map(samples, |s| {
        let j = sample_structure(n, l, seed, s)?;
        let scale = linalg::unit_scale(j.matrix()).powi(kind.degree());
        Ok::<_, Error>(basis.block(kind, &j)? / scale)
    })?;
    let rows: usize = blocks.iter().map(RMat::nrows).sum::<usize>().max(components);
    let mut stacked = RMat::zeros(rows, components);
    let mut offset = 0;
    for b in &blocks {
        stacked.view_mut((offset, 0), (b.nrows(), components)).copy_from(b);
        offset += b.nrows();
    }
    let (sv, v) = linalg::right_singular(&stacked);
    let rank = decide_rank(&sv)?;
    let lo = rank.saturating_sub(3);
    let hi = (rank + 3).min(sv.len());
    let kernel_basis = v.columns(rank, components - rank).into_owned();
    Ok(KernelReport {
        kind,
        n,
        l,
        samples,
        components,
        rank,
        kernel_dim: components - rank,
        singular_tail: sv[lo..hi].to_vec(),
        kernel_basis,
    })
}

/// `components - rank` of the stacked residual system.
pub fn invariant_kernel_dim(kind: Kind, n: usize, l: usize, samples: usize, seed: u64) -> Result<usize> {
    invariant_kernel(kind, n, l, samples, seed, Exec::default()).map(|r| r.kernel_dim)
}

/// Whether two kernels are the same subspace of the tensor space.
pub fn same_kernel(a: &KernelReport, b: &KernelReport) -> bool {
    if a.kind != b.kind || a.n != b.n || a.kernel_dim != b.kernel_dim {
        return false;
    }
    if a.kernel_dim == 0 {
        return true;
    }
    let joined = RMat::from_fn(a.components, 2 * a.kernel_dim, |i, j| {
        if j < a.kernel_dim {
            a.kernel_basis[(i, j)]
        } else {
            b.kernel_basis[(i, j - a.kernel_dim)]
        }
    });
    linalg::numerical_rank(&linalg::singular_values(&joined), tol::PLANE_RANK_REL) == a.kernel_dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{canonical_structure, random_sp};

    fn structure(m: RMat) -> ComplexStructure {
        ComplexStructure::new(m).unwrap()
    }

    #[test]
    fn component_counts() {
        assert_eq!(Kind::Torsion.component_count(1), 2);
        assert_eq!(Kind::Torsion.component_count(2), 24);
        assert_eq!(Kind::Curvature.component_count(1), 3);
        assert_eq!(Kind::Curvature.component_count(2), 60);
        for n in 1..=3 {
            assert_eq!(TorsionTensor::basis(n).unwrap().len(), Kind::Torsion.component_count(n));
            assert_eq!(CurvatureTensor::basis(n).unwrap().len(), Kind::Curvature.component_count(n));
        }
    }

    #[test]
    fn zero_tensors_have_zero_residual() {
        for n in 1..=3 {
            let j = structure(j0(n));
            assert_eq!(torsion_residual(&TorsionTensor::zero(n).unwrap(), &j).unwrap(), 0.0);
            assert_eq!(curvature_residual(&CurvatureTensor::zero(n).unwrap(), &j).unwrap(), 0.0);
            assert_eq!(curvature_02_residual(&CurvatureTensor::zero(n).unwrap(), &j).unwrap(), 0.0);
        }
    }

    #[test]
    fn dimension_two_degeneracy() {
        let mut r = sampling::rng(3);
        for seed in 0..20 {
            let g = random_sp(1, seed).unwrap();
            for l in 0..=1 {
                let j = structure(&g * canonical_structure(1, l).unwrap() * g.clone().try_inverse().unwrap());
                let t = TorsionTensor::random(1, &mut r).unwrap();
                let c = CurvatureTensor::random(1, &mut r).unwrap();
                let scale = linalg::unit_scale(j.matrix()).powi(4);
                assert!(torsion_residual(&t, &j).unwrap() <= 1e-12 * scale);
                assert!(curvature_02_residual(&c, &j).unwrap() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn generic_tensors_violate_in_dimension_four() {
        let mut r = sampling::rng(8);
        let j = structure(j0(2));
        assert!(torsion_residual(&TorsionTensor::random(2, &mut r).unwrap(), &j).unwrap() > 1e-3);
        assert!(curvature_residual(&CurvatureTensor::random(2, &mut r).unwrap(), &j).unwrap() > 1e-3);
        assert!(curvature_02_residual(&CurvatureTensor::random(2, &mut r).unwrap(), &j).unwrap() > 1e-3);
    }

    #[test]
    fn curvature_proportional_to_j0_fixture() {
        // R(e₁, e₂) = 2.5 J₀ at J = J₀: J⁻ J₀ J⁺ = i J⁻ J⁺ = 0.
        let r = CurvatureTensor::single(1, 0, 1, j0(1) * 2.5).unwrap();
        let value = curvature_residual(&r, &structure(j0(1))).unwrap();
        assert!(value <= 1e-15, "{value:e}");
    }

    #[test]
    fn curvature_must_be_symplectic() {
        let mut m = RMat::zeros(2, 2);
        m[(0, 0)] = 1.0;
        assert!(matches!(CurvatureTensor::single(1, 0, 1, m), Err(Error::NotSymplectic(_))));
        let bad = vec![RMat::identity(2, 2), RMat::zeros(2, 2)];
        assert!(matches!(TorsionTensor::new(bad), Err(Error::NotAntisymmetric(_))));
    }

    #[test]
    fn residual_tensors_are_covariant() {
        let mut r = sampling::rng(21);
        for n in 1..=2 {
            for seed in 0..5 {
                let g = random_sp(n, 50 + seed).unwrap();
                let l = seed as usize % (n + 1);
                let j = structure(canonical_structure(n, l).unwrap());
                let jg = j.conjugated(&g).unwrap();
                let t = TorsionTensor::random(n, &mut r).unwrap();
                let lhs = torsion_residual_tensor(&t.transformed(&g).unwrap(), &jg).unwrap();
                let rhs = act_on_torsion_like(&g, &torsion_residual_tensor(&t, &j).unwrap()).unwrap();
                let scale = linalg::unit_scale(&g).powi(6);
                for (a, b) in lhs.iter().zip(&rhs) {
                    assert!(cmax_abs(&(a - b)) <= 1e-12 * scale);
                }
                let c = CurvatureTensor::random(n, &mut r).unwrap();
                let cg = c.transformed(&g).unwrap();
                assert!(CurvatureTensor::new(cg.r.clone()).is_ok());
                let lhs = curvature_residual_tensor(&cg, &jg).unwrap();
                let rhs = act_on_curvature_like(&g, &curvature_residual_tensor(&c, &j).unwrap()).unwrap();
                assert!(table_max(&table_diff(&lhs, &rhs)) <= 1e-12 * scale * linalg::unit_scale(&g).powi(2));
                let lhs = curvature_02_residual_tensor(&cg, &jg).unwrap();
                let rhs = act_on_curvature_like(&g, &curvature_02_residual_tensor(&c, &j).unwrap()).unwrap();
                assert!(table_max(&table_diff(&lhs, &rhs)) <= 1e-12 * scale * linalg::unit_scale(&g).powi(2));
            }
        }
    }

    fn table_diff(a: &[Vec<CMat>], b: &[Vec<CMat>]) -> Vec<Vec<CMat>> {
        a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
    }

    #[test]
    fn rank_decision() {
        assert_eq!(decide_rank(&[3.0, 1.0, 1e-14]).unwrap(), 2);
        assert_eq!(decide_rank(&[1e-15, 1e-16]).unwrap(), 0);
        assert_eq!(decide_rank(&[2.0, 1.0]).unwrap(), 2);
        assert!(matches!(decide_rank(&[1.0, 1e-7, 1e-9]), Err(Error::IndeterminateRank(_))));
    }

    #[test]
    fn kernel_dimension_two() {
        for l in 0..=1 {
            assert_eq!(invariant_kernel_dim(Kind::Torsion, 1, l, 10, 0).unwrap(), 2);
            assert_eq!(invariant_kernel_dim(Kind::Curvature, 1, l, 10, 0).unwrap(), 3);
            assert_eq!(invariant_kernel_dim(Kind::Curvature02, 1, l, 10, 0).unwrap(), 3);
        }
    }

    #[test]
    fn single_sample_contains_joint_kernel() {
        for kind in Kind::ALL {
            let one = invariant_kernel(kind, 2, 1, 1, 4, Exec::Sequential).unwrap();
            let many = invariant_kernel(kind, 2, 1, 20, 4, Exec::Sequential).unwrap();
            assert!(one.kernel_dim >= many.kernel_dim);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in Kind::ALL {
            assert_eq!(kind.name().parse::<Kind>().unwrap(), kind);
            assert_eq!(serde_json::to_string(&kind).unwrap(), format!("\"{}\"", kind.name()));
        }
        assert!("nope".parse::<Kind>().is_err());
    }

    #[test]
    fn tensor_json_round_trip() {
        let mut r = sampling::rng(1);
        let t = TorsionTensor::random(1, &mut r).unwrap();
        let back: TorsionTensor = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        let c = CurvatureTensor::random(1, &mut r).unwrap();
        let back: CurvatureTensor = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert!(back.value(0, 1) == c.value(0, 1));
    }
}
