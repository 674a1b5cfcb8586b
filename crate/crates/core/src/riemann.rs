//! The symplectic twistor space of a Riemann surface in a conformal chart
//! `(z, w)`: metric `g₀ = h dz dz̄`, fibre coordinate `w` in the unit disk
//! and the `(1,0)` line spanned by `v = ∂_z + w̄ ∂_z̄`.
//!
//! Derivatives are Wirtinger derivatives `∂_z = ½(∂_x - i∂_y)`,
//! `∂_z̄ = ½(∂_x + i∂_y)`. Fields supply them in closed form where one is
//! known; everything else falls back to central differences.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, I};
use crate::tol;
use crate::{Error, Result};

type C = Complex64;

const ZERO: C = C { re: 0.0, im: 0.0 };
const ONE: C = C { re: 1.0, im: 0.0 };

/// How a field's derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Derivatives {
    Analytic,
    FiniteDifference { step: f64 },
    Richardson { step: f64 },
    /// Finite differences of a bilinear interpolant; lower accuracy.
    Tabulated { step: f64 },
}

impl fmt::Display for Derivatives {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivatives::Analytic => write!(f, "analytic"),
            Derivatives::FiniteDifference { step } => write!(f, "finite-difference (step {step:e})"),
            Derivatives::Richardson { step } => write!(f, "richardson (step {step:e})"),
            Derivatives::Tabulated { step } => write!(f, "tabulated, finite-difference (step {step:e})"),
        }
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidStep(step));
    }
    Ok(())
}

/// Central-difference Wirtinger derivatives `(∂_z f, ∂_z̄ f)`.
pub fn wirtinger_fd(f: impl Fn(C) -> Result<C>, z: C, step: f64) -> Result<(C, C)> {
    check_step(step)?;
    let fx = (f(z + step)? - f(z - step)?) / (2.0 * step);
    let fy = (f(z + I * step)? - f(z - I * step)?) / (2.0 * step);
    Ok(((fx - I * fy) * 0.5, (fx + I * fy) * 0.5))
}

/// Richardson extrapolation of [`wirtinger_fd`] with steps `step` and
/// `step / 2`.
pub fn wirtinger_richardson(f: impl Fn(C) -> Result<C>, z: C, step: f64) -> Result<(C, C)> {
    let (a_z, a_zb) = wirtinger_fd(&f, z, step)?;
    let (b_z, b_zb) = wirtinger_fd(&f, z, step / 2.0)?;
    Ok(((b_z * 4.0 - a_z) / 3.0, (b_zb * 4.0 - a_zb) / 3.0))
}

fn derivatives_by(method: Derivatives, f: impl Fn(C) -> Result<C>, z: C) -> Result<(C, C)> {
    match method {
        Derivatives::Richardson { step } => wirtinger_richardson(f, z, step),
        Derivatives::FiniteDifference { step } | Derivatives::Tabulated { step } => wirtinger_fd(f, z, step),
        Derivatives::Analytic => wirtinger_fd(f, z, tol::FD_STEP),
    }
}

/// A complex function of one complex variable with Wirtinger derivatives.
pub trait ScalarField: Send + Sync {
    fn value(&self, z: C) -> Result<C>;

    /// `(∂_z f, ∂_z̄ f)`, by default through [`ScalarField::method`].
    fn derivatives(&self, z: C) -> Result<(C, C)> {
        derivatives_by(self.method(), |x| self.value(x), z)
    }

    fn method(&self) -> Derivatives {
        Derivatives::FiniteDifference { step: tol::FD_STEP }
    }
}

/// A constant field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub C);

impl ScalarField for Constant {
    fn value(&self, _: C) -> Result<C> {
        Ok(self.0)
    }
    fn derivatives(&self, _: C) -> Result<(C, C)> {
        Ok((ZERO, ZERO))
    }
    fn method(&self) -> Derivatives {
        Derivatives::Analytic
    }
}

type Value = dyn Fn(C) -> Result<C> + Send + Sync;
type Pair = dyn Fn(C) -> Result<(C, C)> + Send + Sync;

/// A field given by closures, with optional closed-form derivatives.
pub struct FnField {
    f: Box<Value>,
    d: Option<Box<Pair>>,
    method: Derivatives,
}

impl FnField {
    /// Derivatives by central differences with the given step.
    pub fn new(f: impl Fn(C) -> C + Send + Sync + 'static, step: f64) -> Self {
        Self { f: Box::new(move |z| Ok(f(z))), d: None, method: Derivatives::FiniteDifference { step } }
    }

    /// Derivatives by Richardson-refined central differences.
    pub fn richardson(f: impl Fn(C) -> C + Send + Sync + 'static, step: f64) -> Self {
        Self { f: Box::new(move |z| Ok(f(z))), d: None, method: Derivatives::Richardson { step } }
    }

    /// `d(z) = (∂_z f, ∂_z̄ f)` in closed form.
    pub fn analytic(
        f: impl Fn(C) -> C + Send + Sync + 'static,
        d: impl Fn(C) -> (C, C) + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Box::new(move |z| Ok(f(z))),
            d: Some(Box::new(move |z| Ok(d(z)))),
            method: Derivatives::Analytic,
        }
    }
}

impl ScalarField for FnField {
    fn value(&self, z: C) -> Result<C> {
        (self.f)(z)
    }
    fn derivatives(&self, z: C) -> Result<(C, C)> {
        match &self.d {
            Some(d) => d(z),
            None => derivatives_by(self.method, |x| self.value(x), z),
        }
    }
    fn method(&self) -> Derivatives {
        self.method
    }
}

/// Samples on a rectangular grid, bilinearly interpolated.
///
/// JSON form: `{"grid": {"x": [...], "y": [...]}, "values": [[...], ...]}`
/// with `values[i][j]` the sample at `(x[j], y[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TabulatedJson", into = "TabulatedJson")]
pub struct Tabulated {
    x: Vec<f64>,
    y: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TabulatedJson {
    grid: GridJson,
    values: Vec<Vec<f64>>,
}

impl TryFrom<TabulatedJson> for Tabulated {
    type Error = Error;
    fn try_from(j: TabulatedJson) -> Result<Self> {
        Tabulated::new(j.grid.x, j.grid.y, j.values)
    }
}

impl From<Tabulated> for TabulatedJson {
    fn from(t: Tabulated) -> Self {
        TabulatedJson { grid: GridJson { x: t.x, y: t.y }, values: t.values }
    }
}

impl Tabulated {
    pub fn new(x: Vec<f64>, y: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let increasing = |v: &[f64]| v.len() >= 2 && v.windows(2).all(|p| p[1] > p[0]) && v.iter().all(|t| t.is_finite());
        if !increasing(&x) || !increasing(&y) {
            return Err(Error::Grid("axes need at least two strictly increasing finite points".into()));
        }
        if values.len() != y.len() || values.iter().any(|row| row.len() != x.len()) {
            return Err(Error::Grid(format!("values must be {}x{}", y.len(), x.len())));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Grid("non-finite sample".into()));
        }
        Ok(Self { x, y, values })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Grid(e.to_string()))
    }

    /// Samples `f` on the grid.
    pub fn sample(x: Vec<f64>, y: Vec<f64>, f: impl Fn(C) -> f64) -> Result<Self> {
        let values = y.iter().map(|&yi| x.iter().map(|&xj| f(C::new(xj, yi))).collect()).collect();
        Self::new(x, y, values)
    }

    fn cell(axis: &[f64], t: f64) -> Option<(usize, f64)> {
        if t < axis[0] || t > axis[axis.len() - 1] {
            return None;
        }
        let k = axis.partition_point(|&a| a <= t).clamp(1, axis.len() - 1) - 1;
        Some((k, (t - axis[k]) / (axis[k + 1] - axis[k])))
    }

    pub fn interpolate(&self, z: C) -> Result<f64> {
        let (j, s) = Self::cell(&self.x, z.re).ok_or_else(|| Error::Grid(format!("x = {} outside grid", z.re)))?;
        let (i, t) = Self::cell(&self.y, z.im).ok_or_else(|| Error::Grid(format!("y = {} outside grid", z.im)))?;
        let v = &self.values;
        Ok((1.0 - t) * ((1.0 - s) * v[i][j] + s * v[i][j + 1]) + t * ((1.0 - s) * v[i + 1][j] + s * v[i + 1][j + 1]))
    }
}

impl ScalarField for Tabulated {
    fn value(&self, z: C) -> Result<C> {
        Ok(C::new(self.interpolate(z)?, 0.0))
    }
    fn method(&self) -> Derivatives {
        Derivatives::Tabulated { step: tol::FD_STEP }
    }
}

/// `h = 1 / (1 + |z|²)`, `∂_z h = -z̄ h²`, `∂_z̄ h = -z h²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FubiniStudy;

impl ScalarField for FubiniStudy {
    fn value(&self, z: C) -> Result<C> {
        Ok(C::new(1.0 / (1.0 + z.norm_sqr()), 0.0))
    }
    fn derivatives(&self, z: C) -> Result<(C, C)> {
        let h = 1.0 / (1.0 + z.norm_sqr());
        Ok((-z.conj() * h * h, -z * h * h))
    }
    fn method(&self) -> Derivatives {
        Derivatives::Analytic
    }
}

/// A conformal metric density `h > 0`.
#[derive(Clone)]
pub struct MetricDensity {
    name: String,
    field: Arc<dyn ScalarField>,
    factor: f64,
}

impl fmt::Debug for MetricDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricDensity").field("name", &self.name).field("factor", &self.factor).finish()
    }
}

/// Names accepted by [`MetricDensity::named`].
pub const CATALOG: [&str; 2] = ["flat", "fubini-study"];

impl MetricDensity {
    pub fn new(name: impl Into<String>, field: impl ScalarField + 'static) -> Self {
        Self { name: name.into(), field: Arc::new(field), factor: 1.0 }
    }

    pub fn flat() -> Self {
        Self::new("flat", Constant(ONE))
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::NonPositiveMetric(c));
        }
        Ok(Self::new(format!("constant {c}"), Constant(C::new(c, 0.0))))
    }

    pub fn fubini_study() -> Self {
        Self::new("fubini-study", FubiniStudy)
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "flat" => Ok(Self::flat()),
            "fubini-study" => Ok(Self::fubini_study()),
            other => Err(Error::UnknownField(other.to_string())),
        }
    }

    pub fn tabulated(name: impl Into<String>, table: Tabulated) -> Self {
        Self::new(name, table)
    }

    /// `c · h`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::NonPositiveMetric(c));
        }
        Ok(Self { name: format!("{} × {c}", self.name), field: self.field.clone(), factor: self.factor * c })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn method(&self) -> Derivatives {
        self.field.method()
    }

    /// `h(z)`, rejecting non-positive or non-real values.
    pub fn h(&self, z: C) -> Result<f64> {
        let v = self.field.value(z)? * self.factor;
        if !(v.re > 0.0) || v.im.abs() > tol::REALITY * v.re.abs().max(1.0) {
            return Err(Error::NonPositiveMetric(v.re));
        }
        Ok(v.re)
    }

    /// `(h, ∂_z h, ∂_z̄ h)`.
    pub fn jet(&self, z: C) -> Result<(f64, C, C)> {
        let h = self.h(z)?;
        let (d, db) = self.field.derivatives(z)?;
        Ok((h, d * self.factor, db * self.factor))
    }
}

/// A point `(z, w)` of the twistor chart with `|w| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistorChartPoint {
    z: C,
    w: C,
}

fn check_disk(w: C) -> Result<()> {
    if !(w.norm() < 1.0 - tol::DISK_MARGIN) {
        return Err(Error::OutsideDisk(w.norm()));
    }
    Ok(())
}

impl TwistorChartPoint {
    pub fn new(z: C, w: C) -> Result<Self> {
        check_disk(w)?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter("z must be finite".into()));
        }
        Ok(Self { z, w })
    }

    pub fn z(&self) -> C {
        self.z
    }

    pub fn w(&self) -> C {
        self.w
    }
}

/// A section `z ↦ w(z)` of the disk bundle.
#[derive(Clone)]
pub struct SectionField {
    field: Arc<dyn ScalarField>,
}

impl fmt::Debug for SectionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectionField").field("method", &self.field.method()).finish()
    }
}

impl SectionField {
    pub fn new(field: impl ScalarField + 'static) -> Self {
        Self { field: Arc::new(field) }
    }

    pub fn constant(c: C) -> Result<Self> {
        check_disk(c)?;
        Ok(Self::new(Constant(c)))
    }

    /// `w(z) = |z|^k / (1 + |z|^{2k})`, differentiated numerically.
    pub fn fubini_study(k: f64) -> Result<Self> {
        fubini_study_section(k, ZERO)?;
        Ok(Self::new(FnField::new(move |z| C::new(fs_section(k, z), 0.0), tol::FD_STEP)))
    }

    pub fn method(&self) -> Derivatives {
        self.field.method()
    }

    pub fn w(&self, z: C) -> Result<C> {
        let w = self.field.value(z)?;
        check_disk(w)?;
        Ok(w)
    }

    /// `(w, ∂_z w, ∂_z̄ w)`.
    pub fn jet(&self, z: C) -> Result<(C, C, C)> {
        let w = self.w(z)?;
        let (d, db) = self.field.derivatives(z)?;
        Ok((w, d, db))
    }
}

/// Partial derivatives of a function on the chart, in the order
/// `(∂_z, ∂_z̄, ∂_w, ∂_w̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub z: C,
    pub zbar: C,
    pub w: C,
    pub wbar: C,
}

/// A complex function `f(z, w)` on the twistor chart.
pub trait TwistorFunction: Send + Sync {
    fn value(&self, z: C, w: C) -> Result<C>;

    fn partials(&self, z: C, w: C) -> Result<Partials> {
        let step = tol::FD_STEP;
        let (dz, dzb) = wirtinger_fd(|x| self.value(x, w), z, step)?;
        let (dw, dwb) = wirtinger_fd(|x| self.value(z, x), w, step)?;
        Ok(Partials { z: dz, zbar: dzb, w: dw, wbar: dwb })
    }
}

type Value2 = dyn Fn(C, C) -> C + Send + Sync;
type Partials2 = dyn Fn(C, C) -> Partials + Send + Sync;

/// A chart function from closures, with optional closed-form partials.
pub struct TwistorFn {
    f: Box<Value2>,
    d: Option<Box<Partials2>>,
}

impl TwistorFn {
    pub fn numeric(f: impl Fn(C, C) -> C + Send + Sync + 'static) -> Self {
        Self { f: Box::new(f), d: None }
    }

    pub fn analytic(
        f: impl Fn(C, C) -> C + Send + Sync + 'static,
        d: impl Fn(C, C) -> Partials + Send + Sync + 'static,
    ) -> Self {
        Self { f: Box::new(f), d: Some(Box::new(d)) }
    }
}

impl TwistorFunction for TwistorFn {
    fn value(&self, z: C, w: C) -> Result<C> {
        Ok((self.f)(z, w))
    }
    fn partials(&self, z: C, w: C) -> Result<Partials> {
        match &self.d {
            Some(d) => Ok(d(z, w)),
            None => {
                let step = tol::FD_STEP;
                let (dz, dzb) = wirtinger_fd(|x| self.value(x, w), z, step)?;
                let (dw, dwb) = wirtinger_fd(|x| self.value(z, x), w, step)?;
                Ok(Partials { z: dz, zbar: dzb, w: dw, wbar: dwb })
            }
        }
    }
}

fn p_of(h: f64, hz: C, hzb: C, w: C) -> C {
    w * (w.conj() * hzb - hz) / h
}

fn q_of(h: f64, hz: C, hzb: C, w: C) -> C {
    w.conj() * (hz - w.conj() * hzb) / h
}

/// `(p, q)` making `u = ∂_z + w̄∂_z̄ + p∂_w + q∂_w̄` horizontal:
/// `p = w (w̄ ∂_z̄h - ∂_zh) / h`, `q = w̄ (∂_zh - w̄ ∂_z̄h) / h`.
pub fn lift_coeffs(h: &MetricDensity, pt: &TwistorChartPoint) -> Result<(C, C)> {
    let (hv, hz, hzb) = h.jet(pt.z())?;
    Ok((p_of(hv, hz, hzb, pt.w()), q_of(hv, hz, hzb, pt.w())))
}

/// `(∂f/∂w̄, h∂f/∂z̄ + hw∂f/∂z + w(∂h/∂z̄ - w∂h/∂z)∂f/∂w)`; both vanish
/// exactly when `f` is holomorphic for the twistor structure at `pt`.
pub fn holo_residual(f: &dyn TwistorFunction, h: &MetricDensity, pt: &TwistorChartPoint) -> Result<(C, C)> {
    let (hv, hz, hzb) = h.jet(pt.z())?;
    let d = f.partials(pt.z(), pt.w())?;
    let w = pt.w();
    Ok((d.wbar, d.zbar * hv + d.z * hv * w + w * (hzb - w * hz) * d.w))
}

/// `w(w∂h/∂z - ∂h/∂z̄) + h∂w/∂z̄ + hw∂w/∂z`, vanishing for self-holomorphic
/// sections.
pub fn selfholo_residual(section: &SectionField, h: &MetricDensity, z: C) -> Result<C> {
    let (w, wz, wzb) = section.jet(z)?;
    let (hv, hz, hzb) = h.jet(z)?;
    Ok(w * (w * hz - hzb) + wzb * hv + wz * hv * w)
}

/// `∂F/∂z̄ + ∂(Fw)/∂z`, the product differentiated as one function.
pub fn beltrami_variant_residual(big_f: &dyn ScalarField, section: &SectionField, z: C) -> Result<C> {
    section.w(z)?;
    let (_, f_zb) = big_f.derivatives(z)?;
    let product = |x: C| -> Result<C> { Ok(big_f.value(x)? * section.w(x)?) };
    let (fw_z, _) = derivatives_by(big_f.method(), product, z)?;
    Ok(f_zb + fw_z)
}

/// Components of `g_j = ω(·, j·)` for the structure at `(z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionMetric {
    /// `g_j(∂_z, ∂_z̄) = h l`.
    pub g11bar: C,
    /// `g_j(∂_z, ∂_z) = h m`.
    pub g11: C,
    /// `(1 + |w|²) / (1 - |w|²)`.
    pub l: C,
    /// `-2w̄ / (1 - |w|²)`.
    pub m: C,
}

pub fn section_metric(h: &MetricDensity, pt: &TwistorChartPoint) -> Result<SectionMetric> {
    let hv = h.h(pt.z())?;
    let w = pt.w();
    let d = 1.0 - w.norm_sqr();
    let l = C::new((1.0 + w.norm_sqr()) / d, 0.0);
    let m = -w.conj() * 2.0 / d;
    Ok(SectionMetric { g11bar: l * hv, g11: m * hv, l, m })
}

/// Matrix of `j` on the frame `(∂_z, ∂_z̄)`: columns are `j(∂_z)` and
/// `j(∂_z̄)`.
pub fn j_matrix(w: C) -> Result<CMat> {
    check_disk(w)?;
    let d = 1.0 - w.norm_sqr();
    let l = (1.0 + w.norm_sqr()) / d;
    Ok(CMat::from_row_slice(2, 2, &[I * l, -I * w * 2.0 / d, I * w.conj() * 2.0 / d, -I * l]))
}

/// `h(1 - |w|²)`, positive exactly on the disk.
pub fn taming_value(h: &MetricDensity, pt: &TwistorChartPoint) -> Result<f64> {
    Ok(h.h(pt.z())? * (1.0 - pt.w().norm_sqr()))
}

/// Fibre coordinate in the chart `z₁` given `dz_dz1 = ∂z/∂z₁`:
/// `w₁ = w · conj(dz_dz1) / dz_dz1`.
///
/// From `∂_{z₁} + w̄₁∂_{z̄₁} = c(∂_z + w̄₁ (c̄/c) ∂_z̄)` with `c = ∂z/∂z₁`,
/// the two generators span the same line iff `w̄ = w̄₁ c̄ / c`.
pub fn chart_change_section(w: C, dz_dz1: C) -> Result<C> {
    if dz_dz1.norm() == 0.0 || !dz_dz1.norm().is_finite() {
        return Err(Error::ZeroDerivative);
    }
    Ok(w * dz_dz1.conj() / dz_dz1)
}

/// Checks `∂q/∂w = 0` and `[u, ∂_w] = -(∂p/∂w) ∂_w` by central differences
/// in `w` of step `step`, returning the largest deviation.
///
/// With `[X, Y] = XY - YX` the bracket has components `-∂_w` of the
/// coefficients `(1, w̄, p, q)` of `u`. The expected `∂p/∂w` is the closed
/// form `(w̄ ∂_z̄h - ∂_zh) / h`.
pub fn bracket_check(h: &MetricDensity, pt: &TwistorChartPoint, step: f64) -> Result<f64> {
    check_step(step)?;
    if pt.w().norm() + step >= 1.0 - tol::DISK_MARGIN {
        return Err(Error::StepLeavesDomain(format!("|w| + step = {}", pt.w().norm() + step)));
    }
    let (hv, hz, hzb) = h.jet(pt.z())?;
    let coeffs = |w: C| [w.conj(), p_of(hv, hz, hzb, w), q_of(hv, hz, hzb, w)];
    let w = pt.w();
    let (xp, xm, yp, ym) = (coeffs(w + step), coeffs(w - step), coeffs(w + I * step), coeffs(w - I * step));
    let d_w: Vec<C> = (0..3)
        .map(|k| ((xp[k] - xm[k]) - I * (yp[k] - ym[k])) / (4.0 * step))
        .collect();
    let bracket = [-d_w[0], -d_w[1], -d_w[2]];
    let dp_dw = (w.conj() * hzb - hz) / hv;
    Ok([bracket[0].norm(), (bracket[1] + dp_dw).norm(), bracket[2].norm()].into_iter().fold(0.0, f64::max))
}

fn fs_section(k: f64, z: C) -> f64 {
    let t = z.norm();
    // Symmetric under t ↦ 1/t; evaluate on t ≤ 1 to avoid overflow.
    let s = if t > 1.0 { 1.0 / t } else { t };
    let sk = s.powf(k);
    sk / (1.0 + sk * sk)
}

/// `|z|^k / (1 + |z|^{2k})`, a real section with values in `[0, ½]`.
pub fn fubini_study_section(k: f64, z: C) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    Ok(fs_section(k, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn pt(z: C, w: C) -> TwistorChartPoint {
        TwistorChartPoint::new(z, w).unwrap()
    }

    #[test]
    fn wirtinger_on_polynomials() {
        let z = c(0.3, -0.7);
        let (dz, dzb) = wirtinger_fd(|x| Ok(x * x * x.conj()), z, 1e-5).unwrap();
        assert!((dz - z * z.conj() * 2.0).norm() < 1e-9);
        assert!((dzb - z * z).norm() < 1e-9);
        let (dz, dzb) = wirtinger_richardson(|x| Ok(x.exp()), z, 1e-3).unwrap();
        assert!((dz - z.exp()).norm() < 1e-10 && dzb.norm() < 1e-10);
    }

    #[test]
    fn fd_converges_at_second_order() {
        let f = |x: C| Ok((x * x.conj()).sin() * x);
        let z = c(0.4, 0.2);
        let exact = wirtinger_richardson(f, z, 1e-3).unwrap().0;
        let e1 = (wirtinger_fd(f, z, 1e-2).unwrap().0 - exact).norm();
        let e2 = (wirtinger_fd(f, z, 5e-3).unwrap().0 - exact).norm();
        assert!((3.5..4.5).contains(&(e1 / e2)), "{}", e1 / e2);
    }

    #[test]
    fn lift_examples() {
        let flat = MetricDensity::flat();
        assert_eq!(lift_coeffs(&flat, &pt(c(1.0, 2.0), c(0.3, 0.1))).unwrap(), (ZERO, ZERO));
        let fs = MetricDensity::fubini_study();
        let (p, q) = lift_coeffs(&fs, &pt(c(1.0, 2.0), ZERO)).unwrap();
        assert_eq!((p, q), (ZERO, ZERO));
        let z = c(0.5, -1.5);
        let w = c(0.2, 0.6);
        let (p, _) = lift_coeffs(&fs, &pt(z, w)).unwrap();
        let h = 1.0 / (1.0 + z.norm_sqr());
        assert!((p - w * h * (z.conj() - w.conj() * z)).norm() < 1e-15);
    }

    #[test]
    fn holo_examples() {
        let fs = MetricDensity::fubini_study();
        let p0 = pt(c(0.2, 0.3), c(0.1, -0.4));
        let constant = TwistorFn::numeric(|_, _| c(2.0, 1.0));
        let (r1, r2) = holo_residual(&constant, &fs, &p0).unwrap();
        assert!(r1.norm() < 1e-12 && r2.norm() < 1e-12);
        let w = TwistorFn::numeric(|_, w| w);
        let (r1, r2) = holo_residual(&w, &MetricDensity::constant(3.0).unwrap(), &p0).unwrap();
        assert!(r1.norm() < 1e-10 && r2.norm() < 1e-10);
        let wbar = TwistorFn::numeric(|_, w| w.conj());
        let (r1, _) = holo_residual(&wbar, &fs, &p0).unwrap();
        assert!((r1 - ONE).norm() < 1e-10);
    }

    #[test]
    fn holo_analytic_matches_numeric() {
        let f = |z: C, w: C| z * z * w + z.conj() * w.conj() * w;
        let d = |z: C, w: C| Partials {
            z: z * w * 2.0,
            zbar: w.conj() * w,
            w: z * z + z.conj() * w.conj(),
            wbar: z.conj() * w,
        };
        let analytic = TwistorFn::analytic(f, d);
        let numeric = TwistorFn::numeric(f);
        let fs = MetricDensity::fubini_study();
        for (z, w) in [(c(0.1, 0.2), c(0.3, 0.3)), (c(-1.0, 0.5), c(-0.6, 0.1)), (c(2.0, -2.0), c(0.0, 0.9))] {
            let a = holo_residual(&analytic, &fs, &pt(z, w)).unwrap();
            let b = holo_residual(&numeric, &fs, &pt(z, w)).unwrap();
            assert!((a.0 - b.0).norm() < 1e-5 && (a.1 - b.1).norm() < 1e-5);
        }
    }

    #[test]
    fn selfholo_examples() {
        let zero = SectionField::constant(ZERO).unwrap();
        for h in [MetricDensity::flat(), MetricDensity::fubini_study()] {
            for z in [c(0.0, 0.0), c(1.0, -2.0), c(0.3, 0.7)] {
                assert_eq!(selfholo_residual(&zero, &h, z).unwrap(), ZERO);
            }
        }
        let cst = SectionField::constant(c(0.3, 0.4)).unwrap();
        assert_eq!(selfholo_residual(&cst, &MetricDensity::constant(2.0).unwrap(), c(1.0, 1.0)).unwrap(), ZERO);
        let outside = SectionField::new(Constant(c(1.0, 0.0)));
        assert!(matches!(selfholo_residual(&outside, &MetricDensity::flat(), ZERO), Err(Error::OutsideDisk(_))));
    }

    #[test]
    fn selfholo_fixture_for_sphere_section() {
        // At z = 1: w = ½ with vanishing first derivatives, h = ½ and
        // ∂_z h = ∂_z̄ h = -¼, so the residual is ½(½·(-¼) + ¼) = 1/16.
        let s = SectionField::fubini_study(1.0).unwrap();
        let r = selfholo_residual(&s, &MetricDensity::fubini_study(), ONE).unwrap();
        assert!((r - c(0.0625, 0.0)).norm() < 1e-10, "{r}");
    }

    #[test]
    fn residuals_scale_with_h() {
        let fs = MetricDensity::fubini_study();
        let fs2 = fs.scaled(2.0).unwrap();
        let s = SectionField::fubini_study(2.0).unwrap();
        let z = c(0.7, -0.2);
        let a = selfholo_residual(&s, &fs, z).unwrap();
        let b = selfholo_residual(&s, &fs2, z).unwrap();
        assert!((b - a * 2.0).norm() < 1e-14);
        let p0 = pt(z, c(0.2, 0.5));
        let f = TwistorFn::numeric(|z, w| z * w.conj() + w * w);
        let (_, r) = holo_residual(&f, &fs, &p0).unwrap();
        let (_, r2) = holo_residual(&f, &fs2, &p0).unwrap();
        assert!((r2 - r * 2.0).norm() < 1e-12);
        let pq = lift_coeffs(&fs, &p0).unwrap();
        let pq2 = lift_coeffs(&fs2, &p0).unwrap();
        assert!((pq.0 - pq2.0).norm() < 1e-15 && (pq.1 - pq2.1).norm() < 1e-15);
    }

    #[test]
    fn beltrami_examples() {
        let zero = SectionField::constant(ZERO).unwrap();
        let sq = FnField::new(|z| z * z, 1e-5);
        assert!(beltrami_variant_residual(&sq, &zero, c(0.4, 0.9)).unwrap().norm() < 1e-9);
        assert_eq!(beltrami_variant_residual(&Constant(ZERO), &zero, ONE).unwrap(), ZERO);
        let zbar = FnField::new(|z| z.conj(), 1e-5);
        assert!((beltrami_variant_residual(&zbar, &zero, c(-0.3, 0.2)).unwrap() - ONE).norm() < 1e-9);
    }

    #[test]
    fn section_metric_examples() {
        let flat = MetricDensity::flat();
        let m = section_metric(&MetricDensity::constant(3.0).unwrap(), &pt(ONE, ZERO)).unwrap();
        assert_eq!(m, SectionMetric { g11bar: c(3.0, 0.0), g11: ZERO, l: ONE, m: ZERO });
        let m = section_metric(&flat, &pt(ZERO, c(0.5, 0.0))).unwrap();
        assert!((m.g11bar - c(5.0 / 3.0, 0.0)).norm() < 1e-15);
        for k in 0..50 {
            let w = C::from_polar(0.98 * k as f64 / 50.0, 0.7 * k as f64);
            let m = section_metric(&flat, &pt(ZERO, w)).unwrap();
            assert!((m.l + w * m.m - ONE).norm() <= 1e-12);
        }
        assert!(matches!(TwistorChartPoint::new(ZERO, ONE), Err(Error::OutsideDisk(_))));
    }

    #[test]
    fn j_matrix_examples() {
        let j = j_matrix(ZERO).unwrap();
        assert_eq!(j, CMat::from_row_slice(2, 2, &[I, ZERO, ZERO, -I]));
        for k in 0..12 {
            let w = C::from_polar(0.7, k as f64);
            let j = j_matrix(w).unwrap();
            let sq = &j * &j + CMat::identity(2, 2);
            assert!(crate::linalg::cmax_abs(&sq) <= 1e-12);
            let v = CMat::from_column_slice(2, 1, &[ONE, w.conj()]);
            assert!(crate::linalg::cmax_abs(&(&j * &v - &v * I)) <= 1e-14);
        }
        assert!(j_matrix(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn chart_change_examples() {
        let w = c(0.3, -0.4);
        assert_eq!(chart_change_section(w, ONE).unwrap(), w);
        assert!(matches!(chart_change_section(w, ZERO), Err(Error::ZeroDerivative)));
        let theta = 0.8_f64;
        // z₁ = e^{iθ} z, so ∂z/∂z₁ = e^{-iθ}.
        let w1 = chart_change_section(w, C::from_polar(1.0, -theta)).unwrap();
        assert!((w1 - w * C::from_polar(1.0, 2.0 * theta)).norm() < 1e-15);
        assert!((w1.norm() - w.norm()).abs() < 1e-15);
    }

    #[test]
    fn sphere_section_in_second_chart() {
        for k in [0.5, 1.0, 3.0] {
            for z in [c(0.3, 0.4), c(-2.0, 1.0), c(0.0, -5.0)] {
                let z1 = ONE / z;
                let w = fubini_study_section(k, z).unwrap();
                assert!((w - fubini_study_section(k, z1).unwrap()).abs() < 1e-15);
                let w1 = chart_change_section(c(w, 0.0), -ONE / (z1 * z1)).unwrap();
                let back = z1.conj() * z1.conj() / (z1 * z1) * w1;
                assert!((back - c(w, 0.0)).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let p0 = pt(c(1.0, 1.0), c(0.3, 0.0));
        assert!(bracket_check(&MetricDensity::flat(), &p0, 1e-5).unwrap() < 1e-12);
        let fs = MetricDensity::fubini_study();
        let a = bracket_check(&fs, &p0, 1e-5).unwrap();
        assert!(a <= 1e-6, "{a:e}");
        // p and q are quadratic in (w, w̄): central differences are exact
        // and the residual stays at roundoff under halving.
        assert!(bracket_check(&fs, &p0, 5e-6).unwrap() <= 1e-6);
        let edge = pt(ZERO, c(0.99999, 0.0));
        assert!(matches!(bracket_check(&fs, &edge, 1e-4), Err(Error::StepLeavesDomain(_))));
    }

    #[test]
    fn sphere_section_bounds() {
        assert_eq!(fubini_study_section(1.0, ZERO).unwrap(), 0.0);
        for k in [0.5, 1.0, 3.0] {
            assert_eq!(fubini_study_section(k, C::from_polar(1.0, 0.3)).unwrap(), 0.5);
        }
        assert!(fubini_study_section(0.0, ONE).is_err());
        let mut sup = 0.0_f64;
        for k in [0.5, 1.0, 3.0] {
            for i in 0..=200 {
                for j in 0..=200 {
                    let z = c(-100.0 + i as f64, -100.0 + j as f64);
                    if z.norm() <= 100.0 {
                        sup = sup.max(fubini_study_section(k, z).unwrap());
                    }
                }
            }
        }
        assert!(sup <= 0.5);
    }

    #[test]
    fn catalog_and_tabulated() {
        for name in CATALOG {
            assert_eq!(MetricDensity::named(name).unwrap().name(), name);
        }
        assert!(matches!(MetricDensity::named("nope"), Err(Error::UnknownField(_))));
        let axis: Vec<f64> = (0..=40).map(|k| -2.0 + 0.1 * k as f64).collect();
        let table = Tabulated::sample(axis.clone(), axis, |z| 1.0 / (1.0 + z.norm_sqr())).unwrap();
        let json = serde_json::to_string(&table).unwrap();
        assert!(json.starts_with(r#"{"grid":{"x":"#));
        let back = Tabulated::from_json(&json).unwrap();
        let h = MetricDensity::tabulated("tabulated fubini-study", back);
        assert!(matches!(h.method(), Derivatives::Tabulated { .. }));
        let z = c(0.35, -0.45);
        assert!((h.h(z).unwrap() - 1.0 / (1.0 + z.norm_sqr())).abs() < 1e-2);
        assert!(h.h(c(5.0, 0.0)).is_err());
        assert!(Tabulated::from_json(r#"{"grid":{"x":[0,1],"y":[0,1]},"values":[[1,2]]}"#).is_err());
        let neg = Tabulated::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![vec![-1.0, -1.0], vec![-1.0, -1.0]]).unwrap();
        assert!(matches!(MetricDensity::tabulated("neg", neg).h(c(0.5, 0.5)), Err(Error::NonPositiveMetric(_))));
    }
}
