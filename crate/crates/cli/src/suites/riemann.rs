use num_complex::Complex64 as C;
use twistor_core::linalg::{cmax_abs, CMat};
use twistor_core::riemann::{
    bracket_check, chart_change_section, fubini_study_section, j_matrix, lift_coeffs, section_metric,
    selfholo_residual, taming_value, MetricDensity, SectionField, TwistorChartPoint,
};
use twistor_core::{Error, Result};

use crate::{Check, SuiteConfig};

const GRID: usize = 20;
const LIFT_TOL: f64 = 1e-9;
const ZERO_SECTION_TOL: f64 = 1e-14;
const METRIC_TOL: f64 = 1e-12;
const BRACKET_STEP: f64 = 1e-5;
const BRACKET_TOL: f64 = 1e-6;
const CHART_TOL: f64 = 1e-10;
const FIXTURE_TOL: f64 = 1e-9;

/// `z` on a `GRID × GRID` square of side 4 about the origin, paired with a
/// fibre point spiralling inside the disk.
fn grid() -> Vec<(C, C)> {
    let at = |k: usize| -2.0 + 4.0 * k as f64 / (GRID - 1) as f64;
    (0..GRID * GRID)
        .map(|k| {
            let z = C::new(at(k % GRID), at(k / GRID));
            let w = C::from_polar(0.95 * (k as f64 + 0.5) / (GRID * GRID) as f64, 0.37 * k as f64);
            (z, w)
        })
        .collect()
}

fn worst(name: &str, tol: f64, f: impl Fn(C, C) -> Result<f64>) -> Check {
    let values: Result<Vec<f64>> = grid().into_iter().map(|(z, w)| f(z, w)).collect();
    match values {
        Ok(v) => Check::within(name, v.into_iter().fold(0.0, f64::max), tol)
            .detail(format!("{GRID}×{GRID} grid")),
        Err(e) => Check::error(name, tol, &e),
    }
}

pub fn run(_config: &SuiteConfig) -> Vec<Check> {
    let flat = MetricDensity::flat();
    let fs = MetricDensity::fubini_study();
    let method = format!("metric derivatives: {}", fs.method());

    let lift = worst("lift-coefficients", LIFT_TOL, |z, w| {
        let (p, q) = lift_coeffs(&fs, &TwistorChartPoint::new(z, w)?)?;
        let h = 1.0 / (1.0 + z.norm_sqr());
        let p_ref = w * h * (z.conj() - w.conj() * z);
        let q_ref = w.conj() * h * (w.conj() * z - z.conj());
        let (p0, q0) = lift_coeffs(&flat, &TwistorChartPoint::new(z, w)?)?;
        Ok((p - p_ref).norm().max((q - q_ref).norm()).max(p0.norm()).max(q0.norm()))
    })
    .detail(method.clone());

    let zero_section = {
        let zero = SectionField::constant(C::new(0.0, 0.0));
        worst("zero-section-self-holomorphic", ZERO_SECTION_TOL, |z, _| {
            let zero = zero.clone()?;
            Ok(selfholo_residual(&zero, &flat, z)?.norm().max(selfholo_residual(&zero, &fs, z)?.norm()))
        })
    };

    let metric = worst("section-metric-identity", METRIC_TOL, |z, w| {
        let m = section_metric(&fs, &TwistorChartPoint::new(z, w)?)?;
        Ok((m.l + w * m.m - C::new(1.0, 0.0)).norm())
    });

    let bracket = worst("lift-bracket", BRACKET_TOL, |z, w| {
        bracket_check(&fs, &TwistorChartPoint::new(z, w)?, BRACKET_STEP)
    })
    .detail(format!("{GRID}×{GRID} grid, central differences in w, step {BRACKET_STEP:e}"));

    let sphere = worst("sphere-section-bounded", 0.0, |z, _| {
        let mut excess = fubini_study_section(1.0, z)? - 0.5;
        excess = excess.max(0.0);
        let on_circle = fubini_study_section(1.0, C::from_polar(1.0, z.re + z.im))?;
        Ok(excess.max((on_circle - 0.5).abs()))
    });

    // Inversion z₁ = 1/z gives w = (z̄₁²/z₁²) w₁; rotations z₁ = e^{iθ} z
    // act as w ↦ w e^{2iθ}; successive changes compose and keep |w|.
    let charts = worst("chart-change-covariance", CHART_TOL, |z, w| {
        let theta = z.re - 0.5 * z.im;
        let rotated = chart_change_section(w, C::from_polar(1.0, -theta))?;
        let rotation = (rotated - w * C::from_polar(1.0, 2.0 * theta)).norm();
        let c1 = z * 2.0 + C::new(0.3, 0.0);
        let c2 = C::new(1.0, 0.5) + z * z;
        let composed = chart_change_section(chart_change_section(w, c1)?, c2)?;
        let direct = chart_change_section(w, c1 * c2)?;
        let modulus = (chart_change_section(w, c1)?.norm() - w.norm()).abs();
        let z1 = z.inv();
        let w1 = chart_change_section(w, -(z1 * z1).inv())?;
        let inversion = (w - w1 * (z1.conj() * z1.conj()) / (z1 * z1)).norm();
        Ok(rotation.max((composed - direct).norm()).max(modulus).max(inversion))
    });
    let degenerate = matches!(chart_change_section(C::new(0.1, 0.0), C::new(0.0, 0.0)), Err(Error::ZeroDerivative));
    let charts = charts.require(degenerate, "zero chart derivative accepted");

    let jmat = worst("j-matrix", METRIC_TOL, |z, w| {
        let j = j_matrix(w)?;
        let square = cmax_abs(&(&j * &j + CMat::identity(2, 2)));
        let tame = taming_value(&fs, &TwistorChartPoint::new(z, w)?)?;
        Ok(if tame > 0.0 { square } else { f64::INFINITY })
    });

    let fixture = SectionField::fubini_study(1.0)
        .and_then(|s| selfholo_residual(&s, &fs, C::new(1.0, 0.0)))
        .map(|r| (r - C::new(1.0 / 16.0, 0.0)).norm());
    let fixture = match fixture {
        Ok(r) => Check::within("sphere-section-self-holomorphy-fixture", r, FIXTURE_TOL)
            .detail("k = 1 at z = 1, expected 1/16; section derivatives by central differences"),
        Err(e) => Check::error("sphere-section-self-holomorphy-fixture", FIXTURE_TOL, &e),
    };

    vec![lift, zero_section, metric, bracket, sphere, charts, jmat, fixture]
}
