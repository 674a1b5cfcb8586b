use twistor_core::integrability::{
    act_on_curvature_like, act_on_torsion_like, curvature_02_residual_tensor, curvature_residual_tensor,
    invariant_kernel, same_kernel, torsion_residual_tensor, CurvatureTensor, Kind, KernelReport, TorsionTensor,
};
use twistor_core::linalg::{cmax_abs, CMat};
use twistor_core::symplectic::{canonical_structure, random_sp};
use twistor_core::{sampling, ComplexStructure, Error, Result};

use super::{max_check, seed};
use crate::{Check, SuiteConfig};

/// Kernel computations are run at `min(n, MAX_N)`; the tensor spaces grow
/// like `n⁴`.
pub const MAX_N: usize = 2;

pub fn run(config: &SuiteConfig) -> Vec<Check> {
    let n = config.n.min(MAX_N);
    let mut checks = Vec::new();
    for kind in Kind::ALL {
        checks.extend(kernel_checks(config, kind, n));
    }
    checks.push(max_check("residual-covariance", config.tol, covariance(config, n)));
    checks
}

fn kernel(config: &SuiteConfig, kind: Kind, n: usize, l: usize, samples: usize) -> Result<KernelReport> {
    invariant_kernel(kind, n, l, samples, seed(config, kind.name(), 0), config.exec)
}

fn kernel_checks(config: &SuiteConfig, kind: Kind, n: usize) -> Vec<Check> {
    let name = kind.name();
    let reports: Result<Vec<KernelReport>> =
        (0..=n).map(|l| kernel(config, kind, n, l, config.samples)).collect();
    let reports = match reports {
        Ok(r) => r,
        Err(e) => {
            return vec![
                Check::error(format!("{name}-kernel-independent-of-l"), 0.0, &e),
                Check::error(format!("{name}-kernel-stable"), 0.0, &e),
            ]
        }
    };
    let dims: Vec<usize> = reports.iter().map(|r| r.kernel_dim).collect();
    let mismatched = reports.iter().filter(|r| !same_kernel(&reports[0], r)).count();
    let mut independent = Check::count(format!("{name}-kernel-independent-of-l"), mismatched, reports.len())
        .detail(format!("n={n}, kernel dims {dims:?} of {} components", reports[0].components));
    if kind == Kind::Torsion && n == 1 {
        independent = independent.require(dims.iter().all(|&d| d == 2), "torsion kernel is not all of ℝ²⊗Λ²");
    }

    let stable = match kernel(config, kind, n, 0, 2 * config.samples) {
        Ok(doubled) => {
            let ok = same_kernel(&reports[0], &doubled);
            Check::count(format!("{name}-kernel-stable"), usize::from(!ok), 1).detail(format!(
                "dim {} at {} samples, {} at {}",
                reports[0].kernel_dim,
                config.samples,
                doubled.kernel_dim,
                2 * config.samples
            ))
        }
        Err(e) => Check::error(format!("{name}-kernel-stable"), 0.0, &e),
    };
    vec![independent, stable]
}

fn relative(lhs: &[CMat], rhs: &[CMat]) -> f64 {
    let diff = lhs.iter().zip(rhs).map(|(a, b)| cmax_abs(&(a - b))).fold(0.0, f64::max);
    let size = rhs.iter().map(cmax_abs).fold(1.0, f64::max);
    diff / size
}

/// Residual tensors transform as `R(g·T, gJg⁻¹) = g·R(T, J)`; returns the
/// relative deviation per sample.
fn covariance(config: &SuiteConfig, n: usize) -> Result<Vec<f64>> {
    config.exec.try_map(config.samples, |s| {
        let l = s % (n + 1);
        let g = random_sp(n, seed(config, "covariance", s))?;
        let mut rng = sampling::rng(seed(config, "covariance-tensors", s));
        let j = ComplexStructure::new(canonical_structure(n, l)?)?;
        let jg = j.conjugated(&g)?;
        let t = TorsionTensor::random(n, &mut rng)?;
        let c = CurvatureTensor::random(n, &mut rng)?;
        let cg = c.transformed(&g)?;
        let torsion = relative(
            &torsion_residual_tensor(&t.transformed(&g)?, &jg)?,
            &act_on_torsion_like(&g, &torsion_residual_tensor(&t, &j)?)?,
        );
        let flat = |t: Vec<Vec<CMat>>| t.into_iter().flatten().collect::<Vec<_>>();
        let curvature = relative(
            &flat(curvature_residual_tensor(&cg, &jg)?),
            &flat(act_on_curvature_like(&g, &curvature_residual_tensor(&c, &j)?)?),
        );
        let curvature02 = relative(
            &flat(curvature_02_residual_tensor(&cg, &jg)?),
            &flat(act_on_curvature_like(&g, &curvature_02_residual_tensor(&c, &j)?)?),
        );
        Ok::<_, Error>(torsion.max(curvature).max(curvature02))
    })
}
