use twistor_core::linalg::{self, max_abs, RMat};
use twistor_core::symplectic::{
    build_symplectic_basis, canonical_conjugator, canonical_structure, j0, projectors, random_sp,
    sp_membership, standard_form, taming_index,
};
use twistor_core::{sampling, tol, ComplexStructure, Result, SymplecticForm};

use super::{count_check, max_check, seed};
use crate::{Check, SuiteConfig};

/// `g J₀Q_l g⁻¹` with `l` cycling through `0..=n`.
fn sample(config: &SuiteConfig, stream: &str, s: usize) -> Result<(ComplexStructure, usize)> {
    let n = config.n;
    let l = s % (n + 1);
    let g = random_sp(n, seed(config, stream, s))?;
    let g_inv = g.clone().try_inverse().expect("symplectic matrices are invertible");
    Ok((ComplexStructure::new(&g * canonical_structure(n, l)? * g_inv)?, l))
}

pub fn run(config: &SuiteConfig) -> Vec<Check> {
    let n = config.n;
    let exec = config.exec;
    let form = match standard_form(n) {
        Ok(f) => f,
        Err(e) => return vec![Check::error("standard-form", 0.0, &e)],
    };

    let conjugator = exec.try_map(config.samples, |s| {
        let (j, l) = sample(config, "conjugator", s)?;
        let (g, found) = canonical_conjugator(&j, &form)?;
        let g_inv = g.clone().try_inverse().expect("conjugator is symplectic");
        let residual = max_abs(&(&g_inv * j.matrix() * &g - canonical_structure(n, l)?));
        let member = sp_membership(&g, &form)?;
        Ok(if found == l && member { residual } else { f64::INFINITY })
    });

    let index = exec.try_map(config.samples, |s| {
        let (j, l) = sample(config, "index", s)?;
        Ok(taming_index(&j, &form)? == l)
    });

    let membership = exec.try_map(config.samples, |s| {
        let g = random_sp(n, seed(config, "membership", s))?;
        let dev = max_abs(&(g.transpose() * j0(n) * &g - j0(n)));
        Ok(dev / linalg::unit_scale(&g).powi(2))
    });

    let basis = exec.try_map(config.samples, |s| {
        let mut rng = sampling::rng(seed(config, "basis", s));
        let m = sampling::real(2 * n, 2 * n, &mut rng) + RMat::identity(2 * n, 2 * n) * 3.0;
        let f = SymplecticForm::new(m.transpose() * j0(n) * &m)?;
        let b = build_symplectic_basis(&f)?;
        let dev = max_abs(&(b.transpose() * f.omega() * &b - j0(n)));
        Ok(dev / linalg::unit_scale(f.omega()))
    });

    let rank = exec.try_map(config.samples, |s| {
        let (j, _) = sample(config, "projector", s)?;
        let (plus, minus) = projectors(&j);
        let r = |m| linalg::numerical_rank(&linalg::csingular_values(m), tol::PLANE_RANK_REL);
        Ok(r(&plus) == n && r(&minus) == n)
    });

    vec![
        max_check("canonical-conjugator", config.tol, conjugator),
        count_check("taming-index", index),
        max_check("random-sp-membership", config.tol, membership),
        max_check("symplectic-basis", config.tol, basis),
        count_check("projector-rank", rank),
    ]
}
