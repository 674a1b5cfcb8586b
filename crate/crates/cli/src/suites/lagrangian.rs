use twistor_core::lagrangian::{
    hermitian_signature, index_from_signature, is_pseudo_unitary, j_to_plane, parabolic_assemble,
    parabolic_decompose, plane_to_j_with_residue, preserves_q_metric, Parabolic,
};
use twistor_core::linalg::{self, complexify, max_abs, CMat};
use twistor_core::symplectic::{canonical_structure, j0, random_sp};
use twistor_core::{sampling, tol, CompatibleStructure, Error, Result};

use super::{count_check, max_check, seed};
use crate::{Check, SuiteConfig};

const REASSEMBLY_TOL: f64 = 1e-10;

fn sample(config: &SuiteConfig, stream: &str, s: usize) -> Result<(CompatibleStructure, usize)> {
    let n = config.n;
    let l = s % (n + 1);
    let g = random_sp(n, seed(config, stream, s))?;
    let g_inv = g.clone().try_inverse().expect("symplectic matrices are invertible");
    Ok((CompatibleStructure::standard(&g * canonical_structure(n, l)? * g_inv)?, l))
}

pub fn run(config: &SuiteConfig) -> Vec<Check> {
    let n = config.n;
    let exec = config.exec;

    let bijection = exec.try_map(config.samples, |s| {
        let (j, _) = sample(config, "bijection", s)?;
        let w = j_to_plane(&j)?;
        let (back, residue) = plane_to_j_with_residue(&w, j.form())?;
        let same = j_to_plane(&back)?.same_plane(&w);
        let err = max_abs(&(back.matrix() - j.matrix()));
        Ok::<_, Error>((if same { err } else { f64::INFINITY }, residue))
    });
    let (bijection, reality) = match bijection {
        Ok(v) => (Ok(v.iter().map(|p| p.0).collect()), Ok(v.iter().map(|p| p.1).collect())),
        Err(e) => (Err(e.clone()), Err(e)),
    };

    let signature = exec.try_map(config.samples, |s| {
        let (j, l) = sample(config, "signature", s)?;
        Ok::<_, Error>(index_from_signature(hermitian_signature(&j_to_plane(&j)?, j.form())?) == l)
    });

    // Even samples lie in P, odd ones are P J₀ P' with lower-left a⁻ᵀ a' ≠ 0.
    let parabolic = exec.try_map(config.samples, |s| {
        let mut rng = sampling::rng(seed(config, "parabolic", s));
        let a = sampling::invertible_complex(n, &mut rng);
        let e = sampling::complex_symmetric(n, &mut rng);
        let member = parabolic_assemble(&a, &e)?;
        if s % 2 == 0 {
            match parabolic_decompose(&member)? {
                Parabolic::Member { a: a2, e: e2 } => {
                    let again = parabolic_assemble(&a2, &e2)?;
                    Ok::<_, Error>(linalg::cmax_abs(&(again - member)))
                }
                Parabolic::Outside { .. } => Ok(f64::INFINITY),
            }
        } else {
            let other = parabolic_assemble(
                &sampling::invertible_complex(n, &mut rng),
                &sampling::complex_symmetric(n, &mut rng),
            )?;
            let g = &member * complexify(&j0(n)) * other;
            Ok(match parabolic_decompose(&g)? {
                Parabolic::Outside { .. } => 0.0,
                Parabolic::Member { .. } => f64::INFINITY,
            })
        }
    });

    let non_symplectic = parabolic_decompose(&(CMat::identity(2 * n, 2 * n) * num_complex::Complex64::new(2.0, 0.0)));
    let rejects = matches!(non_symplectic, Err(Error::NotSymplectic(_)));

    // Both directions: a ∈ U(n-l,l), e = 0 preserves Q_l; e ≠ 0 or a
    // generic does not.
    let intersection = exec.try_map(config.samples, |s| {
        let l = s % (n + 1);
        let mut rng = sampling::rng(seed(config, "pseudo-unitary", s));
        let a = sampling::pseudo_unitary(n, l, &mut rng);
        let zero = CMat::zeros(n, n);
        let e = sampling::complex_symmetric(n, &mut rng);
        let b = sampling::invertible_complex(n, &mut rng);
        Ok::<_, Error>(
            is_pseudo_unitary(&a, l)?
                && preserves_q_metric(&parabolic_assemble(&a, &zero)?, l)?
                && !preserves_q_metric(&parabolic_assemble(&a, &e)?, l)?
                && (is_pseudo_unitary(&b, l)? == preserves_q_metric(&parabolic_assemble(&b, &zero)?, l)?),
        )
    });

    vec![
        max_check("bijection", config.tol, bijection),
        max_check("reality", tol::REALITY, reality),
        count_check("signature-calibration", signature),
        max_check("parabolic-decomposition", REASSEMBLY_TOL, parabolic),
        Check::count("non-symplectic-rejected", usize::from(!rejects), 1),
        count_check("pseudo-unitary-intersection", intersection),
    ]
}
