use twistor_core::linalg::{self, max_abs};
use twistor_core::siegel::{
    antiholomorphy_residual, embed_unitary, fixes_base_point, mobius, phi, phi_inverse, SiegelPoint,
};
use twistor_core::symplectic::{j0, random_sp};
use twistor_core::{sampling, Error};

use super::{count_check, max_check, seed};
use crate::{Check, SuiteConfig};

const FD_STEP: f64 = 1e-5;
const ANTIHOLOMORPHY_TOL: f64 = 1e-6;
/// Random domain points per group element in the equivariance sweep.
const POINTS: usize = 10;

pub fn run(config: &SuiteConfig) -> Vec<Check> {
    let n = config.n;
    let exec = config.exec;

    let base = SiegelPoint::base(n)
        .and_then(|z| phi(&z))
        .map(|j| vec![max_abs(&(j.matrix() - j0(n)))]);

    let equivariance = exec.try_map(config.samples, |s| {
        let g = random_sp(n, seed(config, "equivariance", s))?;
        let g_inv = g.clone().try_inverse().expect("symplectic matrices are invertible");
        let mut rng = sampling::rng(seed(config, "equivariance-points", s));
        let mut worst = 0.0_f64;
        for k in 0..=POINTS {
            let z = if k == 0 { SiegelPoint::base(n)? } else { SiegelPoint::random(n, &mut rng)? };
            let lhs = phi(&mobius(&g, &z)?)?;
            let rhs = &g * phi(&z)?.matrix() * &g_inv;
            worst = worst.max(max_abs(&(lhs.matrix() - rhs)));
        }
        Ok::<_, Error>(worst)
    });

    let round_trip = exec.try_map(config.samples, |s| {
        let z = SiegelPoint::random(n, &mut sampling::rng(seed(config, "round-trip", s)))?;
        let back = phi_inverse(&phi(&z)?)?;
        Ok::<_, Error>(linalg::cmax_abs(&(back.to_complex() - z.to_complex())))
    });

    let pairs = config.samples.min(20);
    let antiholomorphy = exec.try_map(pairs, |s| {
        let mut rng = sampling::rng(seed(config, "antiholomorphy", s));
        let z = SiegelPoint::random(n, &mut rng)?;
        let h = sampling::complex_symmetric(n, &mut rng);
        antiholomorphy_residual(&z, &h, FD_STEP)
    });

    let order = exec.try_map(pairs, |s| {
        let mut rng = sampling::rng(seed(config, "antiholomorphy", s));
        let z = SiegelPoint::random(n, &mut rng)?;
        let h = sampling::complex_symmetric(n, &mut rng);
        let coarse = antiholomorphy_residual(&z, &h, 1e-3)?;
        let fine = antiholomorphy_residual(&z, &h, 5e-4)?;
        Ok::<_, Error>(coarse >= 3.0 * fine)
    });

    let stabilizer = exec.try_map(config.samples, |s| {
        let a = sampling::unitary(n, &mut sampling::rng(seed(config, "stabilizer", s)));
        fixes_base_point(&embed_unitary(&a, true)?)
    });

    vec![
        max_check("phi-base-point", 1e-12, base),
        max_check("phi-equivariance", config.tol, equivariance),
        max_check("round-trip", config.tol, round_trip),
        max_check("anti-holomorphy", ANTIHOLOMORPHY_TOL, antiholomorphy).detail(format!(
            "{pairs} pairs, central differences, step {FD_STEP:e}"
        )),
        count_check("anti-holomorphy-order", order).detail("residual shrinks ≥ 3× from step 1e-3 to 5e-4"),
        count_check("unitary-stabilizer", stabilizer),
    ]
}
