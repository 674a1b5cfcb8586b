pub mod integrability;
pub mod lagrangian;
pub mod riemann;
pub mod siegel;
pub mod symplectic;

use twistor_core::{sampling, Error};

use crate::{Check, SuiteConfig};

/// Seed of sample `s` in the named stream, independent of scheduling.
pub(crate) fn seed(config: &SuiteConfig, stream: &str, s: usize) -> u64 {
    let tag = stream.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    sampling::sample_seed(sampling::sample_seed(config.seed, tag), s as u64)
}

/// Largest of the per-sample residuals against `tol`.
pub(crate) fn max_check(name: &str, tol: f64, residuals: Result<Vec<f64>, Error>) -> Check {
    match residuals {
        Ok(r) => {
            let worst = r.iter().copied().fold(0.0, f64::max);
            let nan = r.iter().any(|v| v.is_nan());
            Check::within(name, if nan { f64::NAN } else { worst }, tol).detail(format!("{} samples", r.len()))
        }
        Err(e) => Check::error(name, tol, &e),
    }
}

/// Counts `false` outcomes.
pub(crate) fn count_check(name: &str, outcomes: Result<Vec<bool>, Error>) -> Check {
    match outcomes {
        Ok(v) => Check::count(name, v.iter().filter(|ok| !**ok).count(), v.len()),
        Err(e) => Check::error(name, 0.0, &e),
    }
}
