//! Seeded verification suites over `twistor-core`, reported as text or
//! versioned JSON.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use twistor_core::Exec;

pub mod report;
mod suites;

pub use report::{Check, ConfigEcho, Status, SuiteReport, SCHEMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Everything a suite run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub format: Format,
    /// Scheduling only; results do not depend on it.
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            n: 2,
            samples: 50,
            seed: 42,
            tol: 1e-8,
            format: Format::Text,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown suite {0:?}; see --list")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// `2` for usage errors, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownSuite(_) | CliError::InvalidConfig(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

type SuiteFn = fn(&SuiteConfig) -> Vec<Check>;

struct Suite {
    name: &'static str,
    description: &'static str,
    run: Option<SuiteFn>,
}

/// Alphabetical; `all` runs every other entry in this order.
const REGISTRY: [Suite; 6] = [
    Suite { name: "all", description: "every suite below, checks prefixed by suite name", run: None },
    Suite {
        name: "integrability",
        description: "torsion and curvature residuals, joint kernels across taming indices",
        run: Some(suites::integrability::run),
    },
    Suite {
        name: "lagrangian",
        description: "J ↔ real-Lagrangian plane bijection, Hermitian signature, parabolic subgroup",
        run: Some(suites::lagrangian::run),
    },
    Suite {
        name: "riemann-twistor",
        description: "lift coefficients, self-holomorphy, section metric and chart changes on a surface",
        run: Some(suites::riemann::run),
    },
    Suite {
        name: "siegel",
        description: "Möbius action, equivariant map to complex structures, anti-holomorphy",
        run: Some(suites::siegel::run),
    },
    Suite {
        name: "symplectic-core",
        description: "symplectic bases, taming index, canonical conjugators, Sp(2n) sampling",
        run: Some(suites::symplectic::run),
    },
];

/// `(name, description)` for every registered suite, alphabetically.
pub fn list_suites() -> Vec<(&'static str, &'static str)> {
    REGISTRY.iter().map(|s| (s.name, s.description)).collect()
}

fn validate(config: &SuiteConfig) -> Result<&'static Suite, CliError> {
    let suite = REGISTRY
        .iter()
        .find(|s| s.name == config.suite)
        .ok_or_else(|| CliError::UnknownSuite(config.suite.clone()))?;
    if config.n == 0 {
        return Err(CliError::InvalidConfig("--dim must be at least 1".into()));
    }
    if config.samples == 0 {
        return Err(CliError::InvalidConfig("--samples must be at least 1".into()));
    }
    if !(config.tol > 0.0 && config.tol.is_finite()) {
        return Err(CliError::InvalidConfig("--tol must be positive".into()));
    }
    Ok(suite)
}

/// Runs the named suite. Deterministic for a fixed configuration apart
/// from `wall_time_ms`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, CliError> {
    let suite = validate(config)?;
    let start = Instant::now();
    let checks = match suite.run {
        Some(run) => run(config),
        None => REGISTRY
            .iter()
            .filter_map(|s| s.run.map(|run| (s.name, run)))
            .flat_map(|(name, run)| {
                run(config).into_iter().map(move |mut c| {
                    c.name = format!("{name}/{}", c.name);
                    c
                })
            })
            .collect(),
    };
    Ok(SuiteReport {
        schema: SCHEMA,
        suite: config.suite.clone(),
        config: ConfigEcho {
            suite: config.suite.clone(),
            n: config.n,
            samples: config.samples,
            seed: config.seed,
            tol: config.tol,
        },
        status: report::overall(&checks),
        checks,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        version: twistor_core::VERSION.to_string(),
    })
}
