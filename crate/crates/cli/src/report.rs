use serde::{Deserialize, Serialize};
use twistor_core::Error;

/// Current JSON layout of [`SuiteReport`].
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

/// One measured quantity compared against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// `None` when the computation did not produce a number.
    pub residual: Option<f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes iff `residual ≤ tolerance`; NaN fails.
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            status,
            residual: residual.is_finite().then_some(residual),
            tolerance,
            detail: None,
        }
    }

    /// Passes iff no failures were counted.
    pub fn count(name: impl Into<String>, failures: usize, total: usize) -> Self {
        Self::within(name, failures as f64, 0.0).detail(format!("{failures} of {total} failed"))
    }

    /// A check whose computation raised an error. Undecidable rank or
    /// signature calls are reported as indeterminate, anything else fails.
    pub fn error(name: impl Into<String>, tolerance: f64, err: &Error) -> Self {
        let status = match err {
            Error::IndeterminateRank(_) | Error::IndeterminateSignature { .. } => Status::Indeterminate,
            _ => Status::Fail,
        };
        Self { name: name.into(), status, residual: None, tolerance, detail: Some(err.to_string()) }
    }

    pub fn from_result(name: impl Into<String>, tolerance: f64, r: Result<Check, Error>) -> Self {
        let name = name.into();
        match r {
            Ok(mut c) => {
                c.name = name;
                c
            }
            Err(e) => Self::error(name, tolerance, &e),
        }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Forces failure, keeping the residual, when `ok` is false.
    pub fn require(mut self, ok: bool, why: impl Into<String>) -> Self {
        if !ok {
            self.status = Status::Fail;
            self.detail = Some(why.into());
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Parameters echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub suite: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub config: ConfigEcho,
    pub status: Status,
    pub checks: Vec<Check>,
    pub wall_time_ms: f64,
    pub version: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} (n={}, samples={}, seed={}, tol={:e})\n",
            self.suite, self.config.n, self.config.samples, self.config.seed, self.config.tol
        );
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Indeterminate => "INDETERMINATE",
            };
            let residual = c.residual.map_or_else(|| "-".to_string(), |r| format!("{r:.3e}"));
            out.push_str(&format!("{tag:<13} {:<56} residual {residual:>10}  tol {:.1e}", c.name, c.tolerance));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  ({d})"));
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        out.push_str(&format!(
            "{}: {} checks, {failed} not passing, {:.0} ms\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.wall_time_ms
        ));
        out
    }
}

/// Overall status: pass iff every check passes.
pub fn overall(checks: &[Check]) -> Status {
    if checks.iter().all(Check::passed) {
        Status::Pass
    } else {
        Status::Fail
    }
}
