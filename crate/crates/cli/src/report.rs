//! Structured run reports.
//!
//! Every report carries the tool version and the seed. `elapsed_seconds` is
//! the only field that varies between runs with identical flags.

use serde::{Deserialize, Serialize};

use opconvex::miner::{CounterexampleRecord, TrialSource};
use opconvex::PsdVerdict;

use crate::matrix_io::MatrixFile;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Offenders kept per check.
pub const MAX_OFFENDERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub trial_index: u64,
    pub dim: usize,
    pub c: f64,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub function: String,
    pub a: MatrixFile,
    pub b: MatrixFile,
    pub c: f64,
    pub min_gap_eigenvalue: f64,
    pub unrefined_min_gap_eigenvalue: f64,
    pub sweep_min_gap_eigenvalue: Option<f64>,
    pub trial_index: u64,
    pub source: TrialSource,
}

impl From<&CounterexampleRecord> for CounterexampleReport {
    fn from(r: &CounterexampleRecord) -> Self {
        Self {
            function: r.function_name.clone(),
            a: MatrixFile::from(&r.a),
            b: MatrixFile::from(&r.b),
            c: r.c,
            min_gap_eigenvalue: r.min_gap_eigenvalue,
            unrefined_min_gap_eigenvalue: r.unrefined_min_gap_eigenvalue,
            sweep_min_gap_eigenvalue: r.sweep_min_gap_eigenvalue,
            trial_index: r.trial_index,
            source: r.source,
        }
    }
}

/// Pass/fail tally of one check over all trials.
///
/// A trial passes when its `value` is at least its `threshold`; for PSD
/// checks the value is the minimum eigenvalue of the gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub pass: usize,
    pub fail: usize,
    pub worst_value: f64,
    pub worst_trial: u64,
    /// Most negative margins `value − threshold`, failing or not.
    pub worst_offenders: Vec<Offender>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.fail == 0 && self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub dims: [usize; 2],
    pub c_values: Vec<f64>,
    pub checks: Vec<CheckSummary>,
    pub worst_min_eigenvalue: f64,
    pub passed: bool,
    pub elapsed_seconds: f64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub function: String,
    pub c: f64,
    pub dim: usize,
    pub branch: String,
    pub modulus: MatrixFile,
    pub rhs: MatrixFile,
    pub gap: MatrixFile,
    pub verdict: PsdVerdict,
    pub version: String,
}

/// Infinite relative entropies serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub dim: usize,
    pub c: f64,
    pub entropy_rho: f64,
    pub entropy_sigma: f64,
    pub entropy_mixture: f64,
    pub concavity_gap: f64,
    pub trace_distance: f64,
    pub relative_entropy: Option<f64>,
    pub corollary_gap: f64,
    pub pinsker_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intermediate_bound_gap: Option<f64>,
    pub passed: bool,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MineReport {
    pub function: String,
    pub seed: u64,
    pub trials: usize,
    pub dims: [usize; 2],
    pub c_grid: Vec<f64>,
    pub violation: bool,
    pub counterexample: Option<CounterexampleReport>,
    pub elapsed_seconds: f64,
    pub version: String,
}

pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
