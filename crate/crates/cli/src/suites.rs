//! Batch verification suites over seeded random instances.
//!
//! Trial `t` draws its instance from `trial_rng(seed, t)`, so results do not
//! depend on scheduling. Trials run in parallel and are aggregated in index
//! order.

use std::time::Instant;

use clap::ValueEnum;
use rand::Rng;
use rayon::prelude::*;

use opconvex::entropy::{continuity_check, corollary_gap, intermediate_bound_gap, pinsker_gap, quantum_relative_entropy};
use opconvex::functions::FunctionKind;
use opconvex::inequality::{
    bregman_divergence, bregman_resolvent_closed_form, build_dilation, midpoint_from_dilation_check,
    strengthened_ah_gap, theorem1_gap, ConvexityInstance, MIDPOINT_BAND,
};
use opconvex::miner::{mine_counterexample, DEFAULT_C_GRID};
use opconvex::sampler::{sample_density, sample_positive_definite, trial_rng};
use opconvex::{psd_certificate, FunctionDescriptor, HermitianMatrix};

use crate::error::{CliError, CliResult};
use crate::report::{CheckSummary, CounterexampleReport, Offender, VerificationReport, MAX_OFFENDERS, VERSION};

pub const DEFAULT_C_VALUES: [f64; 7] = [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9];
pub const AH_SHIFTS: [f64; 3] = [0.1, 1.0, 10.0];
pub const CONTINUITY_DELTAS: [f64; 3] = [0.01, 0.05, 0.1];

pub const ENTROPY_GAP_TOL: f64 = 1e-9;
pub const PINSKER_TOL: f64 = 1e-12;
pub const PETZ_TOL: f64 = 1e-9;
pub const CONTINUITY_TOL: f64 = 1e-12;
pub const DILATION_IDENTITY_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Spectral floor and scale of random positive definite draws.
const PD_FLOOR: f64 = 0.1;
const PD_SCALE: f64 = 3.0;
/// Spectral floor of random states before normalization.
const STATE_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem1,
    Ah,
    Bregman,
    Entropy,
    Dilation,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Ah => "ah",
            Suite::Bregman => "bregman",
            Suite::Entropy => "entropy",
            Suite::Dilation => "dilation",
        }
    }

    /// Dimension range used when none is given.
    pub fn default_dims(self) -> (usize, usize) {
        match self {
            Suite::Entropy => (2, 8),
            _ => (1, 8),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub dims: (usize, usize),
    pub c_values: Vec<f64>,
    pub functions: Vec<FunctionDescriptor>,
}

impl SuiteConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be a non-negative number, got {}", self.tol)));
        }
        let (lo, hi) = self.dims;
        if !(1 <= lo && lo <= hi && hi <= 8) {
            return Err(CliError::Usage(format!("--dims must satisfy 1 <= a <= b <= 8, got {lo}..{hi}")));
        }
        if self.c_values.is_empty() {
            return Err(CliError::Usage("--c needs at least one value".into()));
        }
        if let Some(c) = self.c_values.iter().find(|&&c| !(c > 0.0 && c < 1.0)) {
            return Err(CliError::Usage(format!("c values must lie in (0, 1), got {c}")));
        }
        if self.functions.is_empty() {
            return Err(CliError::Usage("--functions needs at least one name".into()));
        }
        Ok(())
    }

    fn off_band_c(&self) -> Vec<f64> {
        self.c_values.iter().copied().filter(|c| (c - 0.5).abs() > MIDPOINT_BAND).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Observation {
    value: f64,
    threshold: f64,
}

impl Observation {
    fn psd(g: &HermitianMatrix, tol: f64) -> CliResult<Self> {
        let v = psd_certificate(g, tol)?;
        Ok(Self {
            value: v.min_eigenvalue,
            threshold: -v.tolerance,
        })
    }

    fn at_least(value: f64, threshold: f64) -> Self {
        Self { value, threshold }
    }

    /// `−error` against `−limit`.
    fn small(error: f64, limit: f64) -> Self {
        Self {
            value: -error,
            threshold: -limit,
        }
    }
}

struct TrialRecord {
    index: u64,
    dim: usize,
    c: f64,
    observations: Vec<Observation>,
}

fn check_names(suite: Suite, cfg: &SuiteConfig) -> Vec<String> {
    match suite {
        Suite::Theorem1 => cfg.functions.iter().map(|f| f.name().to_string()).collect(),
        Suite::Ah => std::iter::once("ah".to_string())
            .chain(AH_SHIFTS.iter().map(|l| format!("ah_shift_{l}")))
            .collect(),
        Suite::Bregman => cfg
            .functions
            .iter()
            .flat_map(|f| {
                let mut v = vec![f.name().to_string()];
                if matches!(f.kind(), FunctionKind::Resolvent { .. }) {
                    v.push(format!("{}/closed_form", f.name()));
                }
                v
            })
            .collect(),
        Suite::Entropy => {
            let mut v = vec!["corollary".to_string()];
            if !cfg.off_band_c().is_empty() {
                v.push("intermediate".into());
            }
            v.extend(["pinsker", "petz", "continuity"].map(String::from));
            v
        }
        Suite::Dilation => std::iter::once("identities".to_string())
            .chain(cfg.functions.iter().map(|f| format!("midpoint/{}", f.name())))
            .collect(),
    }
}

fn run_trial(suite: Suite, cfg: &SuiteConfig, index: u64) -> CliResult<TrialRecord> {
    let mut rng = trial_rng(cfg.seed, index);
    let dim = rng.random_range(cfg.dims.0..=cfg.dims.1);
    let c = cfg.c_values[rng.random_range(0..cfg.c_values.len())];
    let mut obs = Vec::new();

    match suite {
        Suite::Theorem1 => {
            let a = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            let b = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            for f in &cfg.functions {
                let inst = ConvexityInstance::new(a.clone(), b.clone(), c, f.clone())?;
                obs.push(Observation::psd(&theorem1_gap(&inst)?, cfg.tol)?);
            }
        }
        Suite::Ah => {
            let a = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            let b = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            obs.push(Observation::psd(&strengthened_ah_gap(&a, &b)?, cfg.tol)?);
            for l in AH_SHIFTS {
                obs.push(Observation::psd(&strengthened_ah_gap(&a.shift(l), &b.shift(l))?, cfg.tol)?);
            }
        }
        Suite::Bregman => {
            let a = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            let b = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            for f in &cfg.functions {
                let d = bregman_divergence(f, &a, &b)?;
                obs.push(Observation::psd(&d, cfg.tol)?);
                if let FunctionKind::Resolvent { shift } = f.kind() {
                    let closed = bregman_resolvent_closed_form(shift, &a, &b)?;
                    let err = (&d - &closed).max_abs() / (1.0 + closed.max_abs());
                    obs.push(Observation::small(err, CLOSED_FORM_TOL));
                }
            }
        }
        Suite::Entropy => {
            let rho = sample_density(&mut rng, dim, STATE_FLOOR, 1.0)?;
            let sigma = sample_density(&mut rng, dim, STATE_FLOOR, 1.0)?;
            let mut worst = f64::INFINITY;
            for &cv in &cfg.c_values {
                worst = worst.min(corollary_gap(&rho, &sigma, cv)?);
            }
            obs.push(Observation::at_least(worst, -ENTROPY_GAP_TOL));
            let off = cfg.off_band_c();
            if !off.is_empty() {
                let mut worst = f64::INFINITY;
                for &cv in &off {
                    worst = worst.min(intermediate_bound_gap(&rho, &sigma, cv)?);
                }
                obs.push(Observation::at_least(worst, -ENTROPY_GAP_TOL));
            }
            obs.push(Observation::at_least(pinsker_gap(&rho, &sigma)?, -PINSKER_TOL));
            let breg = bregman_divergence(&"xlogx".parse()?, rho.matrix(), sigma.matrix())?;
            let petz = (breg.trace() - quantum_relative_entropy(&rho, &sigma)?).abs();
            obs.push(Observation::small(petz, PETZ_TOL));
            let mut worst = f64::INFINITY;
            for delta in CONTINUITY_DELTAS {
                worst = worst.min(continuity_check(&rho, &sigma, delta)?);
            }
            obs.push(Observation::at_least(worst, -CONTINUITY_TOL));
        }
        Suite::Dilation => {
            let a = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            let b = sample_positive_definite(&mut rng, dim, PD_FLOOR, PD_SCALE)?;
            let defects = build_dilation(&a, &b, c)?.defects(&a, &b, c)?;
            obs.push(Observation::small(defects.max(), DILATION_IDENTITY_TOL));
            for f in &cfg.functions {
                let v = midpoint_from_dilation_check(f, &a, &b, c, cfg.tol)?;
                obs.push(Observation::at_least(v.min_eigenvalue, -v.tolerance));
            }
        }
    }

    Ok(TrialRecord {
        index,
        dim,
        c,
        observations: obs,
    })
}

fn summarize(name: String, k: usize, records: &[TrialRecord]) -> CheckSummary {
    let mut pass = 0;
    let mut fail = 0;
    let mut worst = (f64::INFINITY, 0u64);
    let mut margins: Vec<(f64, u64, Offender)> = Vec::with_capacity(records.len());
    for r in records {
        let o = r.observations[k];
        if o.value >= o.threshold {
            pass += 1;
        } else {
            fail += 1;
        }
        if (o.value, r.index) < worst {
            worst = (o.value, r.index);
        }
        margins.push((
            o.value - o.threshold,
            r.index,
            Offender {
                trial_index: r.index,
                dim: r.dim,
                c: r.c,
                value: o.value,
                threshold: o.threshold,
            },
        ));
    }
    margins.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    CheckSummary {
        name,
        pass,
        fail,
        worst_value: worst.0,
        worst_trial: worst.1,
        worst_offenders: margins.into_iter().take(MAX_OFFENDERS).map(|m| m.2).collect(),
        counterexample: None,
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> CliResult<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let records: Vec<TrialRecord> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(suite, cfg, t))
        .collect::<CliResult<_>>()?;

    let mut checks: Vec<CheckSummary> = check_names(suite, cfg)
        .into_iter()
        .enumerate()
        .map(|(k, name)| summarize(name, k, &records))
        .collect();

    if suite == Suite::Theorem1 {
        let grid = match cfg.off_band_c() {
            g if g.is_empty() => DEFAULT_C_GRID.to_vec(),
            g => g,
        };
        let dims: Vec<usize> = (cfg.dims.0..=cfg.dims.1).collect();
        for (f, check) in cfg.functions.iter().zip(checks.iter_mut()) {
            if !f.operator_convex() {
                let rec = mine_counterexample(f, cfg.trials, cfg.seed, &dims, &grid)?;
                check.counterexample = rec.as_ref().map(CounterexampleReport::from);
            }
        }
    }

    let worst = checks.iter().map(|c| c.worst_value).fold(f64::INFINITY, f64::min);
    let passed = checks.iter().all(CheckSummary::passed);
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        tol: cfg.tol,
        dims: [cfg.dims.0, cfg.dims.1],
        c_values: cfg.c_values.clone(),
        checks,
        worst_min_eigenvalue: worst,
        passed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.to_string(),
    })
}
