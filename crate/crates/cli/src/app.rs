//! Command-line definitions and command runners.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use opconvex::entropy::{
    concavity_gap, corollary_gap, intermediate_bound_gap, mix_states, pinsker_gap, quantum_relative_entropy,
    trace_distance, von_neumann_entropy, DensityMatrix,
};
use opconvex::functions::operator_convex_defaults;
use opconvex::inequality::{modulus_of_convexity, theorem1_gap, theorem1_rhs, ConvexityInstance, MIDPOINT_BAND};
use opconvex::miner::{mine_counterexample, DEFAULT_C_GRID};
use opconvex::{psd_certificate, FunctionDescriptor};

use crate::error::{CliError, CliResult};
use crate::matrix_io::{read_matrix, MatrixFile};
use crate::report::{finite, to_json, CounterexampleReport, EntropyReport, GapReport, MineReport, VERSION};
use crate::suites::{run_suite, Suite, SuiteConfig, DEFAULT_C_VALUES, ENTROPY_GAP_TOL, PINSKER_TOL};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "opconvex", version, about = "Verify operator convexity inequalities on random and user-supplied matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// PSD tolerance scale: a gap passes if its least eigenvalue is >= -tol * (1 + spectral radius).
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite over seeded random instances.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Comma-separated function names, e.g. `xlogx,resolvent:0.5`.
        #[arg(long, value_delimiter = ',')]
        functions: Option<Vec<String>>,
        /// Dimension range `a..b` (inclusive) or a single dimension.
        #[arg(long)]
        dims: Option<String>,
        /// Comma-separated weights in (0, 1).
        #[arg(long, value_delimiter = ',')]
        c: Option<Vec<f64>>,
    },
    /// Evaluate the lower bound on one instance read from matrix files.
    Gap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        function: String,
    },
    /// Entropy quantities and gaps for two density matrices.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
    },
    /// Search for an instance violating the lower bound.
    Mine {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        function: String,
        #[arg(long)]
        dims: Option<String>,
    },
}

/// A rendered report and whether every inequality held.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_VIOLATION
        }
    }
}

pub fn parse_dims(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("--dims expects `a..b` or `a`, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let d = s.trim().parse().map_err(|_| bad())?;
            (d, d)
        }
    };
    if !(1 <= lo && lo <= hi && hi <= 8) {
        return Err(CliError::Usage(format!("--dims must satisfy 1 <= a <= b <= 8, got {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn parse_functions(names: &[String]) -> CliResult<Vec<FunctionDescriptor>> {
    names.iter().map(|n| Ok(n.trim().parse::<FunctionDescriptor>()?)).collect()
}

fn read_density(path: &Path) -> CliResult<DensityMatrix> {
    DensityMatrix::new(read_matrix(path)?).map_err(|e| CliError::from(e).in_file(path))
}

pub fn run_verify(
    common: &Common,
    suite: Suite,
    functions: Option<&[String]>,
    dims: Option<&str>,
    c: Option<&[f64]>,
) -> CliResult<Outcome> {
    let functions = match functions {
        Some(names) => parse_functions(names)?,
        None => operator_convex_defaults(),
    };
    let cfg = SuiteConfig {
        seed: common.seed,
        trials: common.trials,
        tol: common.tol,
        dims: dims.map(parse_dims).transpose()?.unwrap_or(suite.default_dims()),
        c_values: c.map(<[f64]>::to_vec).unwrap_or_else(|| DEFAULT_C_VALUES.to_vec()),
        functions,
    };
    let report = run_suite(suite, &cfg)?;
    Ok(Outcome {
        passed: report.passed,
        report: to_json(&report),
    })
}

pub fn run_gap(common: &Common, a: &Path, b: &Path, c: f64, function: &str) -> CliResult<Outcome> {
    let f: FunctionDescriptor = function.parse()?;
    let (ma, mb) = (read_matrix(a)?, read_matrix(b)?);
    let inst = ConvexityInstance::new(ma, mb, c, f.clone())?;
    let gap = theorem1_gap(&inst)?;
    let verdict = psd_certificate(&gap, common.tol)?;
    let report = GapReport {
        function: f.name().to_string(),
        c,
        dim: inst.dim(),
        branch: if (c - 0.5).abs() <= MIDPOINT_BAND { "midpoint" } else { "bregman" }.to_string(),
        modulus: MatrixFile::from(&modulus_of_convexity(&inst)?),
        rhs: MatrixFile::from(&theorem1_rhs(&inst)?),
        gap: MatrixFile::from(&gap),
        verdict,
        version: VERSION.to_string(),
    };
    Ok(Outcome {
        passed: verdict.is_psd,
        report: to_json(&report),
    })
}

pub fn run_entropy(rho: &Path, sigma: &Path, c: f64) -> CliResult<Outcome> {
    if !(c > 0.0 && c < 1.0) {
        return Err(CliError::Usage(format!("--c must lie in (0, 1), got {c}")));
    }
    let (r, s) = (read_density(rho)?, read_density(sigma)?);
    if r.dim() != s.dim() {
        return Err(CliError::DimensionMismatch(format!("rho is {0}x{0}, sigma is {1}x{1}", r.dim(), s.dim())));
    }
    let corollary = corollary_gap(&r, &s, c)?;
    let pinsker = pinsker_gap(&r, &s)?;
    let intermediate = if (c - 0.5).abs() > MIDPOINT_BAND {
        Some(intermediate_bound_gap(&r, &s, c)?)
    } else {
        None
    };
    let passed = corollary >= -ENTROPY_GAP_TOL
        && pinsker >= -PINSKER_TOL
        && intermediate.is_none_or(|g| g >= -ENTROPY_GAP_TOL);
    let report = EntropyReport {
        dim: r.dim(),
        c,
        entropy_rho: von_neumann_entropy(&r)?,
        entropy_sigma: von_neumann_entropy(&s)?,
        entropy_mixture: von_neumann_entropy(&mix_states(&r, &s, c)?)?,
        concavity_gap: concavity_gap(&r, &s, c)?,
        trace_distance: trace_distance(&r, &s)?,
        relative_entropy: finite(quantum_relative_entropy(&r, &s)?),
        corollary_gap: corollary,
        pinsker_gap: finite(pinsker),
        intermediate_bound_gap: intermediate.and_then(finite),
        passed,
        version: VERSION.to_string(),
    };
    Ok(Outcome {
        passed,
        report: to_json(&report),
    })
}

pub fn run_mine(common: &Common, function: &str, dims: Option<&str>) -> CliResult<Outcome> {
    let f: FunctionDescriptor = function.parse()?;
    let (lo, hi) = dims.map(parse_dims).transpose()?.unwrap_or((1, 8));
    let dim_list: Vec<usize> = (lo..=hi).collect();
    let start = Instant::now();
    let rec = mine_counterexample(&f, common.trials, common.seed, &dim_list, &DEFAULT_C_GRID)?;
    let report = MineReport {
        function: f.name().to_string(),
        seed: common.seed,
        trials: common.trials,
        dims: [lo, hi],
        c_grid: DEFAULT_C_GRID.to_vec(),
        violation: rec.is_some(),
        counterexample: rec.as_ref().map(CounterexampleReport::from),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        version: VERSION.to_string(),
    };
    Ok(Outcome {
        passed: rec.is_none(),
        report: to_json(&report),
    })
}

pub fn execute(cli: &Cli) -> CliResult<(Outcome, Option<PathBuf>)> {
    match &cli.command {
        Command::Verify {
            common,
            suite,
            functions,
            dims,
            c,
        } => Ok((
            run_verify(common, *suite, functions.as_deref(), dims.as_deref(), c.as_deref())?,
            common.out.clone(),
        )),
        Command::Gap {
            common,
            a,
            b,
            c,
            function,
        } => Ok((run_gap(common, a, b, *c, function)?, common.out.clone())),
        Command::Entropy { common, rho, sigma, c } => Ok((run_entropy(rho, sigma, *c)?, common.out.clone())),
        Command::Mine { common, function, dims } => Ok((run_mine(common, function, dims.as_deref())?, common.out.clone())),
    }
}

/// Runs a parsed command line, writes the report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let (outcome, out) = match execute(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &outcome.report) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{}", outcome.report),
    }
    outcome.exit_code()
}
