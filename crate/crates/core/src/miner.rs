//! Randomized search for violations of the operator lower bound.
//!
//! For a function that is convex but not operator convex the bound can fail.
//! [`mine_counterexample`] first sweeps a grid of scalar instances, then
//! draws random matrix instances, keeps the most negative gap eigenvalue and
//! deepens it by coordinate descent.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::FunctionDescriptor;
use crate::hermitian::{psd_certificate, HermitianMatrix};
use crate::inequality::{theorem1_gap, ConvexityInstance, MIDPOINT_BAND};
use crate::sampler::{sample_positive_definite, trial_rng};

/// A gap eigenvalue counts as a violation below `-VIOLATION_SCALE * (1 + ‖gap‖)`.
pub const VIOLATION_SCALE: f64 = 1e-6;

/// Scalar values swept for `A` and `B`.
pub const SCALAR_GRID: [f64; 10] = [0.1, 0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0];

pub const DEFAULT_C_GRID: [f64; 6] = [0.1, 0.25, 0.4, 0.6, 0.75, 0.9];

pub const REFINE_SWEEPS: usize = 20;

/// Spectrum window kept during refinement.
const REFINE_SPECTRUM: (f64, f64) = (0.05, 20.0);

/// Spectral floor and scale of random matrix draws.
const DRAW_FLOOR: f64 = 0.1;
const DRAW_SCALE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialSource {
    ScalarSweep,
    RandomMatrix,
}

/// A concrete instance on which the bound fails.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleRecord {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub c: f64,
    pub function_name: String,
    pub min_gap_eigenvalue: f64,
    pub trial_index: u64,
    pub source: TrialSource,
    /// Gap eigenvalue before refinement.
    pub unrefined_min_gap_eigenvalue: f64,
    /// Most negative violating gap eigenvalue of the scalar sweep alone.
    pub sweep_min_gap_eigenvalue: Option<f64>,
}

impl CounterexampleRecord {
    /// Recomputes the gap on the stored instance; returns `|recomputed − stored|`.
    pub fn recheck(&self, f: &FunctionDescriptor) -> Result<f64> {
        let inst = ConvexityInstance::new(self.a.clone(), self.b.clone(), self.c, f.clone())?;
        let v = psd_certificate(&theorem1_gap(&inst)?, 0.0)?;
        Ok((v.min_eigenvalue - self.min_gap_eigenvalue).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinerConfig {
    pub trials: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub c_grid: Vec<f64>,
}

impl MinerConfig {
    pub fn new(trials: usize, seed: u64, dims: Vec<usize>, c_grid: Vec<f64>) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if dims.is_empty() || dims.iter().any(|&d| !(1..=8).contains(&d)) {
            return Err(Error::InvalidParameter(format!("dims must be a non-empty subset of 1..=8, got {dims:?}")));
        }
        if c_grid.is_empty() || c_grid.iter().any(|&c| !(c > 0.0 && c < 1.0) || (c - 0.5).abs() <= MIDPOINT_BAND) {
            return Err(Error::InvalidParameter(format!(
                "c grid must be non-empty, inside (0, 1) and outside |c − 1/2| <= {MIDPOINT_BAND}, got {c_grid:?}"
            )));
        }
        Ok(Self {
            trials,
            seed,
            dims,
            c_grid,
        })
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    a: HermitianMatrix,
    b: HermitianMatrix,
    c: f64,
    min_eig: f64,
    index: u64,
    source: TrialSource,
}

/// Minimum gap eigenvalue and its violation status, or `None` if the instance is invalid.
fn score(f: &FunctionDescriptor, a: &HermitianMatrix, b: &HermitianMatrix, c: f64) -> Option<(f64, bool)> {
    let inst = ConvexityInstance::new(a.clone(), b.clone(), c, f.clone()).ok()?;
    let v = psd_certificate(&theorem1_gap(&inst).ok()?, 0.0).ok()?;
    let violated = v.min_eigenvalue < -VIOLATION_SCALE * (1.0 + v.gap_norm);
    Some((v.min_eigenvalue, violated))
}

fn better(x: &Candidate, y: &Candidate) -> bool {
    (x.min_eig, x.index) < (y.min_eig, y.index)
}

fn pick_best(cands: impl Iterator<Item = Candidate>) -> Option<Candidate> {
    cands.fold(None, |best, c| match best {
        Some(b) if !better(&c, &b) => Some(b),
        _ => Some(c),
    })
}

fn scalar_sweep(c_grid: &[f64]) -> Result<Vec<(HermitianMatrix, HermitianMatrix, f64)>> {
    let mut out = Vec::new();
    for &a in &SCALAR_GRID {
        for &b in &SCALAR_GRID {
            for &c in c_grid {
                out.push((HermitianMatrix::scalar(a)?, HermitianMatrix::scalar(b)?, c));
            }
        }
    }
    Ok(out)
}

/// Runs the scalar sweep and `trials` random matrix trials; returns the
/// deepest refined violation, or `None` when every gap is PSD within the
/// violation threshold.
pub fn mine(f: &FunctionDescriptor, cfg: &MinerConfig) -> Result<Option<CounterexampleRecord>> {
    let sweep = scalar_sweep(&cfg.c_grid)?;
    let n_sweep = sweep.len() as u64;

    let swept: Vec<Candidate> = sweep
        .into_par_iter()
        .enumerate()
        .filter_map(|(i, (a, b, c))| {
            let (min_eig, violated) = score(f, &a, &b, c)?;
            violated.then_some(Candidate {
                a,
                b,
                c,
                min_eig,
                index: i as u64,
                source: TrialSource::ScalarSweep,
            })
        })
        .collect();

    let random: Vec<Candidate> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Option<Candidate>> {
            let mut rng = trial_rng(cfg.seed, t);
            let dim = cfg.dims[rand::Rng::random_range(&mut rng, 0..cfg.dims.len())];
            let c = cfg.c_grid[rand::Rng::random_range(&mut rng, 0..cfg.c_grid.len())];
            let a = sample_positive_definite(&mut rng, dim, DRAW_FLOOR, DRAW_SCALE)?;
            let b = sample_positive_definite(&mut rng, dim, DRAW_FLOOR, DRAW_SCALE)?;
            Ok(score(f, &a, &b, c).and_then(|(min_eig, violated)| {
                violated.then_some(Candidate {
                    a,
                    b,
                    c,
                    min_eig,
                    index: n_sweep + t,
                    source: TrialSource::RandomMatrix,
                })
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let sweep_min = swept.iter().map(|c| c.min_eig).reduce(f64::min);
    let best = pick_best(swept.into_iter().chain(random));
    let Some(best) = best else {
        return Ok(None);
    };
    let unrefined = best.min_eig;
    let refined = refine(f, best);
    Ok(Some(CounterexampleRecord {
        a: refined.a,
        b: refined.b,
        c: refined.c,
        function_name: f.name().to_string(),
        min_gap_eigenvalue: refined.min_eig,
        trial_index: refined.index,
        source: refined.source,
        unrefined_min_gap_eigenvalue: unrefined,
        sweep_min_gap_eigenvalue: sweep_min,
    }))
}

/// Convenience wrapper taking the search parameters directly.
pub fn mine_counterexample(
    f: &FunctionDescriptor,
    trials: usize,
    seed: u64,
    dims: &[usize],
    c_grid: &[f64],
) -> Result<Option<CounterexampleRecord>> {
    mine(f, &MinerConfig::new(trials, seed, dims.to_vec(), c_grid.to_vec())?)
}

/// Real coordinates of a Hermitian matrix: diagonal, then upper real and imaginary parts.
fn coordinates(h: &HermitianMatrix) -> Vec<f64> {
    let n = h.dim();
    let mut out: Vec<f64> = (0..n).map(|i| h.get(i, i).re).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(h.get(i, j).re);
            out.push(h.get(i, j).im);
        }
    }
    out
}

fn from_coordinates(n: usize, x: &[f64]) -> HermitianMatrix {
    let mut re = vec![vec![0.0; n]; n];
    let mut im = vec![vec![0.0; n]; n];
    for i in 0..n {
        re[i][i] = x[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            re[i][j] = x[k];
            re[j][i] = x[k];
            im[i][j] = x[k + 1];
            im[j][i] = -x[k + 1];
            k += 2;
        }
    }
    HermitianMatrix::from_parts(&re, &im).expect("finite coordinates")
}

fn within_window(h: &HermitianMatrix) -> bool {
    crate::hermitian::spectral_decompose(h)
        .map(|s| s.min() >= REFINE_SPECTRUM.0 && s.max() <= REFINE_SPECTRUM.1)
        .unwrap_or(false)
}

/// Coordinate descent on the entries of `A`, `B` and on `c`, halving the step after each sweep.
fn refine(f: &FunctionDescriptor, start: Candidate) -> Candidate {
    let n = start.a.dim();
    let mut xa = coordinates(&start.a);
    let mut xb = coordinates(&start.b);
    let mut c = start.c;
    let mut best = start.min_eig;
    let mut step = 0.1;
    let m = xa.len();

    let eval = |xa: &[f64], xb: &[f64], c: f64| -> Option<f64> {
        if !(c > 0.0 && c < 1.0) || (c - 0.5).abs() <= MIDPOINT_BAND {
            return None;
        }
        let a = from_coordinates(n, xa);
        let b = from_coordinates(n, xb);
        if !within_window(&a) || !within_window(&b) {
            return None;
        }
        score(f, &a, &b, c).filter(|&(_, violated)| violated).map(|(v, _)| v)
    };

    for _ in 0..REFINE_SWEEPS {
        for k in 0..(2 * m + 1) {
            for sign in [1.0, -1.0] {
                let (mut ta, mut tb, mut tc) = (xa.clone(), xb.clone(), c);
                match k {
                    k if k < m => ta[k] += sign * step,
                    k if k < 2 * m => tb[k - m] += sign * step,
                    _ => tc += sign * step * 0.1,
                }
                if let Some(v) = eval(&ta, &tb, tc) {
                    if v < best {
                        best = v;
                        (xa, xb, c) = (ta, tb, tc);
                        break;
                    }
                }
            }
        }
        step *= 0.5;
    }

    Candidate {
        a: from_coordinates(n, &xa),
        b: from_coordinates(n, &xb),
        c,
        min_eig: best,
        index: start.index,
        source: start.source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FunctionDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(MinerConfig::new(0, 1, vec![1], vec![0.25]).is_err());
        assert!(MinerConfig::new(1, 1, vec![9], vec![0.25]).is_err());
        assert!(MinerConfig::new(1, 1, vec![], vec![0.25]).is_err());
        assert!(MinerConfig::new(1, 1, vec![2], vec![0.5]).is_err());
        assert!(MinerConfig::new(1, 1, vec![2], vec![1.0]).is_err());
    }

    #[test]
    fn g_counter_is_caught_by_the_sweep() {
        let rec = mine_counterexample(&f("g_counter"), 4, 3, &[1, 2], &DEFAULT_C_GRID).unwrap().unwrap();
        assert_eq!(rec.function_name, "g_counter");
        assert!(rec.min_gap_eigenvalue <= rec.unrefined_min_gap_eigenvalue);
        assert!(rec.min_gap_eigenvalue <= -1e-4);
        assert!(rec.sweep_min_gap_eigenvalue.unwrap() <= -1e-4);
        assert!(rec.recheck(&f("g_counter")).unwrap() <= 1e-10);
    }

    #[test]
    fn square_never_violates() {
        assert!(mine_counterexample(&f("square"), 50, 1, &[1, 2, 3], &DEFAULT_C_GRID).unwrap().is_none());
    }

    #[test]
    fn coordinates_round_trip() {
        let h = HermitianMatrix::from_parts(&[vec![1.0, 2.0], vec![2.0, 3.0]], &[vec![0.0, -0.5], vec![0.5, 0.0]]).unwrap();
        assert_eq!(from_coordinates(2, &coordinates(&h)), h);
    }
}
