//! Von Neumann entropy and the strengthened concavity bound.
//!
//! All logarithms are natural, so entropies are in nats. The concavity gap
//!
//! ```text
//! S(c) = S(cρ + (1−c)σ) − c S(ρ) − (1−c) S(σ)
//! ```
//!
//! is bounded below by `½ c(1−c) ‖ρ − σ‖₁²`, and away from `c = 1/2` by the
//! sharper `c(1−c)/(1−2c)² · D(cσ + (1−c)ρ ‖ cρ + (1−c)σ)`.

use crate::error::{Error, Result};
use crate::hermitian::{spectral_decompose, HermitianMatrix};
use crate::inequality::MIDPOINT_BAND;

/// Slack on positivity and unit trace for [`DensityMatrix`].
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// σ-eigenvalues below this are treated as outside the support of σ.
pub const SUPPORT_FLOOR: f64 = 1e-14;

/// ρ-weight above this on a direction outside supp σ makes `D(ρ‖σ)` infinite.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// A positive semidefinite Hermitian matrix of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > DENSITY_TOLERANCE {
            return Err(Error::NotDensity(format!("trace is {trace}, expected 1")));
        }
        let min = spectral_decompose(&matrix)?.min();
        if min < -DENSITY_TOLERANCE {
            return Err(Error::NotDensity(format!("min eigenvalue {min} is negative")));
        }
        Ok(Self { matrix })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diagonal(probabilities)?)
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / dim as f64; dim])
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues clamped to `[0, ∞)`.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(spectral_decompose(&self.matrix)?
            .eigenvalues
            .into_iter()
            .map(|x| x.max(0.0))
            .collect())
    }
}

/// `cρ + (1−c)σ`.
pub fn mix_states(rho: &DensityMatrix, sigma: &DensityMatrix, c: f64) -> Result<DensityMatrix> {
    rho.matrix.check_same_dim(&sigma.matrix)?;
    check_weight(c)?;
    Ok(DensityMatrix {
        matrix: &(&rho.matrix * c) + &(&sigma.matrix * (1.0 - c)),
    })
}

fn check_weight(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("weight must lie in [0, 1], got {c}")))
    }
}

fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// `S(ρ) = −Tr ρ log ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho.spectrum()?.into_iter().map(entropy_term).sum())
}

/// `D(ρ‖σ) = Tr ρ (log ρ − log σ)`, `+∞` when supp ρ ⊄ supp σ.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.matrix.check_same_dim(&sigma.matrix)?;
    let neg_entropy = -von_neumann_entropy(rho)?;
    let spec = spectral_decompose(&sigma.matrix)?;
    let rotated = spec.to_eigenbasis(&rho.matrix);
    let mut cross = 0.0;
    for (k, &s) in spec.eigenvalues.iter().enumerate() {
        let weight = rotated[(k, k)].re;
        if s < SUPPORT_FLOOR {
            if weight > WEIGHT_FLOOR {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.ln();
    }
    Ok(neg_entropy - cross)
}

/// `‖ρ − σ‖₁`, the sum of absolute eigenvalues of the difference.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.matrix.check_same_dim(&sigma.matrix)?;
    let diff = &rho.matrix - &sigma.matrix;
    Ok(spectral_decompose(&diff)?.eigenvalues.iter().map(|x| x.abs()).sum())
}

/// `S(cρ + (1−c)σ) − c S(ρ) − (1−c) S(σ)`.
pub fn concavity_gap(rho: &DensityMatrix, sigma: &DensityMatrix, c: f64) -> Result<f64> {
    let mixed = mix_states(rho, sigma, c)?;
    Ok(von_neumann_entropy(&mixed)? - c * von_neumann_entropy(rho)? - (1.0 - c) * von_neumann_entropy(sigma)?)
}

/// Concavity gap minus `½ c(1−c) ‖ρ − σ‖₁²`; nonnegative.
pub fn corollary_gap(rho: &DensityMatrix, sigma: &DensityMatrix, c: f64) -> Result<f64> {
    let t = trace_distance(rho, sigma)?;
    Ok(concavity_gap(rho, sigma, c)? - 0.5 * c * (1.0 - c) * t * t)
}

/// `c(1−c)/(1−2c)² · D(cσ + (1−c)ρ ‖ cρ + (1−c)σ)`, for `c` outside the midpoint band.
pub fn intermediate_bound(rho: &DensityMatrix, sigma: &DensityMatrix, c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) || (c - 0.5).abs() <= MIDPOINT_BAND {
        return Err(Error::InvalidParameter(format!(
            "weight must lie in (0, 1) outside |c − 1/2| <= {MIDPOINT_BAND}, got {c}"
        )));
    }
    let swapped = mix_states(sigma, rho, c)?;
    let straight = mix_states(rho, sigma, c)?;
    let factor = c * (1.0 - c) / ((1.0 - 2.0 * c) * (1.0 - 2.0 * c));
    Ok(factor * quantum_relative_entropy(&swapped, &straight)?)
}

/// Concavity gap minus [`intermediate_bound`]; nonnegative.
pub fn intermediate_bound_gap(rho: &DensityMatrix, sigma: &DensityMatrix, c: f64) -> Result<f64> {
    let bound = intermediate_bound(rho, sigma, c)?;
    Ok(concavity_gap(rho, sigma, c)? - bound)
}

/// `D(ρ‖σ) − ½‖ρ − σ‖₁²`; nonnegative, possibly `+∞`.
pub fn pinsker_gap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let d = quantum_relative_entropy(rho, sigma)?;
    let t = trace_distance(rho, sigma)?;
    Ok(d - 0.5 * t * t)
}

/// `Δ(δ, ε, d) = εδ (log d − log εδ) + 2δ log d`.
pub fn fannes_delta(delta: f64, epsilon: f64, d: usize) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1/2), got {delta}")));
    }
    if !(0.0..=2.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 2], got {epsilon}")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    let ed = epsilon * delta;
    if ed >= 1.0 {
        return Err(Error::InvalidParameter(format!("epsilon * delta must be < 1, got {ed}")));
    }
    let log_d = (d as f64).ln();
    let first = if ed > 0.0 { ed * (log_d - ed.ln()) } else { 0.0 };
    Ok(first + 2.0 * delta * log_d)
}

/// `Δ(δ, ‖ρ−σ‖₁, d) − |S(1/2) − S(1/2 + δ)|`, nonnegative by Fannes' inequality.
///
/// One-dimensional states are handled with `d = 2`; both terms then vanish
/// except the `2δ log d` slack.
pub fn continuity_check(rho: &DensityMatrix, sigma: &DensityMatrix, delta: f64) -> Result<f64> {
    let eps = trace_distance(rho, sigma)?.min(2.0);
    let bound = fannes_delta(delta, eps, rho.dim().max(2))?;
    let drift = (concavity_gap(rho, sigma, 0.5)? - concavity_gap(rho, sigma, 0.5 + delta)?).abs();
    Ok(bound - drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::diagonal(p).unwrap()
    }

    #[test]
    fn density_validation() {
        assert!(matches!(DensityMatrix::diagonal(&[0.5, 0.6]), Err(Error::NotDensity(_))));
        assert!(matches!(DensityMatrix::diagonal(&[1.5, -0.5]), Err(Error::NotDensity(_))));
        assert!(DensityMatrix::diagonal(&[1.0, 0.0]).is_ok());
        assert_eq!(DensityMatrix::maximally_mixed(4).unwrap().dim(), 4);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&diag(&[1.0, 0.0])).unwrap(), 0.0);
        assert!((von_neumann_entropy(&diag(&[0.5, 0.5])).unwrap() - LN_2).abs() < 1e-15);
        assert!((von_neumann_entropy(&diag(&[0.25; 4])).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!((von_neumann_entropy(&diag(&[0.25; 4])).unwrap() - 1.386294).abs() < 1e-6);
    }

    #[test]
    fn entropy_is_basis_independent() {
        let r = HermitianMatrix::from_parts(&[vec![0.6, 0.1], vec![0.1, 0.4]], &[vec![0.0, 0.2], vec![-0.2, 0.0]]).unwrap();
        let rho = DensityMatrix::new(r).unwrap();
        let p = rho.spectrum().unwrap();
        let want: f64 = p.iter().map(|&x| -x * x.ln()).sum();
        assert!((von_neumann_entropy(&rho).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = diag(&[0.7, 0.3]);
        assert!(quantum_relative_entropy(&rho, &rho).unwrap().abs() < 1e-15);
        let d = quantum_relative_entropy(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5])).unwrap();
        assert!((d - LN_2).abs() < 1e-15);
        assert_eq!(quantum_relative_entropy(&diag(&[0.5, 0.5]), &diag(&[1.0, 0.0])).unwrap(), f64::INFINITY);
        // both outside supp σ: finite
        let d = quantum_relative_entropy(&diag(&[1.0, 0.0, 0.0]), &diag(&[0.5, 0.5, 0.0])).unwrap();
        assert!((d - LN_2).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_examples() {
        let a = diag(&[0.75, 0.25]);
        assert_eq!(trace_distance(&a, &a).unwrap(), 0.0);
        assert!((trace_distance(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap() - 2.0).abs() < 1e-15);
        assert!((trace_distance(&a, &diag(&[0.5, 0.5])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn concavity_and_corollary_examples() {
        let rho = diag(&[1.0, 0.0]);
        let sigma = diag(&[0.0, 1.0]);
        assert_eq!(concavity_gap(&rho, &sigma, 0.0).unwrap(), 0.0);
        assert!((concavity_gap(&rho, &sigma, 0.5).unwrap() - LN_2).abs() < 1e-15);
        for c in [0.0, 0.2, 0.7, 1.0] {
            assert!(concavity_gap(&rho, &rho, c).unwrap().abs() < 1e-15);
            assert!(corollary_gap(&rho, &rho, c).unwrap().abs() < 1e-15);
        }
        let g = corollary_gap(&rho, &sigma, 0.5).unwrap();
        assert!((g - (LN_2 - 0.5)).abs() < 1e-15);
        assert!((g - 0.193147).abs() < 1e-6);
        assert_eq!(corollary_gap(&rho, &sigma, 0.0).unwrap(), 0.0);
        assert!(concavity_gap(&rho, &sigma, 1.5).is_err());
    }

    #[test]
    fn intermediate_bound_examples() {
        let rho = diag(&[1.0, 0.0]);
        let sigma = diag(&[0.0, 1.0]);
        assert!(intermediate_bound_gap(&rho, &rho, 0.3).unwrap().abs() < 1e-15);
        // H(1/4) − 0.75 · ½ log 3
        let h = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        let want = h - 0.75 * 0.5 * 3f64.ln();
        let got = intermediate_bound_gap(&rho, &sigma, 0.25).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.150355).abs() < 1e-6);
        assert!(intermediate_bound_gap(&rho, &sigma, 0.5).is_err());
        assert!(intermediate_bound_gap(&rho, &sigma, 0.5005).is_err());
        assert!(intermediate_bound_gap(&rho, &sigma, 0.0).is_err());
    }

    #[test]
    fn pinsker_examples() {
        let a = diag(&[0.75, 0.25]);
        let b = diag(&[0.5, 0.5]);
        assert!(pinsker_gap(&a, &a).unwrap().abs() < 1e-15);
        let d = 0.75 * (1.5f64).ln() + 0.25 * (0.5f64).ln();
        let got = pinsker_gap(&a, &b).unwrap();
        assert!((got - (d - 0.125)).abs() < 1e-15);
        assert!((got - 0.005812).abs() < 1e-6);
        assert_eq!(pinsker_gap(&b, &diag(&[1.0, 0.0])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn fannes_examples() {
        let v = fannes_delta(0.1, 1.0, 2).unwrap();
        assert!((v - (0.1 * (LN_2 - 0.1f64.ln()) + 0.2 * LN_2)).abs() < 1e-15);
        assert!((v - 0.438202).abs() < 1e-6);
        assert!((fannes_delta(0.1, 0.0, 2).unwrap() - 0.2 * LN_2).abs() < 1e-15);
        assert!(fannes_delta(1e-12, 1.0, 2).unwrap() < 1e-10);
        assert!(fannes_delta(0.0, 1.0, 2).is_err());
        assert!(fannes_delta(0.5, 1.0, 2).is_err());
        assert!(fannes_delta(0.1, 2.5, 2).is_err());
        assert!(fannes_delta(0.1, 1.0, 1).is_err());
    }

    #[test]
    fn continuity_examples() {
        let rho = diag(&[1.0, 0.0]);
        let sigma = diag(&[0.0, 1.0]);
        let same = continuity_check(&rho, &rho, 0.1).unwrap();
        assert!((same - fannes_delta(0.1, 0.0, 2).unwrap()).abs() < 1e-15);
        // S(1/2) = log 2, S(0.6) = H(0.6)
        let h06 = -(0.6f64 * 0.6f64.ln() + 0.4 * 0.4f64.ln());
        let want = fannes_delta(0.1, 2.0, 2).unwrap() - (LN_2 - h06);
        let got = continuity_check(&rho, &sigma, 0.1).unwrap();
        assert!((got - want).abs() < 1e-14 && got >= 0.0);
        assert!(continuity_check(&rho, &sigma, 1e-9).unwrap().abs() < 1e-6);
    }
}
