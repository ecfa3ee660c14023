//! Seeded random Hermitian, positive definite and density matrices.
//!
//! Randomness for trial `i` of a run seeded with `s` comes from
//! [`trial_rng`]`(s, i)`: a ChaCha stream selected by the trial index, so
//! trials can be evaluated in any order or in parallel.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::entropy::DensityMatrix;
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub dim: usize,
    /// Lower bound on the spectrum of positive definite draws.
    pub eigen_floor: f64,
    pub scale: f64,
}

impl SamplerConfig {
    pub fn new(seed: u64, dim: usize, eigen_floor: f64, scale: f64) -> Result<Self> {
        let cfg = Self {
            seed,
            dim,
            eigen_floor,
            scale,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Empty);
        }
        if !(self.eigen_floor > 0.0 && self.scale > 0.0 && self.eigen_floor <= self.scale) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < eigen_floor <= scale, got floor {} and scale {}",
                self.eigen_floor, self.scale
            )));
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        trial_rng(self.seed, 0)
    }
}

/// Independent stream for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n x n` matrix of i.i.d. standard complex Gaussians, `E|z|² = 1`.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// `scale · (G + G†)/2`; a single real Gaussian when `n = 1`.
pub fn sample_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Result<HermitianMatrix> {
    let g = ginibre(rng, n);
    HermitianMatrix::new(g.map(|z| z * scale))
}

/// `scale · G G†/n + floor · I`, whose spectrum lies in `[floor, ∞)`.
pub fn sample_positive_definite<R: Rng + ?Sized>(rng: &mut R, n: usize, eigen_floor: f64, scale: f64) -> Result<HermitianMatrix> {
    let g = ginibre(rng, n);
    let wishart = &g * g.adjoint() * Complex64::new(scale / n as f64, 0.0);
    Ok(HermitianMatrix::new(wishart)?.shift(eigen_floor))
}

/// A full-rank random state: a positive definite draw normalized to unit trace.
pub fn sample_density<R: Rng + ?Sized>(rng: &mut R, n: usize, eigen_floor: f64, scale: f64) -> Result<DensityMatrix> {
    let p = sample_positive_definite(rng, n, eigen_floor, scale)?;
    let t = p.trace();
    DensityMatrix::new(&p * (1.0 / t))
}

pub fn random_hermitian(cfg: &SamplerConfig) -> Result<HermitianMatrix> {
    cfg.validate()?;
    sample_hermitian(&mut cfg.rng(), cfg.dim, cfg.scale)
}

pub fn random_positive_definite(cfg: &SamplerConfig) -> Result<HermitianMatrix> {
    cfg.validate()?;
    sample_positive_definite(&mut cfg.rng(), cfg.dim, cfg.eigen_floor, cfg.scale)
}

pub fn random_density(cfg: &SamplerConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    sample_density(&mut cfg.rng(), cfg.dim, cfg.eigen_floor, cfg.scale)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let qr = ginibre(rng, n).qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases so the distribution is Haar
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::min_eigenvalue;

    fn cfg(seed: u64, dim: usize) -> SamplerConfig {
        SamplerConfig::new(seed, dim, 0.1, 2.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(1, 0, 0.1, 1.0).is_err());
        assert!(SamplerConfig::new(1, 2, 0.0, 1.0).is_err());
        assert!(SamplerConfig::new(1, 2, 2.0, 1.0).is_err());
    }

    #[test]
    fn same_seed_same_draw() {
        assert_eq!(random_hermitian(&cfg(7, 4)).unwrap(), random_hermitian(&cfg(7, 4)).unwrap());
        assert_eq!(random_positive_definite(&cfg(7, 4)).unwrap(), random_positive_definite(&cfg(7, 4)).unwrap());
        assert_eq!(random_density(&cfg(7, 4)).unwrap(), random_density(&cfg(7, 4)).unwrap());
        assert_ne!(random_hermitian(&cfg(7, 4)).unwrap(), random_hermitian(&cfg(8, 4)).unwrap());
    }

    #[test]
    fn streams_differ_per_trial() {
        let a = sample_hermitian(&mut trial_rng(3, 0), 3, 1.0).unwrap();
        let b = sample_hermitian(&mut trial_rng(3, 1), 3, 1.0).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn one_dimensional_draws() {
        let h = random_hermitian(&cfg(5, 1)).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.get(0, 0).im, 0.0);
        assert!(random_positive_definite(&cfg(5, 1)).unwrap().get(0, 0).re > 0.0);
        assert_eq!(random_density(&cfg(5, 1)).unwrap().matrix().get(0, 0).re, 1.0);
    }

    #[test]
    fn hundred_draws_respect_invariants() {
        for seed in 0..100 {
            let dim = 1 + (seed as usize % 8);
            let c = cfg(seed, dim);
            let h = random_hermitian(&c).unwrap();
            assert_eq!(h.hermiticity_defect(), 0.0);
            let p = random_positive_definite(&c).unwrap();
            assert!(min_eigenvalue(&p).unwrap() >= c.eigen_floor, "seed {seed}");
            let rho = random_density(&c).unwrap();
            assert!((rho.matrix().trace() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(&mut trial_rng(11, 0), 5);
        let uu = u.adjoint() * &u;
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((uu[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-13);
            }
        }
    }
}
