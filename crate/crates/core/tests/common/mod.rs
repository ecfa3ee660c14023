#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use opconvex::entropy::DensityMatrix;
use opconvex::sampler::{sample_density, sample_hermitian, sample_positive_definite, trial_rng};
use opconvex::{FunctionDescriptor, HermitianMatrix};

pub fn f(name: &str) -> FunctionDescriptor {
    name.parse().unwrap()
}

pub fn hermitian(seed: u64, n: usize) -> HermitianMatrix {
    sample_hermitian(&mut trial_rng(seed, 0), n, 1.0).unwrap()
}

pub fn pd_pair(seed: u64, n: usize) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = trial_rng(seed, 1);
    (
        sample_positive_definite(&mut rng, n, 0.2, 3.0).unwrap(),
        sample_positive_definite(&mut rng, n, 0.2, 3.0).unwrap(),
    )
}

pub fn density_pair(seed: u64, n: usize) -> (DensityMatrix, DensityMatrix) {
    let mut rng = trial_rng(seed, 2);
    (
        sample_density(&mut rng, n, 0.05, 1.0).unwrap(),
        sample_density(&mut rng, n, 0.05, 1.0).unwrap(),
    )
}

pub fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Scalar function applied through an independent dense eigen-solve on the real embedding
/// `[[Re, −Im], [Im, Re]]`, which doubles each eigenvalue.
pub fn apply_via_real_embedding(g: impl Fn(f64) -> f64, h: &HermitianMatrix) -> HermitianMatrix {
    let n = h.dim();
    let m = h.as_matrix();
    let emb = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i / n, j / n) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    });
    let eig = emb.symmetric_eigen();
    let mapped = DMatrix::from_diagonal(&eig.eigenvalues.map(&g));
    let out = &eig.eigenvectors * mapped * eig.eigenvectors.transpose();
    let rows_re: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| out[(i, j)]).collect()).collect();
    let rows_im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| out[(i + n, j)]).collect()).collect();
    HermitianMatrix::from_parts(&rows_re, &rows_im).unwrap()
}
