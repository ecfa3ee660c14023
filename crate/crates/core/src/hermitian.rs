//! Dense Hermitian matrices, their spectral decomposition and PSD certificates.
//!
//! Every matrix built through [`HermitianMatrix`] is symmetrized on the way
//! in, so downstream eigenvalue computations always see an exactly Hermitian
//! operand.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Iteration cap for the implicit QR sweep inside the eigensolver.
const EIGEN_MAX_ITER: usize = 10_000;

/// A dense complex Hermitian matrix of dimension at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

/// Largest entrywise deviation `|m[i][j] - conj(m[j][i])|` of a square matrix.
pub fn asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(x + y)/2` without overflow, exact when `x == y`.
fn midpoint(x: Complex64, y: Complex64) -> Complex64 {
    let half = |a: f64, b: f64| if a == b { a } else { a * 0.5 + b * 0.5 };
    Complex64::new(half(x.re, y.re), half(x.im, y.im))
}

impl HermitianMatrix {
    /// Builds a Hermitian matrix by averaging `m` with its conjugate transpose.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if let Some((idx, _)) = m.iter().enumerate().find(|(_, z)| !z.re.is_finite() || !z.im.is_finite()) {
            let n = m.nrows();
            // nalgebra stores column-major
            return Err(Error::NonFinite {
                row: idx % n,
                col: idx / n,
            });
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(m: DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = midpoint(out[(i, j)], out[(j, i)].conj());
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self { entries: out }
    }

    /// Wraps a product that is Hermitian in exact arithmetic.
    pub(crate) fn from_hermitian_product(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows() > 0);
        Self::symmetrized(m)
    }

    /// Real symmetric matrix from row-major rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    /// Matrix with real and imaginary parts given row-major.
    pub fn from_parts(real: &[Vec<f64>], imag: &[Vec<f64>]) -> Result<Self> {
        let n = real.len();
        if imag.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: imag.len(),
            });
        }
        for row in real.iter().chain(imag) {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        if n == 0 {
            return Err(Error::Empty);
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| Complex64::new(real[i][j], imag[i][j])))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Empty);
        }
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// The 1x1 matrix `[x]`.
    pub fn scalar(x: f64) -> Result<Self> {
        Self::from_diagonal(&[x])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_diagonal(&vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Real parts, row-major.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.entries[(i, j)].re).collect()).collect()
    }

    /// Imaginary parts, row-major.
    pub fn imag_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.entries[(i, j)].im).collect()).collect()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Max-entry norm `max |h_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// `self + s * I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut out = self.entries.clone();
        for i in 0..self.dim() {
            out[(i, i)].re += s;
        }
        Self { entries: out }
    }

    /// `outer * self * outer`, which is Hermitian whenever both factors are.
    pub fn sandwich(&self, outer: &HermitianMatrix) -> Result<Self> {
        self.check_same_dim(outer)?;
        let m = &outer.entries * &self.entries * &outer.entries;
        Ok(Self::from_hermitian_product(m))
    }

    /// `V * self * V†` for an arbitrary square `V` of matching dimension.
    pub fn conjugate_by(&self, v: &DMatrix<Complex64>) -> Result<Self> {
        if v.nrows() != self.dim() || v.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.nrows(),
            });
        }
        Ok(Self::from_hermitian_product(v * &self.entries * v.adjoint()))
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn direct_sum(&self, other: &HermitianMatrix) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.entries);
        out.view_mut((n, n), (m, m)).copy_from(&other.entries);
        Self { entries: out }
    }

    /// Leading principal `k x k` block.
    pub fn leading_block(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return Err(Error::InvalidParameter(format!(
                "block size {k} for a {}x{} matrix",
                self.dim(),
                self.dim()
            )));
        }
        Ok(Self {
            entries: self.entries.view((0, 0), (k, k)).into_owned(),
        })
    }

    pub fn check_same_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Largest `|h_ij - conj(h_ji)|`; zero for anything built by this type.
    pub fn hermiticity_defect(&self) -> f64 {
        asymmetry(&self.entries)
    }
}

fn zip_with(a: &HermitianMatrix, b: &HermitianMatrix, op: impl Fn(Complex64, Complex64) -> Complex64) -> HermitianMatrix {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch in elementwise op");
    HermitianMatrix {
        entries: a.entries.zip_map(&b.entries, op),
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        HermitianMatrix {
            entries: self.entries.map(|z| z * rhs),
        }
    }
}

impl Add for HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        &self + &rhs
    }
}

impl Sub for HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        &self - &rhs
    }
}

impl Mul<f64> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        &self * rhs
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self * -1.0
    }
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors.
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(g(λ)) U†`.
    pub fn map_eigenvalues(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&x| g(x)).collect();
        self.with_eigenvalues(&values)
    }

    /// `U diag(values) U†`.
    pub fn with_eigenvalues(&self, values: &[f64]) -> HermitianMatrix {
        assert_eq!(values.len(), self.dim(), "one value per eigenvector");
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &w) in values.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        HermitianMatrix::from_hermitian_product(scaled * u.adjoint())
    }

    /// `U† H U`: `h` expressed in this eigenbasis.
    pub fn to_eigenbasis(&self, h: &HermitianMatrix) -> DMatrix<Complex64> {
        self.eigenvectors.adjoint() * h.as_matrix() * &self.eigenvectors
    }

    /// `U M U†`, for an `m` that is Hermitian in exact arithmetic.
    pub fn from_eigenbasis(&self, m: DMatrix<Complex64>) -> HermitianMatrix {
        HermitianMatrix::from_hermitian_product(&self.eigenvectors * m * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_eigenvalues(|x| x)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending.
pub fn spectral_decompose(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    if n == 1 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![h.get(0, 0).re],
            eigenvectors: DMatrix::identity(1, 1),
        });
    }
    let eig = SymmetricEigen::try_new(h.as_matrix().clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::Decomposition(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

pub fn min_eigenvalue(h: &HermitianMatrix) -> Result<f64> {
    Ok(spectral_decompose(h)?.min())
}

/// Minimum-eigenvalue certificate that a gap operator is positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub is_psd: bool,
    /// Largest absolute eigenvalue of the gap.
    pub gap_norm: f64,
}

/// Certifies `g ⪰ 0` up to `tol_scale * (1 + ‖g‖)`.
pub fn psd_certificate(g: &HermitianMatrix, tol_scale: f64) -> Result<PsdVerdict> {
    if !(tol_scale >= 0.0) {
        return Err(Error::InvalidParameter(format!("tol_scale must be >= 0, got {tol_scale}")));
    }
    let spec = spectral_decompose(g)?;
    let gap_norm = spec.spectral_radius();
    let tolerance = tol_scale * (1.0 + gap_norm);
    let min_eigenvalue = spec.min();
    Ok(PsdVerdict {
        min_eigenvalue,
        tolerance,
        is_psd: min_eigenvalue >= -tolerance,
        gap_norm,
    })
}
