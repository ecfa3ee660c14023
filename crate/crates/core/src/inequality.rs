//! Modulus of convexity, matrix Bregman divergence and the operator lower
//! bound relating them.
//!
//! For operator convex `f`, positive definite `A`, `B` and `0 < c < 1`,
//!
//! ```text
//! C_f^c(A,B) = c f(A) + (1−c) f(B) − f(M(c))                     M(c) = cA + (1−c)B
//!            ⪰ c(1−c)/(1−2c)² · D_f(M(1−c), M(c))                c ≠ 1/2
//!            ⪰ 1/8 · d²/dx² f(M(1/2) + x(A−B)) at x = 0           c = 1/2
//! ```
//!
//! where `D_f(X, Y) = f(X) − f(Y) − Df(Y)[X − Y]`. The bound is an equality
//! for `x²` and fails for some functions that are convex but not operator
//! convex.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{apply_function, frechet_derivative, inverse, second_directional_derivative};
use crate::error::{Error, Result};
use crate::functions::{FunctionDescriptor, DOMAIN_FLOOR};
use crate::hermitian::{psd_certificate, spectral_decompose, HermitianMatrix, PsdVerdict};

/// `|c − 1/2|` at or below which the bound uses its second-derivative form.
pub const MIDPOINT_BAND: f64 = 1e-3;

/// Positive definite `A`, `B`, a weight `c ∈ (0, 1)` and a function `f`.
#[derive(Debug, Clone)]
pub struct ConvexityInstance {
    a: HermitianMatrix,
    b: HermitianMatrix,
    c: f64,
    f: FunctionDescriptor,
}

fn require_positive_definite(m: &HermitianMatrix, what: &str) -> Result<()> {
    let min = spectral_decompose(m)?.min();
    if min < DOMAIN_FLOOR {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive definite, min eigenvalue {min}"
        )));
    }
    Ok(())
}

impl ConvexityInstance {
    pub fn new(a: HermitianMatrix, b: HermitianMatrix, c: f64, f: FunctionDescriptor) -> Result<Self> {
        a.check_same_dim(&b)?;
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidParameter(format!("weight c must lie in (0, 1), got {c}")));
        }
        require_positive_definite(&a, "A")?;
        require_positive_definite(&b, "B")?;
        Ok(Self { a, b, c, f })
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn b(&self) -> &HermitianMatrix {
        &self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn function(&self) -> &FunctionDescriptor {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Same matrices and function at a different weight.
    pub fn with_weight(&self, c: f64) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), c, self.f.clone())
    }
}

/// `M(w) = wA + (1−w)B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureOperator {
    pub weight: f64,
    pub value: HermitianMatrix,
}

fn mix(a: &HermitianMatrix, b: &HermitianMatrix, w: f64) -> HermitianMatrix {
    &(a * w) + &(b * (1.0 - w))
}

pub fn mixture(inst: &ConvexityInstance, weight: f64) -> Result<MixtureOperator> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!("mixture weight must lie in [0, 1], got {weight}")));
    }
    Ok(MixtureOperator {
        weight,
        value: mix(&inst.a, &inst.b, weight),
    })
}

/// `c f(A) + (1−c) f(B) − f(cA + (1−c)B)`.
pub fn modulus_of_convexity(inst: &ConvexityInstance) -> Result<HermitianMatrix> {
    let f = &inst.f;
    let c = inst.c;
    let fa = apply_function(f, &inst.a)?;
    let fb = apply_function(f, &inst.b)?;
    let fm = apply_function(f, &mixture(inst, c)?.value)?;
    Ok(&(&(&fa * c) + &(&fb * (1.0 - c))) - &fm)
}

/// Matrix Bregman divergence `f(A) − f(B) − Df(B)[A − B]`.
pub fn bregman_divergence(f: &FunctionDescriptor, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.check_same_dim(b)?;
    let fa = apply_function(f, a)?;
    let fb = apply_function(f, b)?;
    let derivative = frechet_derivative(f, b, &(a - b))?;
    Ok(&(&fa - &fb) - &derivative)
}

/// `(B+s)⁻¹ (A−B) (A+s)⁻¹ (A−B) (B+s)⁻¹`, the Bregman divergence of `1/(s+x)`.
pub fn bregman_resolvent_closed_form(s: f64, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.check_same_dim(b)?;
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("resolvent shift must be positive, got {s}")));
    }
    let ra = inverse(&a.shift(s))?;
    let rb = inverse(&b.shift(s))?;
    let d = a - b;
    ra.sandwich(&d)?.sandwich(&rb)
}

/// The `c ≠ 1/2` form `c(1−c)/(1−2c)² · D_f(M(1−c), M(c))`, evaluated at any `c ≠ 1/2`.
pub fn theorem1_rhs_bregman_branch(inst: &ConvexityInstance) -> Result<HermitianMatrix> {
    let c = inst.c;
    let denom = (1.0 - 2.0 * c) * (1.0 - 2.0 * c);
    if denom == 0.0 {
        return Err(Error::InvalidParameter("the Bregman form is undefined at c = 1/2".to_string()));
    }
    let far = mixture(inst, 1.0 - c)?.value;
    let near = mixture(inst, c)?.value;
    let d = bregman_divergence(&inst.f, &far, &near)?;
    Ok(&d * (c * (1.0 - c) / denom))
}

/// The second-derivative form `c(1−c)/2 · d²/dx² f(M((1+c)/3) + x(A−B))`.
///
/// At `c = 1/2` this is exactly `1/8 · d²/dx² f(M(1/2) + x(A−B))`. Elsewhere in
/// the band it is exact for quadratics and agrees with the Bregman form up
/// to `O((1−2c)²)`: the base point `M((1+c)/3)` absorbs the first-order term.
pub fn theorem1_rhs_midpoint_branch(inst: &ConvexityInstance) -> Result<HermitianMatrix> {
    let c = inst.c;
    let base = mixture(inst, (1.0 + c) / 3.0)?.value;
    let d2 = second_directional_derivative(&inst.f, &base, &(&inst.a - &inst.b))?;
    Ok(&d2 * (0.5 * c * (1.0 - c)))
}

/// Lower bound on the modulus of convexity, switching to the midpoint form
/// when `|c − 1/2| ≤ MIDPOINT_BAND`.
pub fn theorem1_rhs(inst: &ConvexityInstance) -> Result<HermitianMatrix> {
    if (inst.c - 0.5).abs() <= MIDPOINT_BAND {
        theorem1_rhs_midpoint_branch(inst)
    } else {
        theorem1_rhs_bregman_branch(inst)
    }
}

/// Modulus of convexity minus its lower bound; PSD for operator convex `f`.
pub fn theorem1_gap(inst: &ConvexityInstance) -> Result<HermitianMatrix> {
    Ok(&modulus_of_convexity(inst)? - &theorem1_rhs(inst)?)
}

/// `½(A⁻¹ + B⁻¹) − 2(A+B)⁻¹ − 2 (A+B)⁻¹(A−B)(A+B)⁻¹(A−B)(A+B)⁻¹`, PSD for `A, B ≻ 0`.
pub fn strengthened_ah_gap(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.check_same_dim(b)?;
    require_positive_definite(a, "A")?;
    require_positive_definite(b, "B")?;
    let ia = inverse(a)?;
    let ib = inverse(b)?;
    let is = inverse(&(a + b))?;
    let d = a - b;
    let cubic = is.sandwich(&d)?.sandwich(&is)?;
    Ok(&(&(&(&ia + &ib) * 0.5) - &(&is * 2.0)) - &(&cubic * 2.0))
}

/// The scalar form of the strengthened AH inequality after congruence by `A^{1/2}`.
///
/// Returns `(γ, (1−γ)²/(2γ(1+γ)) − 2(1−γ)²/(1+γ)³)` for each eigenvalue `γ`
/// of `A^{-1/2} B A^{-1/2}`.
pub fn ah_reduced_gaps(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Vec<(f64, f64)>> {
    a.check_same_dim(b)?;
    require_positive_definite(a, "A")?;
    let spec = spectral_decompose(a)?;
    let inv_sqrt = spec.map_eigenvalues(|x| 1.0 / x.sqrt());
    let congruent = b.sandwich(&inv_sqrt)?;
    let gammas = spectral_decompose(&congruent)?.eigenvalues;
    Ok(gammas
        .into_iter()
        .map(|g| {
            let sq = (1.0 - g) * (1.0 - g);
            let lhs = sq / (2.0 * g * (1.0 + g));
            let rhs = 2.0 * sq / ((1.0 + g) * (1.0 + g) * (1.0 + g));
            (g, lhs - rhs)
        })
        .collect())
}

/// Block operators embedding a weighted average into a midpoint one.
///
/// `W = [[√c I, −√(1−c) I], [√(1−c) I, √c I]]`, `T = diag(A, B)`,
/// `T1 = W T W†`, `T2 = W† T W`.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub w: DMatrix<Complex64>,
    pub t: HermitianMatrix,
    pub t1: HermitianMatrix,
    pub t2: HermitianMatrix,
}

pub fn build_dilation(a: &HermitianMatrix, b: &HermitianMatrix, c: f64) -> Result<Dilation> {
    a.check_same_dim(b)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidParameter(format!("dilation weight must lie in [0, 1], got {c}")));
    }
    let n = a.dim();
    let (p, q) = (c.sqrt(), (1.0 - c).sqrt());
    let w = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        if i % n != j % n {
            return Complex64::new(0.0, 0.0);
        }
        let v = match (bi, bj) {
            (0, 0) | (1, 1) => p,
            (0, 1) => -q,
            _ => q,
        };
        Complex64::new(v, 0.0)
    });
    let t = a.direct_sum(b);
    let t1 = t.conjugate_by(&w)?;
    let t2 = t.conjugate_by(&w.adjoint())?;
    Ok(Dilation { w, t, t1, t2 })
}

/// Max-entry deviations of a dilation from its defining block identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationDefects {
    /// `‖W W† − I‖_max`.
    pub unitarity: f64,
    /// Deviation of `(T1 + T2)/2` from `diag(M(c), M(1 − c))`.
    pub average: f64,
    /// Deviation of `(T1 − T2)/2` from `√(c(1−c)) [[0, A−B], [A−B, 0]]`.
    pub half_difference: f64,
}

impl DilationDefects {
    pub fn max(&self) -> f64 {
        self.unitarity.max(self.average).max(self.half_difference)
    }
}

impl Dilation {
    pub fn defects(&self, a: &HermitianMatrix, b: &HermitianMatrix, c: f64) -> Result<DilationDefects> {
        a.check_same_dim(b)?;
        let n = a.dim();
        let wwt = &self.w * self.w.adjoint();
        let unitarity = (wwt - DMatrix::<Complex64>::identity(2 * n, 2 * n))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));

        let m_c = &(a * c) + &(b * (1.0 - c));
        let m_1c = &(a * (1.0 - c)) + &(b * c);
        let avg = &(&self.t1 + &self.t2) * 0.5;
        let average = (avg - m_c.direct_sum(&m_1c)).max_abs();

        let d = (a - b).into_matrix() * Complex64::new((c * (1.0 - c)).sqrt(), 0.0);
        let mut want = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        want.view_mut((0, n), (n, n)).copy_from(&d);
        want.view_mut((n, 0), (n, n)).copy_from(&d);
        let half = (&(&self.t1 - &self.t2) * 0.5).into_matrix();
        let half_difference = (half - want).iter().fold(0.0f64, |m, z| m.max(z.norm()));

        Ok(DilationDefects {
            unitarity,
            average,
            half_difference,
        })
    }
}

/// Certifies that the midpoint bound for `(T1, T2)`, restricted to its
/// leading block, is dominated by `C_f^c(A, B)`.
pub fn midpoint_from_dilation_check(
    f: &FunctionDescriptor,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    c: f64,
    tol_scale: f64,
) -> Result<PsdVerdict> {
    let inst = ConvexityInstance::new(a.clone(), b.clone(), c, f.clone())?;
    let dil = build_dilation(a, b, c)?;
    let mid = &(&dil.t1 + &dil.t2) * 0.5;
    let direction = &dil.t1 - &dil.t2;
    let dilated_rhs = &second_directional_derivative(f, &mid, &direction)? * 0.125;
    let block = dilated_rhs.leading_block(a.dim())?;
    psd_certificate(&(&modulus_of_convexity(&inst)? - &block), tol_scale)
}
