//! Matrix functions and their first and second derivatives.
//!
//! Derivatives follow the Daleckii–Krein pattern: in the eigenbasis of the
//! base point `B`, the Fréchet derivative acts on a direction `H` as a
//! Hadamard product with the Loewner matrix of first divided differences,
//!
//! ```text
//! [Df(B)[H]]_ij = f^[1](λ_i, λ_j) · H̃_ij,            H̃ = U† H U
//! ```
//!
//! and the second derivative along `H` contracts second divided differences,
//!
//! ```text
//! [d²/dt² f(B + tH)]_ij = 2 Σ_k f^[2](λ_i, λ_k, λ_j) · H̃_ik · H̃_kj.
//! ```

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{FunctionDescriptor, DOMAIN_FLOOR};
use crate::hermitian::{spectral_decompose, HermitianMatrix, SpectralDecomposition};
use crate::quadrature::GaussLegendre;

/// Relative gap below which divided differences switch to derivative forms.
pub const CONFLUENCE_THRESHOLD: f64 = 1e-7;

/// Clusters narrower than this fraction of their distance to the domain
/// boundary are integrated over the simplex instead of differenced.
const NEAR_CONFLUENT_RATIO: f64 = 0.05;

/// Points per axis of the tensor rule on the simplex.
const SIMPLEX_RULE_POINTS: usize = 8;

fn is_confluent(x: f64, y: f64) -> bool {
    (x - y).abs() <= CONFLUENCE_THRESHOLD * (1.0 + x.abs().max(y.abs()))
}

/// `f(H) = U diag(f(λ)) U†`.
pub fn apply_function(f: &FunctionDescriptor, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(h)?;
    apply_to_spectrum(f, &spec)
}

/// [`apply_function`] on an existing decomposition.
pub fn apply_to_spectrum(f: &FunctionDescriptor, spec: &SpectralDecomposition) -> Result<HermitianMatrix> {
    let values = spec
        .eigenvalues
        .iter()
        .map(|&x| f.eval_checked(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(spec.with_eigenvalues(&values))
}

/// `H⁻¹` via the spectrum; rejects eigenvalues with magnitude below the domain floor.
pub fn inverse(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(h)?;
    if let Some(&bad) = spec.eigenvalues.iter().find(|x| x.abs() < DOMAIN_FLOOR) {
        return Err(Error::Domain {
            function: "inverse".to_string(),
            eigenvalue: bad,
            domain: format!("|x| >= {DOMAIN_FLOOR}"),
        });
    }
    Ok(spec.map_eigenvalues(|x| 1.0 / x))
}

/// `f^[1](x, y)`: the difference quotient, or `f′` at the midpoint when confluent.
pub fn first_divided_difference(f: &FunctionDescriptor, x: f64, y: f64) -> Result<f64> {
    if is_confluent(x, y) {
        f.require_interior(x)?;
        f.require_interior(y)?;
        Ok(f.deriv1(0.5 * (x + y)))
    } else {
        Ok((f.eval_checked(x)? - f.eval_checked(y)?) / (x - y))
    }
}

fn simplex_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(SIMPLEX_RULE_POINTS))
}

/// Hermite–Genocchi: `f^[2](a,b,c) = ∫_simplex f''(a + s(b−a) + t(c−a)) ds dt`.
fn second_dd_by_simplex(f: &FunctionDescriptor, a: f64, b: f64, c: f64) -> f64 {
    let rule = simplex_rule();
    // t = (1−s) v collapses the triangle onto the unit square
    rule.integrate(0.0, 1.0, |s| {
        let inner = rule.integrate(0.0, 1.0, |v| f.deriv2(a + s * (b - a) + (1.0 - s) * v * (c - a)));
        (1.0 - s) * inner
    })
}

/// Second divided difference `f^[2](x, y, z)`, symmetric in its arguments.
///
/// Fully confluent triples use `f″/2`; tight clusters use the simplex
/// integral of `f″`; well separated triples use the recursive quotient.
pub fn second_divided_difference(f: &FunctionDescriptor, x: f64, y: f64, z: f64) -> Result<f64> {
    let mut p = [x, y, z];
    p.sort_by(f64::total_cmp);
    let [a, b, c] = p;
    let spread = c - a;
    let boundary_gap = a - f.domain().min;
    let local_scale = (1.0 + a.abs().max(c.abs())).min(boundary_gap);

    if is_confluent(a, c) {
        for q in p {
            f.require_interior(q)?;
        }
        return Ok(0.5 * f.deriv2((a + b + c) / 3.0));
    }
    if spread <= NEAR_CONFLUENT_RATIO * local_scale {
        f.require_interior(a)?;
        return Ok(second_dd_by_simplex(f, a, b, c));
    }
    let upper = first_divided_difference(f, b, c)?;
    let lower = first_divided_difference(f, a, b)?;
    Ok((upper - lower) / spread)
}

fn require_interior_spectrum(f: &FunctionDescriptor, spec: &SpectralDecomposition) -> Result<()> {
    spec.eigenvalues.iter().try_for_each(|&x| f.require_interior(x))
}

/// Loewner matrix `[f^[1](λ_i, λ_j)]`.
pub fn loewner_matrix(f: &FunctionDescriptor, eigenvalues: &[f64]) -> Result<DMatrix<f64>> {
    let n = eigenvalues.len();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = first_divided_difference(f, eigenvalues[i], eigenvalues[j])?;
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

/// The Fréchet derivative `Df(B)[H]`, linear in `H`.
pub fn frechet_derivative(f: &FunctionDescriptor, b: &HermitianMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    b.check_same_dim(h)?;
    let spec = spectral_decompose(b)?;
    frechet_derivative_at(f, &spec, h)
}

/// [`frechet_derivative`] with the base point already decomposed.
pub fn frechet_derivative_at(f: &FunctionDescriptor, spec: &SpectralDecomposition, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    require_interior_spectrum(f, spec)?;
    let loewner = loewner_matrix(f, &spec.eigenvalues)?;
    let ht = spec.to_eigenbasis(h);
    let hadamard = ht.zip_map(&loewner, |z, l| z * l);
    Ok(spec.from_eigenbasis(hadamard))
}

/// `d²/dt² f(B + tH)` at `t = 0`.
pub fn second_directional_derivative(f: &FunctionDescriptor, b: &HermitianMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    b.check_same_dim(h)?;
    let spec = spectral_decompose(b)?;
    require_interior_spectrum(f, &spec)?;
    let lam = &spec.eigenvalues;
    let n = lam.len();

    // f^[2] is symmetric; fill each unordered triple once
    let mut dd = vec![0.0; n * n * n];
    let idx = |i: usize, k: usize, j: usize| (i * n + k) * n + j;
    for i in 0..n {
        for k in i..n {
            for j in k..n {
                let v = second_divided_difference(f, lam[i], lam[k], lam[j])?;
                for (p, q, r) in [(i, k, j), (i, j, k), (k, i, j), (k, j, i), (j, i, k), (j, k, i)] {
                    dd[idx(p, q, r)] = v;
                }
            }
        }
    }

    let ht = spec.to_eigenbasis(h);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += ht[(i, k)] * ht[(k, j)] * dd[idx(i, k, j)];
            }
            m[(i, j)] = acc * 2.0;
        }
    }
    Ok(spec.from_eigenbasis(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    fn f(s: &str) -> FunctionDescriptor {
        s.parse().unwrap()
    }

    fn diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(d).unwrap()
    }

    fn rows(r: &[Vec<f64>]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(r).unwrap()
    }

    #[test]
    fn apply_square_and_xlogx() {
        let out = apply_function(&f("square"), &diag(&[1.0, 2.0])).unwrap();
        assert!((out - diag(&[1.0, 4.0])).max_abs() < 1e-14);
        let out = apply_function(&f("xlogx"), &diag(&[1.0, E])).unwrap();
        assert!((out - diag(&[0.0, E])).max_abs() < 1e-14);
    }

    #[test]
    fn apply_resolvent_two_by_two() {
        let h = rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let out = apply_function(&f("resolvent:1"), &h).unwrap();
        // eigenvalues 1 -> 1/2 on (1,-1)/√2, 3 -> 1/4 on (1,1)/√2
        let expected = rows(&[vec![0.375, -0.125], vec![-0.125, 0.375]]);
        assert!((out - expected).max_abs() < 1e-14);
    }

    #[test]
    fn apply_reports_offending_eigenvalue() {
        let err = apply_function(&f("neglog"), &diag(&[1.0, -0.5])).unwrap_err();
        match err {
            Error::Domain { function, eigenvalue, .. } => {
                assert_eq!(function, "neglog");
                assert!((eigenvalue + 0.5).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn first_dd_examples() {
        assert_eq!(first_divided_difference(&f("square"), 1.0, 3.0).unwrap(), 4.0);
        assert_eq!(first_divided_difference(&f("square"), 2.0, 2.0).unwrap(), 4.0);
        let v = first_divided_difference(&f("xlogx"), 1.0, 2.0).unwrap();
        assert!((v - 2.0 * LN_2).abs() < 1e-15);
        assert!((v - 1.386294).abs() < 1e-6);
        assert!(first_divided_difference(&f("neglog"), -1.0, 2.0).is_err());
    }

    #[test]
    fn second_dd_regimes_agree_with_exact_resolvent() {
        // 1/(s+x) has f^[2](a,b,c) = 1/((s+a)(s+b)(s+c))
        let r = f("resolvent:1");
        let exact = |a: f64, b: f64, c: f64| 1.0 / ((1.0 + a) * (1.0 + b) * (1.0 + c));
        let triples = [
            (2.0, 2.0, 2.0),
            (2.0, 2.0 + 1e-9, 2.0 - 1e-9),
            (2.0, 2.0 + 1e-6, 2.0),
            (2.0, 2.01, 2.03),
            (0.5, 3.0, 7.0),
            (1.0, 1.0, 5.0),
        ];
        for (a, b, c) in triples {
            let got = second_divided_difference(&r, a, b, c).unwrap();
            let want = exact(a, b, c);
            assert!((got - want).abs() <= 1e-12 * want, "{a},{b},{c}: {got} vs {want}");
        }
    }

    #[test]
    fn second_dd_is_symmetric() {
        let g = f("xlogx");
        let v = second_divided_difference(&g, 0.3, 1.7, 0.9).unwrap();
        for (x, y, z) in [(1.7, 0.3, 0.9), (0.9, 1.7, 0.3), (0.3, 0.9, 1.7)] {
            assert_eq!(second_divided_difference(&g, x, y, z).unwrap(), v);
        }
    }

    #[test]
    fn frechet_examples() {
        let b = rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]);
        let zero = HermitianMatrix::zeros(2).unwrap();
        for name in ["square", "xlogx", "resolvent:1"] {
            let d = frechet_derivative(&f(name), &b, &zero).unwrap();
            assert_eq!(d.max_abs(), 0.0);
        }
        let d = frechet_derivative(&f("square"), &diag(&[3.0]), &diag(&[1.0])).unwrap();
        assert!((d.get(0, 0).re - 6.0).abs() < 1e-14);

        let h = rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let d = frechet_derivative(&f("resolvent:1e-300"), &diag(&[1.0, 2.0]), &h);
        // the 1/x behaviour via a vanishing shift: entry (1,2) = −1/(1·2)
        let d = d.unwrap();
        assert!((d - rows(&[vec![0.0, -0.5], vec![-0.5, 0.0]])).max_abs() < 1e-14);
    }

    #[test]
    fn frechet_commuting_is_pointwise() {
        let b = diag(&[0.5, 2.0, 4.0]);
        let h = diag(&[1.0, -2.0, 0.5]);
        let g = f("neglog");
        let d = frechet_derivative(&g, &b, &h).unwrap();
        let want = diag(&[-1.0 / 0.5, 2.0 / 2.0, -0.5 / 4.0]);
        assert!((d - want).max_abs() < 1e-14);
    }

    #[test]
    fn second_derivative_examples() {
        let b = rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]);
        let h = HermitianMatrix::from_parts(&[vec![1.0, 0.3], vec![0.3, -1.0]], &[vec![0.0, 0.7], vec![-0.7, 0.0]]).unwrap();
        let d2 = second_directional_derivative(&f("square"), &b, &h).unwrap();
        let hh = HermitianMatrix::new(h.as_matrix() * h.as_matrix()).unwrap();
        assert!((d2 - &hh * 2.0).max_abs() < 1e-13);

        let d2 = second_directional_derivative(&f("resolvent:1e-300"), &diag(&[2.0]), &diag(&[1.0])).unwrap();
        assert!((d2.get(0, 0).re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn resolvent_second_derivative_identity() {
        let b = diag(&[1.0, 2.0]);
        let h = rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let d2 = second_directional_derivative(&f("resolvent:1"), &b, &h).unwrap();
        let r = inverse(&b.shift(1.0)).unwrap();
        // R H R H R = R (H R H) R
        let hrh = r.sandwich(&h).unwrap();
        let want = &hrh.sandwich(&r).unwrap() * 2.0;
        assert!((d2 - want).max_abs() < 1e-14);
    }

    #[test]
    fn inverse_rejects_singular() {
        assert!(inverse(&diag(&[1.0, 0.0])).is_err());
        let inv = inverse(&diag(&[2.0, -4.0])).unwrap();
        assert!((inv - diag(&[0.5, -0.25])).max_abs() < 1e-15);
    }
}
