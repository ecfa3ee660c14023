//! Scalar functions used as matrix functions, with closed-form derivatives
//! and, where known, their integral representation over `[0, ∞)`.
//!
//! Every operator convex function on `[0, ∞)` can be written as
//!
//! ```text
//! f(x) = f(0) + a x + b x² + ∫ ( x/(1+λ) − 1 + λ/(x+λ) ) dμ(λ)
//! ```
//!
//! with `b ≥ 0` and a nonnegative measure `μ`. [`RepresentationData`] stores
//! `(f(0), a, b, μ)` and [`evaluate_via_representation`] evaluates the right
//! hand side by Gauss–Legendre quadrature.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Eigenvalues closer than this to an open domain boundary are rejected.
pub const DOMAIN_FLOOR: f64 = 1e-12;

/// Default node count for representation quadrature.
pub const DEFAULT_REPRESENTATION_NODES: usize = 256;

/// Smallest accepted node count for representation quadrature.
pub const MIN_REPRESENTATION_NODES: usize = 16;

/// Lower end of a real interval `[min, ∞)` or `(min, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub min: f64,
    /// Whether `min` itself belongs to the domain (evaluated as a limit).
    pub inclusive: bool,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        min: f64::NEG_INFINITY,
        inclusive: false,
    };

    /// Point where an evaluator may be called for `x`, or `None` if `x` is
    /// outside the domain. Inclusive endpoints absorb round-off below them.
    pub fn admit(&self, x: f64) -> Option<f64> {
        if !x.is_finite() {
            return None;
        }
        if self.inclusive {
            if x >= self.min {
                Some(x)
            } else if x >= self.min - DOMAIN_FLOOR {
                Some(self.min)
            } else {
                None
            }
        } else if x - self.min >= DOMAIN_FLOOR {
            Some(x)
        } else {
            None
        }
    }

    /// True when `x` is far enough inside for derivatives to exist.
    pub fn is_interior(&self, x: f64) -> bool {
        x.is_finite() && x - self.min >= DOMAIN_FLOOR
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == f64::NEG_INFINITY {
            write!(f, "(-inf, inf)")
        } else if self.inclusive {
            write!(f, "[{}, inf)", self.min)
        } else {
            write!(f, "({}, inf)", self.min)
        }
    }
}

/// The cataloged scalar functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionKind {
    /// `x²`
    Square,
    /// `x log x`, with value 0 at 0
    XLogX,
    /// `−log x`
    NegLog,
    /// `1/(s + x)` for a shift `s > 0`
    Resolvent { shift: f64 },
    /// `(1+x) log(1+x)`
    OnePlusXLog,
    /// `x²/2 − (1+x) log(1+x)`: convex but not operator convex
    GCounter,
}

/// Integral representation data `(f(0), a, b, μ)` of an operator convex function.
///
/// `μ` is the sum of a density on `[support_start, ∞)` and finitely many atoms.
#[derive(Debug, Clone)]
pub struct RepresentationData {
    pub f_at_zero: f64,
    pub a: f64,
    pub b: f64,
    /// Density of the absolutely continuous part; it vanishes below `support_start`.
    pub measure_density: Option<fn(f64) -> f64>,
    pub support_start: f64,
    /// Point masses `(λ, weight)`.
    pub atoms: Vec<(f64, f64)>,
}

impl RepresentationData {
    /// `∫ 1/(1+λ)² dμ(λ)`, which must be finite for a valid representation.
    pub fn tail_mass(&self, nodes: usize) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|&(l, w)| w / ((1.0 + l) * (1.0 + l))).sum();
        atoms + self.integrate_density(nodes, |l| 1.0 / ((1.0 + l) * (1.0 + l)))
    }

    fn integrate_density(&self, nodes: usize, kernel: impl Fn(f64) -> f64) -> f64 {
        let Some(density) = self.measure_density else {
            return 0.0;
        };
        let lo = self.support_start;
        // λ = lo + t/(1−t), dλ = dt/(1−t)²
        GaussLegendre::new(nodes).integrate(0.0, 1.0, |t| {
            let one_minus = 1.0 - t;
            let lambda = lo + t / one_minus;
            kernel(lambda) * density(lambda) / (one_minus * one_minus)
        })
    }
}

/// The representation kernel `x/(1+λ) − 1 + λ/(x+λ)`, in a cancellation-free form.
fn representation_kernel(x: f64, lambda: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x * (x - 1.0) / ((1.0 + lambda) * (x + lambda))
}

/// Evaluates `f(0) + a x + b x² + ∫ kernel dμ` with `nodes` Gauss–Legendre points.
pub fn evaluate_via_representation(rep: &RepresentationData, x: f64, nodes: usize) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "representation is defined on [0, inf), got x = {x}"
        )));
    }
    if nodes < MIN_REPRESENTATION_NODES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_REPRESENTATION_NODES} quadrature nodes, got {nodes}"
        )));
    }
    let atoms: f64 = rep.atoms.iter().map(|&(l, w)| w * representation_kernel(x, l)).sum();
    let continuous = rep.integrate_density(nodes, |l| representation_kernel(x, l));
    Ok(rep.f_at_zero + rep.a * x + rep.b * x * x + atoms + continuous)
}

/// A scalar function with derivatives, domain and operator-convexity metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDescriptor {
    kind: FunctionKind,
    name: String,
    domain: Domain,
    operator_convex: bool,
}

impl FunctionDescriptor {
    pub fn new(kind: FunctionKind) -> Result<Self> {
        let (name, domain, operator_convex) = match kind {
            FunctionKind::Square => ("square".to_string(), Domain::REAL_LINE, true),
            FunctionKind::XLogX => ("xlogx".to_string(), Domain { min: 0.0, inclusive: true }, true),
            FunctionKind::NegLog => ("neglog".to_string(), Domain { min: 0.0, inclusive: false }, true),
            FunctionKind::Resolvent { shift } => {
                if !(shift > 0.0) || !shift.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "resolvent shift must be positive and finite, got {shift}"
                    )));
                }
                (format!("resolvent:{shift}"), Domain { min: -shift, inclusive: false }, true)
            }
            FunctionKind::OnePlusXLog => ("one_plus_x_log".to_string(), Domain { min: -1.0, inclusive: true }, true),
            FunctionKind::GCounter => ("g_counter".to_string(), Domain { min: -1.0, inclusive: false }, false),
        };
        Ok(Self {
            kind,
            name,
            domain,
            operator_convex,
        })
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Whether the function is operator convex on `[0, ∞)`.
    pub fn operator_convex(&self) -> bool {
        self.operator_convex
    }

    /// `f(x)`; callers are expected to have admitted `x` through [`Domain::admit`].
    pub fn value(&self, x: f64) -> f64 {
        match self.kind {
            FunctionKind::Square => x * x,
            FunctionKind::XLogX => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            FunctionKind::NegLog => -x.ln(),
            FunctionKind::Resolvent { shift } => 1.0 / (shift + x),
            FunctionKind::OnePlusXLog => {
                if x == -1.0 {
                    0.0
                } else {
                    (1.0 + x) * x.ln_1p()
                }
            }
            FunctionKind::GCounter => 0.5 * x * x - (1.0 + x) * x.ln_1p(),
        }
    }

    pub fn deriv1(&self, x: f64) -> f64 {
        match self.kind {
            FunctionKind::Square => 2.0 * x,
            FunctionKind::XLogX => x.ln() + 1.0,
            FunctionKind::NegLog => -1.0 / x,
            FunctionKind::Resolvent { shift } => {
                let r = 1.0 / (shift + x);
                -r * r
            }
            FunctionKind::OnePlusXLog => x.ln_1p() + 1.0,
            FunctionKind::GCounter => x - x.ln_1p() - 1.0,
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        match self.kind {
            FunctionKind::Square => 2.0,
            FunctionKind::XLogX => 1.0 / x,
            FunctionKind::NegLog => 1.0 / (x * x),
            FunctionKind::Resolvent { shift } => {
                let r = 1.0 / (shift + x);
                2.0 * r * r * r
            }
            FunctionKind::OnePlusXLog => 1.0 / (1.0 + x),
            FunctionKind::GCounter => x / (1.0 + x),
        }
    }

    /// `f(x)` with a domain check.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        self.domain
            .admit(x)
            .map(|x| self.value(x))
            .ok_or_else(|| self.domain_error(x))
    }

    pub(crate) fn require_interior(&self, x: f64) -> Result<()> {
        if self.domain.is_interior(x) {
            Ok(())
        } else {
            Err(self.domain_error(x))
        }
    }

    pub(crate) fn domain_error(&self, x: f64) -> Error {
        Error::Domain {
            function: self.name.clone(),
            eigenvalue: x,
            domain: self.domain.to_string(),
        }
    }

    /// Integral representation on `[0, ∞)`, when one is cataloged.
    pub fn representation(&self) -> Option<RepresentationData> {
        match self.kind {
            FunctionKind::Square => Some(RepresentationData {
                f_at_zero: 0.0,
                a: 0.0,
                b: 1.0,
                measure_density: None,
                support_start: 0.0,
                atoms: Vec::new(),
            }),
            // dμ = dλ: the kernel integrates to x log(1+Λ) − x log(x+Λ) + x log x → x log x
            FunctionKind::XLogX => Some(RepresentationData {
                f_at_zero: 0.0,
                a: 0.0,
                b: 0.0,
                measure_density: Some(|_| 1.0),
                support_start: 0.0,
                atoms: Vec::new(),
            }),
            // a single atom at λ = s with weight 1/s
            FunctionKind::Resolvent { shift } => Some(RepresentationData {
                f_at_zero: 1.0 / shift,
                a: -1.0 / (shift * (1.0 + shift)),
                b: 0.0,
                measure_density: None,
                support_start: 0.0,
                atoms: vec![(shift, 1.0 / shift)],
            }),
            // dμ = (λ−1)/λ dλ on [1, ∞), matching f'' = 1/(1+x)
            FunctionKind::OnePlusXLog => Some(RepresentationData {
                f_at_zero: 0.0,
                a: 2.0 * std::f64::consts::LN_2,
                b: 0.0,
                measure_density: Some(|l| (l - 1.0) / l),
                support_start: 1.0,
                atoms: Vec::new(),
            }),
            FunctionKind::NegLog | FunctionKind::GCounter => None,
        }
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Looks up a function by catalog name and parameter list.
///
/// Names: `square`, `xlogx`, `neglog`, `resolvent` (one parameter, the shift),
/// `one_plus_x_log`, `g_counter`.
pub fn catalog(name: &str, params: &[f64]) -> Result<FunctionDescriptor> {
    let expect_params = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "`{name}` takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let kind = match name {
        "square" => expect_params(0).map(|_| FunctionKind::Square)?,
        "xlogx" => expect_params(0).map(|_| FunctionKind::XLogX)?,
        "neglog" => expect_params(0).map(|_| FunctionKind::NegLog)?,
        "resolvent" => expect_params(1).map(|_| FunctionKind::Resolvent { shift: params[0] })?,
        "one_plus_x_log" => expect_params(0).map(|_| FunctionKind::OnePlusXLog)?,
        "g_counter" => expect_params(0).map(|_| FunctionKind::GCounter)?,
        other => return Err(Error::UnknownFunction(other.to_string())),
    };
    FunctionDescriptor::new(kind)
}

/// Parses the `name` or `name:param` vocabulary, e.g. `resolvent:0.5`.
impl FromStr for FunctionDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(':') {
            Some((name, param)) => {
                let value: f64 = param
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse parameter `{param}` of `{name}`")))?;
                catalog(name.trim(), &[value])
            }
            None if s == "resolvent" => Err(Error::InvalidParameter(
                "resolvent needs a shift, e.g. resolvent:1".to_string(),
            )),
            None => catalog(s, &[]),
        }
    }
}

/// The operator convex entries exercised by the default verification suites.
pub fn operator_convex_defaults() -> Vec<FunctionDescriptor> {
    ["xlogx", "neglog", "resolvent:0.5", "resolvent:1", "resolvent:5", "one_plus_x_log"]
        .iter()
        .map(|s| s.parse().expect("static catalog entry"))
        .collect()
}

/// Every catalog entry, with representative resolvent shifts.
pub fn all_entries() -> Vec<FunctionDescriptor> {
    let mut out: Vec<FunctionDescriptor> = vec!["square".parse().expect("static catalog entry")];
    out.extend(operator_convex_defaults());
    out.push("g_counter".parse().expect("static catalog entry"));
    out
}
