//! Numerical toolkit for operator convex functions.
//!
//! The crate computes the modulus of convexity `c f(A) + (1−c) f(B) − f(cA + (1−c)B)`
//! of a matrix function, compares it with the scaled matrix Bregman divergence
//! that bounds it from below for operator convex `f`, and certifies the
//! resulting operator gaps as positive semidefinite. Around that core sit:
//!
//! - [`hermitian`]: dense Hermitian matrices, eigendecomposition, PSD certificates;
//! - [`calculus`]: matrix functions plus Fréchet and second derivatives via divided differences;
//! - [`functions`]: the scalar function catalog and integral representations;
//! - [`inequality`]: modulus of convexity, Bregman divergence, the lower bound and its dilation proof;
//! - [`entropy`]: von Neumann entropy, relative entropy and the strengthened concavity bound;
//! - [`sampler`] and [`miner`]: seeded random instances and the counterexample search.
//!
//! ```
//! use opconvex::{inequality, HermitianMatrix};
//!
//! let a = HermitianMatrix::scalar(1.0)?;
//! let b = HermitianMatrix::scalar(3.0)?;
//! let f = "neglog".parse()?;
//! let inst = inequality::ConvexityInstance::new(a, b, 0.25, f)?;
//! let verdict = opconvex::psd_certificate(&inequality::theorem1_gap(&inst)?, 1e-8)?;
//! assert!(verdict.is_psd);
//! # Ok::<(), opconvex::Error>(())
//! ```

pub mod calculus;
pub mod entropy;
pub mod error;
pub mod functions;
pub mod hermitian;
pub mod inequality;
pub mod miner;
pub mod quadrature;
pub mod sampler;

pub use error::{Error, Result};
pub use functions::{catalog, FunctionDescriptor};
pub use hermitian::{min_eigenvalue, psd_certificate, spectral_decompose, HermitianMatrix, PsdVerdict, SpectralDecomposition};

// Runs the guide's snippets as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/functions.md")]
    mod functions {}
    #[doc = include_str!("../../../book/src/calculus.md")]
    mod calculus {}
    #[doc = include_str!("../../../book/src/lower-bound.md")]
    mod lower_bound {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/mining.md")]
    mod mining {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
