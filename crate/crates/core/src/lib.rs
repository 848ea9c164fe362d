//! Symbolic constructions around Grassmann variables.
//!
//! The crate bundles five small algebras that are usually discussed together
//! when one tries to give anticommuting variables a concrete carrier:
//!
//! - [`complex`]: complex arithmetic with a shared comparison tolerance.
//! - [`matrix`]: 2×2 real matrices, the embedding `a+ib ↦ [[a,-b],[b,a]]`
//!   and the nilpotent family `N(a,b) = [[ab, b²], [-a², -ab]]`.
//! - [`exterior`]: the exterior (Grassmann) algebra over ℂ with sparse
//!   canonical monomials.
//! - [`star`]: complex labels with the product `θ₁*θ₂ = F(z₁-z₂)` for an odd
//!   function `F`.
//! - [`moyal`]: the constant-kernel Moyal product on multivariate
//!   polynomials.
//!
//! [`expr`] holds the expression language used by the `grassmann` binary and
//! [`cli`] the subcommand drivers.

pub mod cli;
pub mod complex;
mod error;
pub mod expr;
pub mod exterior;
pub mod matrix;
pub mod moyal;
pub mod star;

pub use complex::{ComplexValue, Tolerance};
pub use error::{Error, Result};
pub use exterior::{GeneratorId, GrassmannElement, GrassmannPolynomial, Monomial};
pub use matrix::{Mat2, NilpotentCandidate, RepMatrix};
pub use moyal::{MultiPoly, StarKernel};
pub use star::{OddFunctionSpec, OmegaMatrix, ThetaLabel};
