//! Optimal prediction measures for polynomial extrapolation on finite
//! candidate sets.
//!
//! Given polynomial regression of degree `n` with observations placed on a
//! finite candidate set and a prediction point `z₀` *outside* that set, the
//! variance of the BLUE prediction at `z₀` under weights `w` is proportional
//! to the inverse Christoffel value
//!
//! ```text
//! K(w) = p(z₀)ᵗ G(w)⁻¹ p(z₀),      G(w) = Vᵗ diag(w) V,
//! ```
//!
//! where `V` is the Vandermonde matrix of the basis on the candidates and
//! `p(z₀)` the basis column at the prediction point. An *optimal prediction
//! measure* minimizes `K` over probability weights. This crate computes such
//! measures by a reduction to ℓ1 minimization: the coefficient vector
//!
//! ```text
//! c* = argmin { ‖c‖₁ : Vᵗ c = p(z₀) }
//! ```
//!
//! yields optimal weights `wᵢ = |c*ᵢ| / ‖c*‖₁` and the optimal value
//! `K = ‖c*‖₁²`. The ℓ1 problem is a linear program; its dual produces a
//! polynomial `Q` with `|Q| ≤ 1` on the candidates whose value `Q(z₀)`
//! equals `‖c*‖₁` — an extremal growth polynomial that certifies optimality
//! through strong duality, alongside the Christoffel stationarity conditions
//! `|R_k(w)ᵗ G(w)⁻¹ p|² = K` on the support.
//!
//! # Modules
//!
//! - [`basis`] — polynomial bases (Chebyshev, monomial, total-degree
//!   multivariate) and their evaluation.
//! - [`design`] — the core pipeline: candidate sets, Vandermonde and Gram
//!   matrices, Christoffel values, [`design::optimal_design`], the
//!   closed-form [`design::hoel_levine_design`] on Chebyshev extreme points,
//!   and optimality certificates.
//! - [`l1`] — the equality-constrained ℓ1 primal and its sup-norm dual as
//!   linear programs.
//! - [`simplex`] — the dense two-phase simplex solver underneath.
//! - [`oracle`] — independent brute-force checks: grid minimization of
//!   `K(w)`, finite-difference gradients, and the univariate Chebyshev
//!   growth reference.
//! - [`cli`] — the `optipred` binary: problem/report JSON schemas and the
//!   `design`, `hoel-levine`, `growth`, and `verify` subcommands.
//!
//! # Examples
//!
//! The `examples/` directory is the front door; each one is a small, runnable
//! walkthrough of a capability:
//!
//! - `hoel_levine` — closed-form univariate designs vs. the ℓ1 route.
//! - `grid_design` — a dense candidate grid whose optimum collapses onto
//!   three support points.
//! - `triangle` — bivariate designs on the corners of a triangle, including
//!   a degenerate prediction point.
//! - `extremal_polynomial` — the dual growth polynomial and its
//!   equioscillation pattern.
//! - `oracle_check` — cross-checking a solved design against brute-force
//!   grid search and finite differences.
//! - `complex_external_point` — complex `z₀`, where the measure is computed
//!   through a stacked real surrogate.
//!
//! Run one with `cargo run --example hoel_levine`.
//!
//! # Tolerances
//!
//! Certification thresholds default to `1e-8` and can be adjusted per call
//! (`tolerance` arguments) or, for the binary, through the `OPTIPRED_TOL`
//! environment variable.

pub mod basis;
pub mod cli;
pub mod design;
pub mod error;
pub mod l1;
pub mod oracle;
pub mod simplex;

pub use basis::{BasisKind, PolyBasis, C64};
pub use error::{Error, Result};
