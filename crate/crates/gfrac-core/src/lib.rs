//! Solvers for fractional initial-value problems built on the generalized
//! Caputo derivative.
//!
//! The derivative family is parameterized by an order `alpha > 0` and an
//! exponent `rho > 0`; `rho = 1` recovers the classical Caputo derivative
//! and the limit `rho -> 0` approaches the Caputo-Hadamard derivative.  The
//! substitution `t -> t^rho` maps any problem of the family onto a standard
//! Caputo problem on a transformed interval, and most solvers here march
//! that transformed problem on a uniform grid before pulling the values
//! back to the graded nodes of the original variable.
//!
//! The crate provides:
//!
//! * [`special`]: gamma, beta, and Mittag-Leffler functions,
//! * [`problem`]: validated problem descriptions,
//! * [`mesh`]: graded meshes that are uniform in the transformed variable,
//! * [`transform`]: the substitution machinery and its coefficient tables,
//! * [`operators`]: pointwise quadrature for the integral and derivative,
//! * [`schemes`]: L1, L2-1sigma, explicit product-trapezoid, and a
//!   kernel-expansion solver working in the original variable,
//! * [`series`]: power-series solutions for rational orders.
//!
//! Everything works without the standard library when the `libm` feature
//! supplies the float routines; allocation is still required.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// negated comparisons in the validation guards are deliberate: they reject
// NaN arguments that the un-negated forms would let through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod fp;

pub mod mesh;
pub mod operators;
pub mod problem;
pub mod schemes;
pub mod series;
pub mod solution;
pub mod special;
pub mod transform;

pub use mesh::{build_graded_mesh, GradedMesh, MeshError};
pub use problem::{CaputoIVP, GeneralizedIVP, ProblemError, Rhs, RhsSeries};
pub use solution::{linf_error, ConvergenceReport, Diagnostics, ReportRow, Solution};
pub use special::Tolerance;
