//! Command-line front end for the generalized Caputo solvers.
//!
//! The heavy lifting lives in `gfrac-core`; this crate adds the parts that
//! want an operating system: expression parsing for right-hand sides given
//! as text, JSON problem configs, convergence studies over the built-in
//! example problems, CSV and SVG report output, and the `gfrac` binary
//! wiring them together.

// negated comparisons in the validation guards are deliberate: they reject
// NaN arguments that the un-negated forms would let through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod expr;
pub mod report;
pub mod study;
