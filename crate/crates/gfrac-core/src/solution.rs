//! Solution containers, error norms, and convergence reports.

use alloc::vec::Vec;

use crate::fp;
use crate::mesh::GradedMesh;

/// Per-run solver diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Nonlinear iteration count per time step, empty for direct solvers.
    pub iterations: Vec<u32>,
}

/// A solve result attached to its mesh.
///
/// `values[i]` approximates the solution at `mesh.nodes[i]`, and
/// `values[0]` is the initial value exactly.
#[derive(Clone, Debug)]
pub struct Solution {
    /// The mesh the values live on.
    pub mesh: GradedMesh,
    /// Approximate solution values, one per node.
    pub values: Vec<f64>,
    /// Short identifier of the producing scheme.
    pub scheme_id: &'static str,
    /// Solver diagnostics.
    pub diagnostics: Diagnostics,
}

/// Maximum absolute error against a reference over the nodes `1..=N`.
///
/// Node 0 carries the prescribed initial value and is excluded, matching the
/// usual convention for convergence tables of fractional one-step errors.
pub fn linf_error<F>(solution: &Solution, exact: F) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut worst = 0.0f64;
    for (node, value) in solution
        .mesh
        .nodes
        .iter()
        .zip(solution.values.iter())
        .skip(1)
    {
        let err = fp::abs(exact(*node) - *value);
        if err > worst {
            worst = err;
        }
    }
    worst
}

/// One line of a convergence report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportRow {
    /// Step count of the run.
    pub n_steps: usize,
    /// Measured maximum error.
    pub error: f64,
    /// Observed order against the previous row, `None` on the first row.
    pub order: Option<f64>,
}

/// Errors and observed orders over a sequence of refinements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceReport {
    /// Rows in order of increasing step count.
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    /// Builds a report from matching step counts and errors, filling in
    /// observed orders `log(e / e') / log(N' / N)` between consecutive rows.
    ///
    /// # Example
    ///
    /// ```
    /// use gfrac_core::solution::ConvergenceReport;
    ///
    /// let report = ConvergenceReport::from_errors(&[16, 32], &[1e-2, 2.5e-3]);
    /// assert!(report.rows[0].order.is_none());
    /// assert!((report.rows[1].order.unwrap() - 2.0).abs() < 1e-12);
    /// ```
    pub fn from_errors(n_steps: &[usize], errors: &[f64]) -> Self {
        let mut rows = Vec::with_capacity(errors.len());
        for (i, (&n, &e)) in n_steps.iter().zip(errors.iter()).enumerate() {
            let order = if i == 0 {
                None
            } else {
                let prev: ReportRow = rows[i - 1];
                Some(fp::ln(prev.error / e) / fp::ln(n as f64 / prev.n_steps as f64))
            };
            rows.push(ReportRow {
                n_steps: n,
                error: e,
                order,
            });
        }
        ConvergenceReport { rows }
    }
}
