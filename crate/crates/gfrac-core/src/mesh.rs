//! Graded meshes that are uniform in the transformed variable.
//!
//! The node set `t_i = (a^rho + i dt)^(1/rho)` is uniform after the
//! substitution `t -> t^rho`, so the transformed solvers see an equispaced
//! grid while the original variable carries the grading appropriate for the
//! exponent `rho`.  The span `T^rho - a^rho` is formed with `exp_m1` when
//! `a > 0` so that tiny exponents, where `T^rho` and `a^rho` agree to many
//! digits, do not lose the interval to cancellation.

use alloc::vec::Vec;

use crate::fp;

/// Errors raised while building meshes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeshError {
    /// At least one step is required.
    Steps,
    /// The interval must satisfy `0 <= a < T`.
    Interval { a: f64, t_end: f64 },
    /// The exponent must be finite and positive.
    Exponent { rho: f64 },
}

impl core::fmt::Display for MeshError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeshError::Steps => write!(f, "mesh needs at least one step"),
            MeshError::Interval { a, t_end } => {
                write!(f, "need 0 <= a < T, got a = {a}, T = {t_end}")
            }
            MeshError::Exponent { rho } => write!(f, "exponent must be positive, got {rho}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MeshError {}

/// Mesh nodes in both the original and the transformed variable.
///
/// `nodes_bar` is uniform and `nodes[i] = nodes_bar[i]^(1/rho)`.  Both
/// arrays have length `N + 1` and share index `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMesh {
    /// Exponent used for the grading.
    pub rho: f64,
    /// Equispaced nodes in the transformed variable.
    pub nodes_bar: Vec<f64>,
    /// Graded nodes in the original variable.
    pub nodes: Vec<f64>,
}

impl GradedMesh {
    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Uniform step in the transformed variable.
    pub fn dt_bar(&self) -> f64 {
        (self.nodes_bar[self.nodes_bar.len() - 1] - self.nodes_bar[0]) / self.steps() as f64
    }
}

/// Span `T^rho - a^rho` computed without cancellation for small `rho`.
pub(crate) fn transformed_span(a: f64, t_end: f64, rho: f64) -> f64 {
    if a == 0.0 {
        fp::powf(t_end, rho)
    } else {
        fp::powf(a, rho) * fp::exp_m1(rho * fp::ln(t_end / a))
    }
}

/// Builds the graded mesh with `N` steps on `[a, T]` for exponent `rho`.
///
/// # Example
///
/// ```
/// use gfrac_core::mesh::build_graded_mesh;
///
/// let mesh = build_graded_mesh(0.0, 1.0, 0.5, 2).unwrap();
/// assert_eq!(mesh.nodes_bar, vec![0.0, 0.5, 1.0]);
/// assert!((mesh.nodes[1] - 0.25).abs() < 1e-15);
/// ```
pub fn build_graded_mesh(a: f64, t_end: f64, rho: f64, n_steps: usize) -> Result<GradedMesh, MeshError> {
    if n_steps == 0 {
        return Err(MeshError::Steps);
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(MeshError::Exponent { rho });
    }
    if !(a >= 0.0) || !(t_end > a) || !t_end.is_finite() {
        return Err(MeshError::Interval { a, t_end });
    }
    let a_bar = if a == 0.0 { 0.0 } else { fp::powf(a, rho) };
    let span = transformed_span(a, t_end, rho);
    let dt = span / n_steps as f64;

    let mut nodes_bar = Vec::with_capacity(n_steps + 1);
    let mut nodes = Vec::with_capacity(n_steps + 1);
    for i in 0..=n_steps {
        let tb = a_bar + i as f64 * dt;
        nodes_bar.push(tb);
        let t = if i == 0 {
            a
        } else if i == n_steps {
            t_end
        } else if rho == 1.0 {
            tb
        } else {
            fp::exp(fp::ln(tb) / rho)
        };
        nodes.push(t);
    }
    if rho == 1.0 {
        nodes[0] = nodes_bar[0];
        nodes[n_steps] = nodes_bar[n_steps];
    }
    Ok(GradedMesh {
        rho,
        nodes_bar,
        nodes,
    })
}
