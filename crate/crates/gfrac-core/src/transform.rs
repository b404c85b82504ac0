//! The substitution machinery that links the generalized and the standard
//! Caputo derivative.
//!
//! Writing `gamma = t^(1 - rho) d/dt` for the scaled derivative, the n-fold
//! operator expands as a finite sum of ordinary derivatives,
//!
//! ```text
//! (gamma^n u)(t) = sum_{i=1}^{n} lambda(i, n) t^(i - n rho) u^(i)(t),
//! ```
//!
//! with coefficients given by the recursion
//! `lambda(i, j) = lambda(i-1, j-1) + (i - (j-1) rho) lambda(i, j-1)`,
//! `lambda(j, j) = 1`, and zero outside `1 <= i <= j`.  The same scaling
//! turns a problem in `t` into a standard Caputo problem in `t^rho`;
//! [`to_equivalent`] performs that rewrite and [`pull_back`] moves a
//! transformed solution onto the original graded nodes.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fp;
use crate::mesh::{transformed_span, GradedMesh};
use crate::problem::{CaputoIVP, GeneralizedIVP};
use crate::solution::{Diagnostics, Solution};

/// Errors raised by the transform routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransformError {
    /// A value array does not match the node count of its mesh, or a
    /// derivative stack does not match the table size.
    LengthMismatch { expected: usize, got: usize },
    /// `gamma^n` at `t = 0` multiplies a negative power of `t`, so the
    /// evaluation point is singular.
    OriginSingularity { exponent: f64 },
    /// Evaluation points must be nonnegative.
    NegativeTime { t: f64 },
}

impl core::fmt::Display for TransformError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TransformError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            TransformError::OriginSingularity { exponent } => {
                write!(f, "t^{exponent} is singular at t = 0")
            }
            TransformError::NegativeTime { t } => write!(f, "evaluation time {t} is negative"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TransformError {}

/// Triangular table of the expansion coefficients `lambda(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaTable {
    n: usize,
    rho: f64,
    entries: Vec<f64>,
}

impl LambdaTable {
    /// Table size `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Exponent the table was built for.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Coefficient `lambda(i, j)`, zero outside `1 <= i <= j <= n`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == 0 || i > j || j > self.n {
            0.0
        } else {
            self.entries[j * (j - 1) / 2 + (i - 1)]
        }
    }
}

/// Builds the coefficient table for `gamma^1 .. gamma^n` at exponent `rho`.
///
/// # Example
///
/// ```
/// use gfrac_core::transform::lambda_table;
///
/// let table = lambda_table(3, 0.4);
/// assert_eq!(table.get(1, 1), 1.0);
/// assert_eq!(table.get(1, 2), 1.0 - 0.4);
/// assert_eq!(table.get(2, 3), 3.0 * (1.0 - 0.4));
/// ```
pub fn lambda_table(n: usize, rho: f64) -> LambdaTable {
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for j in 1..=n {
        for i in 1..=j {
            let value = if i == j {
                1.0
            } else {
                // entries of column j - 1 are already stored
                let above = if i >= 2 {
                    entries[(j - 1) * (j - 2) / 2 + (i - 2)]
                } else {
                    0.0
                };
                let left = entries[(j - 1) * (j - 2) / 2 + (i - 1)];
                above + (i as f64 - (j as f64 - 1.0) * rho) * left
            };
            entries.push(value);
        }
    }
    LambdaTable { n, rho, entries }
}

/// Applies `gamma^n` at `t` given the ordinary derivatives
/// `derivs = [u'(t), u''(t), .., u^(n)(t)]`.
///
/// The table must have size `n = derivs.len()`.  At `t = 0` any term with a
/// negative exponent makes the point singular and is reported as an error;
/// terms with positive exponents vanish there.
pub fn apply_gamma_n(derivs: &[f64], t: f64, table: &LambdaTable) -> Result<f64, TransformError> {
    let n = derivs.len();
    if table.n() != n {
        return Err(TransformError::LengthMismatch {
            expected: table.n(),
            got: n,
        });
    }
    if t < 0.0 {
        return Err(TransformError::NegativeTime { t });
    }
    let mut sum = 0.0;
    for (i, du) in derivs.iter().enumerate().map(|(k, d)| (k + 1, d)) {
        let lam = table.get(i, n);
        if lam == 0.0 {
            continue;
        }
        let exponent = i as f64 - n as f64 * table.rho();
        if t == 0.0 && exponent < 0.0 {
            return Err(TransformError::OriginSingularity { exponent });
        }
        sum += lam * fp::powf(t, exponent) * du;
    }
    Ok(sum)
}

/// Rewrites a generalized problem as a standard Caputo problem in `t^rho`.
///
/// The initial coefficients scale as `rho^(-k)`, and the right-hand side
/// becomes `rho^(-alpha) f(t^(1/rho), u)`.  With `rho = 1` the problem is
/// returned unchanged up to closure wrapping.
pub fn to_equivalent(p: &GeneralizedIVP) -> CaputoIVP {
    let rho = p.rho;
    let alpha = p.alpha;
    let a_bar = if p.a == 0.0 { 0.0 } else { fp::powf(p.a, rho) };
    let t_end_bar = a_bar + transformed_span(p.a, p.t_end, rho);
    let mut init_bar = Vec::with_capacity(p.init.len());
    let mut scale_k = 1.0;
    for &c in &p.init {
        init_bar.push(c * scale_k);
        scale_k /= rho;
    }
    let rhs = Arc::clone(&p.rhs);
    let scale = fp::powf(rho, -alpha);
    let rhs_bar: crate::problem::Rhs = Arc::new(move |t_bar: f64, x: f64| {
        let t = if rho == 1.0 {
            t_bar
        } else {
            fp::powf(t_bar, 1.0 / rho)
        };
        scale * rhs(t, x)
    });
    CaputoIVP {
        alpha,
        a_bar,
        t_end_bar,
        init_bar,
        rhs_bar,
    }
}

/// Attaches transformed solution values to the graded nodes of `mesh`.
///
/// The value array must have one entry per node.  The returned solution
/// reads in the original variable: entry `i` approximates `u(mesh.nodes[i])`.
pub fn pull_back(values_bar: &[f64], mesh: &GradedMesh) -> Result<Solution, TransformError> {
    if values_bar.len() != mesh.nodes.len() {
        return Err(TransformError::LengthMismatch {
            expected: mesh.nodes.len(),
            got: values_bar.len(),
        });
    }
    Ok(Solution {
        mesh: mesh.clone(),
        values: values_bar.to_vec(),
        scheme_id: "pullback",
        diagnostics: Diagnostics::default(),
    })
}
