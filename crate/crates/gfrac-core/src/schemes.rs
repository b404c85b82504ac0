//! Time-stepping solvers.
//!
//! Three solvers march the transformed problem on the uniform grid of a
//! [`crate::mesh::GradedMesh`]: the L1 scheme (piecewise linear history,
//! order `2 - alpha`), the L2-1sigma scheme (quadratic history evaluated at
//! the offset point `t_(n + sigma)`, order `3 - alpha`), and an explicit
//! product-trapezoid rule of the Volterra form of the problem (order
//! `alpha`).  A fourth solver works directly in the original variable by
//! expanding the kernel into a truncated power series and carrying the
//! resulting memory integrals from step to step.
//!
//! Implicit steps are closed with fixed-point iteration; the direct solver
//! falls back to a bracketing search when the iteration map is not a
//! contraction.

use alloc::vec;
use alloc::vec::Vec;

use crate::fp;
use crate::mesh::GradedMesh;
use crate::problem::{CaputoIVP, GeneralizedIVP};
use crate::solution::{Diagnostics, Solution};
use crate::special::gamma_raw;

/// Fixed-point stopping control for implicit steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlinearSolveConfig {
    /// Successive-iterate tolerance.
    pub tol: f64,
    /// Iteration cap per time step.
    pub max_iter: u32,
}

impl Default for NonlinearSolveConfig {
    fn default() -> Self {
        NonlinearSolveConfig {
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

/// Errors raised by the time-stepping solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchemeError {
    /// These schemes need `0 < alpha < 1`.
    AlphaRange { alpha: f64 },
    /// At least one step is required.
    Steps,
    /// The problem carries no initial value.
    EmptyInit,
    /// Nonlinear solve configuration with a nonpositive tolerance or a zero
    /// iteration cap.
    BadConfig,
    /// The mesh does not belong to the problem being solved.
    MeshMismatch,
    /// The nonlinear step at `node` failed to converge.
    NonConvergence { node: usize, iterations: u32 },
}

impl core::fmt::Display for SchemeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SchemeError::AlphaRange { alpha } => {
                write!(f, "scheme needs 0 < alpha < 1, got {alpha}")
            }
            SchemeError::Steps => write!(f, "solver needs at least one step"),
            SchemeError::EmptyInit => write!(f, "problem carries no initial value"),
            SchemeError::BadConfig => write!(f, "invalid nonlinear solve configuration"),
            SchemeError::MeshMismatch => write!(f, "mesh does not match the problem"),
            SchemeError::NonConvergence { node, iterations } => write!(
                f,
                "nonlinear step at node {node} did not converge in {iterations} iterations"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SchemeError {}

/// History weights `b_j = j^(1-alpha) - (j-1)^(1-alpha)` of the L1 scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct L1Weights {
    alpha: f64,
    b: Vec<f64>,
}

impl L1Weights {
    /// Builds the weights needed for `n_steps` steps at order `alpha`.
    pub fn new(alpha: f64, n_steps: usize) -> Self {
        let e = 1.0 - alpha;
        let b = (1..=n_steps)
            .map(|j| fp::powf(j as f64, e) - fp::powf(j as f64 - 1.0, e))
            .collect();
        L1Weights { alpha, b }
    }

    /// Order the weights were built for.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Weight `b_j` for one-based `j`.
    pub fn get(&self, j: usize) -> f64 {
        self.b[j - 1]
    }

    /// All weights, `b_1` first.
    pub fn as_slice(&self) -> &[f64] {
        &self.b
    }
}

/// History weights of the L2-1sigma scheme.
///
/// The per-step convolution coefficients follow from two base sequences
/// through a short ladder that depends on the step index, see
/// [`L21SigmaWeights::ladder`].
#[derive(Clone, Debug, PartialEq)]
pub struct L21SigmaWeights {
    sigma: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl L21SigmaWeights {
    /// Builds the base sequences needed for `n_steps` steps at order `alpha`.
    pub fn new(alpha: f64, n_steps: usize) -> Self {
        let sigma = 1.0 - alpha / 2.0;
        let e1 = 1.0 - alpha;
        let e2 = 2.0 - alpha;
        let mut a = Vec::with_capacity(n_steps + 1);
        let mut b = Vec::with_capacity(n_steps + 1);
        a.push(fp::powf(sigma, e1));
        b.push(0.0);
        for j in 1..=n_steps {
            let hi = j as f64 + sigma;
            let lo = j as f64 - 1.0 + sigma;
            a.push(fp::powf(hi, e1) - fp::powf(lo, e1));
            b.push(
                (fp::powf(hi, e2) - fp::powf(lo, e2)) / e2
                    - (fp::powf(hi, e1) + fp::powf(lo, e1)) / 2.0,
            );
        }
        L21SigmaWeights { sigma, a, b }
    }

    /// Offset `sigma = 1 - alpha / 2`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Convolution coefficients `c_0 .. c_n` used when stepping from node
    /// `n` to node `n + 1`.
    pub fn ladder(&self, n: usize) -> Vec<f64> {
        if n == 0 {
            return vec![self.a[0]];
        }
        let mut c = Vec::with_capacity(n + 1);
        c.push(self.a[0] + self.b[1]);
        for j in 1..n {
            c.push(self.a[j] + self.b[j + 1] - self.b[j]);
        }
        c.push(self.a[n] - self.b[n]);
        c
    }
}

fn check_common(p: &CaputoIVP, n_steps: usize) -> Result<(), SchemeError> {
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        return Err(SchemeError::AlphaRange { alpha: p.alpha });
    }
    if n_steps == 0 {
        return Err(SchemeError::Steps);
    }
    if p.init_bar.is_empty() {
        return Err(SchemeError::EmptyInit);
    }
    Ok(())
}

fn check_cfg(cfg: &NonlinearSolveConfig) -> Result<(), SchemeError> {
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
        return Err(SchemeError::BadConfig);
    }
    Ok(())
}

fn picard<F>(map: F, x0: f64, cfg: &NonlinearSolveConfig, node: usize) -> Result<f64, SchemeError>
where
    F: Fn(f64) -> f64,
{
    let mut x = x0;
    for _ in 0..cfg.max_iter {
        let next = map(x);
        if fp::abs(next - x) <= cfg.tol {
            return Ok(next);
        }
        x = next;
    }
    Err(SchemeError::NonConvergence {
        node,
        iterations: cfg.max_iter,
    })
}

/// L1 scheme for `0 < alpha < 1` on a uniform transformed grid.
///
/// Returns the transformed values at the `n_steps + 1` grid nodes, the
/// first entry being the initial value exactly.  Implicit steps are closed
/// by fixed-point iteration started from the previous node.
pub fn solve_l1(
    p: &CaputoIVP,
    n_steps: usize,
    cfg: &NonlinearSolveConfig,
) -> Result<Vec<f64>, SchemeError> {
    check_common(p, n_steps)?;
    check_cfg(cfg)?;
    let dt = (p.t_end_bar - p.a_bar) / n_steps as f64;
    let c0 = gamma_raw(2.0 - p.alpha) * fp::powf(dt, p.alpha);
    let w = L1Weights::new(p.alpha, n_steps);
    let mut u = vec![0.0; n_steps + 1];
    u[0] = p.init_bar[0];
    for n in 1..=n_steps {
        let mut hist = -u[n - 1] * w.get(1);
        for j in 0..n - 1 {
            hist += (u[j + 1] - u[j]) * w.get(n - j);
        }
        let tn = p.a_bar + n as f64 * dt;
        u[n] = picard(|x| c0 * (p.rhs_bar)(tn, x) - hist, u[n - 1], cfg, n)?;
    }
    Ok(u)
}

/// L2-1sigma scheme for `0 < alpha < 1` on a uniform transformed grid.
///
/// The right-hand side is sampled at the offset points `t_(n + sigma)`;
/// when it depends on the unknown, the offset value is interpolated as
/// `sigma u_(n+1) + (1 - sigma) u_n` inside the fixed-point iteration.
pub fn solve_l2_1sigma(
    p: &CaputoIVP,
    n_steps: usize,
    cfg: &NonlinearSolveConfig,
) -> Result<Vec<f64>, SchemeError> {
    check_common(p, n_steps)?;
    check_cfg(cfg)?;
    let dt = (p.t_end_bar - p.a_bar) / n_steps as f64;
    let g = gamma_raw(2.0 - p.alpha) * fp::powf(dt, p.alpha);
    let w = L21SigmaWeights::new(p.alpha, n_steps);
    let sigma = w.sigma();
    let mut u = vec![0.0; n_steps + 1];
    u[0] = p.init_bar[0];
    for n in 0..n_steps {
        let c = w.ladder(n);
        let mut hist = 0.0;
        for j in 0..n {
            hist += (u[j + 1] - u[j]) * c[n - j];
        }
        let tns = p.a_bar + (n as f64 + sigma) * dt;
        let un = u[n];
        u[n + 1] = picard(
            |x| un + (g * (p.rhs_bar)(tns, sigma * x + (1.0 - sigma) * un) - hist) / c[0],
            un,
            cfg,
            n + 1,
        )?;
    }
    Ok(u)
}

/// Explicit product-trapezoid rule on the Volterra form of the problem,
/// for `0 < alpha < 1` on a uniform transformed grid.
///
/// Each step rebuilds the memory integral with trapezoid weights over the
/// stored right-hand side samples and closes with a rectangle rule on the
/// current subinterval, so no nonlinear solve is needed.
pub fn solve_euler_trap(p: &CaputoIVP, n_steps: usize) -> Result<Vec<f64>, SchemeError> {
    check_common(p, n_steps)?;
    let dt = (p.t_end_bar - p.a_bar) / n_steps as f64;
    let dt_alpha = fp::powf(dt, p.alpha);
    let trap = dt_alpha / (2.0 * gamma_raw(p.alpha));
    let local = dt_alpha / p.alpha;
    let e = p.alpha - 1.0;
    let mut u = vec![0.0; n_steps + 1];
    u[0] = p.init_bar[0];
    let u0 = u[0];
    let mut samples = Vec::with_capacity(n_steps);
    for n in 0..n_steps {
        let tn = p.a_bar + n as f64 * dt;
        samples.push((p.rhs_bar)(tn, u[n]));
        let mut s = 0.0;
        for j in 0..n {
            let d_far = fp::powf((n - j + 1) as f64, e);
            let d_near = fp::powf((n - j) as f64, e);
            s += d_near * samples[j + 1] + d_far * samples[j];
        }
        u[n + 1] = u0 + trap * s + local * samples[n];
    }
    Ok(u)
}

/// Solves `F(x) = x` by fixed-point iteration with a bracketing fallback.
///
/// The fallback expands a bracket around the starting guess until the
/// residual `F(y) - y` changes sign, then bisects with an occasional secant
/// step.  Returns the solution together with the iteration count.
fn node_solve<F>(
    map: F,
    x0: f64,
    cfg: &NonlinearSolveConfig,
    node: usize,
) -> Result<(f64, u32), SchemeError>
where
    F: Fn(f64) -> f64,
{
    let mut x = x0;
    for it in 0..cfg.max_iter {
        let next = map(x);
        if fp::abs(next - x) <= cfg.tol {
            return Ok((next, it + 1));
        }
        x = next;
    }
    let residual = |y: f64| map(y) - y;
    let mut d = if 0.1 * fp::abs(x0) > 1e-3 {
        0.1 * fp::abs(x0)
    } else {
        1e-3
    };
    let mut lo = x0 - d;
    let mut hi = x0 + d;
    let mut r_lo = residual(lo);
    let mut r_hi = residual(hi);
    let mut bracketed = false;
    for _ in 0..80 {
        if r_lo.is_finite() && r_hi.is_finite() && (r_lo > 0.0) != (r_hi > 0.0) {
            bracketed = true;
            break;
        }
        d *= 2.0;
        lo = x0 - d;
        hi = x0 + d;
        r_lo = residual(lo);
        r_hi = residual(hi);
    }
    if !bracketed {
        return Err(SchemeError::NonConvergence {
            node,
            iterations: cfg.max_iter,
        });
    }
    let mut count = cfg.max_iter;
    for _ in 0..200 {
        count += 1;
        let mut mid = 0.5 * (lo + hi);
        if r_hi != r_lo {
            let secant = hi - r_hi * (hi - lo) / (r_hi - r_lo);
            if lo < secant && secant < hi {
                mid = secant;
            }
        }
        let r_mid = residual(mid);
        if fp::abs(r_mid) <= cfg.tol || hi - lo <= cfg.tol * fp::abs(mid).max(1.0) {
            return Ok((mid, count));
        }
        if (r_mid > 0.0) == (r_lo > 0.0) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
            r_hi = r_mid;
        }
    }
    Ok((0.5 * (lo + hi), count))
}

/// Kernel-expansion solver working directly in the original variable.
///
/// The memory term is split into per-power integrals `V_k` that are updated
/// from step to step by exact product integration of a linear interpolant
/// of the right-hand side, so each step costs `O(n_trunc)` regardless of
/// history length.  `n_trunc` is the number of retained expansion terms;
/// ten is enough for the usual two-digit agreement with reference solvers.
///
/// The mesh must come from [`crate::mesh::build_graded_mesh`] with the
/// problem's own `a`, `T`, and `rho`.
pub fn solve_almeida(
    p: &GeneralizedIVP,
    n_trunc: usize,
    mesh: &GradedMesh,
    cfg: &NonlinearSolveConfig,
) -> Result<Solution, SchemeError> {
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        return Err(SchemeError::AlphaRange { alpha: p.alpha });
    }
    check_cfg(cfg)?;
    if n_trunc == 0 {
        return Err(SchemeError::BadConfig);
    }
    if p.init.is_empty() {
        return Err(SchemeError::EmptyInit);
    }
    let n_steps = mesh.steps();
    if n_steps == 0 {
        return Err(SchemeError::Steps);
    }
    if mesh.rho != p.rho || mesh.nodes[0] != p.a {
        return Err(SchemeError::MeshMismatch);
    }

    let alpha = p.alpha;
    let rho = p.rho;
    let u_a = p.init[0];
    let den = gamma_raw(1.0 + alpha) * gamma_raw(-alpha);

    // gamma(k - alpha) / k! and gamma(k - alpha) / (k - 1)! by upward
    // recurrence, which stays bounded for any truncation depth
    let mut head = 0.0;
    let mut term = gamma_raw(-alpha);
    head += term;
    for k in 1..=n_trunc {
        term *= (k as f64 - 1.0 - alpha) / k as f64;
        head += term;
    }
    let a_const = fp::powf(rho, -alpha) / den * head;
    let mut b_const = Vec::with_capacity(n_trunc);
    let mut s = gamma_raw(1.0 - alpha);
    b_const.push(fp::powf(rho, 1.0 - alpha) * s / den);
    for k in 2..=n_trunc {
        s *= (k as f64 - 1.0 - alpha) / (k as f64 - 1.0);
        b_const.push(fp::powf(rho, 1.0 - alpha) * s / den);
    }

    let a_bar = mesh.nodes_bar[0];
    let inv_rho = 1.0 / rho;
    let mut values = vec![0.0; n_steps + 1];
    values[0] = u_a;
    let mut iterations = Vec::with_capacity(n_steps);
    let mut v_hat = vec![0.0; n_trunc];
    let mut phi_prev = (p.rhs)(mesh.nodes[0], u_a);
    let mut v_carry = vec![0.0; n_trunc];
    let mut m0 = vec![0.0; n_trunc];
    let mut m1 = vec![0.0; n_trunc];
    let mut bk = vec![0.0; n_trunc];

    for m in 1..=n_steps {
        let t = mesh.nodes[m];
        let zc = mesh.nodes_bar[m - 1] - a_bar;
        let zd = mesh.nodes_bar[m] - a_bar;
        let r = zc / zd;
        let inv_dz = 1.0 / (zd - zc);
        let w_alpha = fp::powf(zd, alpha);
        let mut rk = r;
        for k in 1..=n_trunc {
            let rk1 = rk * r;
            let kf = k as f64;
            m0[k - 1] = (1.0 - rk) / kf;
            m1[k - 1] = zd * (1.0 - rk1) / (kf + 1.0) - zc * (1.0 - rk) / kf;
            v_carry[k - 1] = v_hat[k - 1] * rk;
            bk[k - 1] = b_const[k - 1] * w_alpha;
            rk = rk1;
        }
        let map = |x: f64| {
            let phi = (p.rhs)(t, x);
            let slope = (phi - phi_prev) * inv_dz;
            let mut memory = 0.0;
            for k in 0..n_trunc {
                memory += bk[k] * (v_carry[k] + (phi_prev * m0[k] + slope * m1[k]) * inv_rho);
            }
            u_a + a_const * w_alpha * phi - memory
        };
        let (x, iters) = node_solve(map, values[m - 1], cfg, m)?;
        values[m] = x;
        iterations.push(iters);
        let phi = (p.rhs)(t, x);
        let slope = (phi - phi_prev) * inv_dz;
        for k in 0..n_trunc {
            v_hat[k] = v_carry[k] + (phi_prev * m0[k] + slope * m1[k]) * inv_rho;
        }
        phi_prev = phi;
    }
    Ok(Solution {
        mesh: mesh.clone(),
        values,
        scheme_id: "almeida",
        diagnostics: Diagnostics { iterations },
    })
}
