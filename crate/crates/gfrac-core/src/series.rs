//! Power-series solutions for rational orders `alpha = p / q`.
//!
//! When the right-hand side is analytic in `t^(rho/q)` and in the shifted
//! unknown, the solution of the problem with lower limit zero expands as
//!
//! ```text
//! u(t) = sum_i c_i t^(rho i / q),
//! ```
//!
//! and matching powers turns the fixed-point form of the problem into an
//! explicit recursion for the coefficients: each `c_i` with `i >= p` is a
//! gamma-ratio times a finite sum of products of right-hand side
//! coefficients with convolution powers of the earlier `c_l`.  Coefficients
//! below index `p` carry the initial data and the structural zeros that
//! make the expansion consistent.

use alloc::vec;
use alloc::vec::Vec;

use crate::fp;
use crate::special::ln_gamma_raw;

/// Errors raised by the series solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesError {
    /// `p` and `q` must be coprime.
    NotCoprime { p: u32, q: u32 },
    /// `p` must be positive and `q` at least two.
    BadOrder { p: u32, q: u32 },
    /// The expansion around zero needs `0 < rho <= 1/n` with
    /// `n = floor(p/q) + 1`.
    Hypothesis { rho: f64, n: usize },
    /// `init` must hold exactly `n` values.
    InitLen { expected: usize, got: usize },
    /// A right-hand side coefficient is not finite.
    TableEntry { j: usize, k: usize },
}

impl core::fmt::Display for SeriesError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SeriesError::NotCoprime { p, q } => write!(f, "{p} and {q} are not coprime"),
            SeriesError::BadOrder { p, q } => {
                write!(f, "need p >= 1 and q >= 2 for a rational order, got {p}/{q}")
            }
            SeriesError::Hypothesis { rho, n } => {
                write!(f, "series expansion needs 0 < rho <= 1/{n}, got {rho}")
            }
            SeriesError::InitLen { expected, got } => {
                write!(f, "expected {expected} initial values, got {got}")
            }
            SeriesError::TableEntry { j, k } => {
                write!(f, "right-hand side coefficient ({j}, {k}) is not finite")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SeriesError {}

/// Problem data for the series solver.
///
/// The right-hand side is `f(t, u) = sum_jk f_jk[j][k] t^(rho j / q)
/// (u - u(0))^k`; rows absent from the table are structural zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesProblem {
    /// Numerator of the order `alpha = p / q`.
    pub p: u32,
    /// Denominator of the order, coprime with `p`.
    pub q: u32,
    /// Exponent of the derivative family.
    pub rho: f64,
    /// Right-hand side coefficients, row `j` and column `k`.
    pub f_jk: Vec<Vec<f64>>,
    /// The `n = floor(p/q) + 1` initial coefficients.
    pub init: Vec<f64>,
    /// Truncation order: coefficients up to index `m` are produced.
    pub m: usize,
}

/// Truncated expansion produced by [`series_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    /// Coefficient of `t^(rho i / q)` at index `i`.
    pub coeffs: Vec<f64>,
    /// Exponent the expansion was built for.
    pub rho: f64,
    /// Denominator of the order.
    pub q: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Looks up a table entry, treating absent rows and columns as zeros.
fn table_get(table: &[Vec<f64>], j: usize, k: usize) -> f64 {
    table.get(j).and_then(|row| row.get(k)).copied().unwrap_or(0.0)
}

/// Computes the expansion coefficients up to index `m`.
///
/// # Example
///
/// A linear right-hand side `f(t, u) = u` with order one half and unit
/// initial value produces the Mittag-Leffler coefficients
/// `rho^(-i/2) / gamma(i/2 + 1)`:
///
/// ```
/// use gfrac_core::series::{series_solve, SeriesProblem};
///
/// let problem = SeriesProblem {
///     p: 1,
///     q: 2,
///     rho: 1.0,
///     f_jk: vec![vec![1.0, 1.0]],
///     init: vec![1.0],
///     m: 4,
/// };
/// let sol = series_solve(&problem).unwrap();
/// let g15 = 0.8862269254527580;
/// assert!((sol.coeffs[1] - 1.0 / g15).abs() < 1e-12);
/// assert!((sol.coeffs[2] - 1.0).abs() < 1e-12);
/// ```
pub fn series_solve(problem: &SeriesProblem) -> Result<SeriesSolution, SeriesError> {
    let p = problem.p;
    let q = problem.q;
    if p == 0 || q < 2 {
        return Err(SeriesError::BadOrder { p, q });
    }
    if gcd(p, q) != 1 {
        return Err(SeriesError::NotCoprime { p, q });
    }
    let n = (p / q) as usize + 1;
    let rho = problem.rho;
    if !(rho > 0.0) || rho > 1.0 / n as f64 {
        return Err(SeriesError::Hypothesis { rho, n });
    }
    if problem.init.len() != n {
        return Err(SeriesError::InitLen {
            expected: n,
            got: problem.init.len(),
        });
    }
    for (j, row) in problem.f_jk.iter().enumerate() {
        for (k, &entry) in row.iter().enumerate() {
            if !entry.is_finite() {
                return Err(SeriesError::TableEntry { j, k });
            }
        }
    }

    let alpha = p as f64 / q as f64;
    let m = problem.m;
    let p_us = p as usize;
    let q_us = q as usize;
    let k_max = problem
        .f_jk
        .iter()
        .map(|row| row.len())
        .max()
        .unwrap_or(0)
        .saturating_sub(1);

    let mut coeffs = vec![0.0; m + 1];
    let scale = fp::powf(rho, -alpha);
    for (i, c) in coeffs.iter_mut().enumerate().take(p_us.min(m + 1)) {
        if i % q_us == 0 {
            let l = i / q_us;
            if l < n {
                let mut denom = 1.0;
                for v in 1..=l {
                    denom *= v as f64 * rho;
                }
                *c = problem.init[l] / denom;
            }
        }
    }
    for i in p_us..=m {
        let l_max = i - p_us;
        let mut s = table_get(&problem.f_jk, l_max, 0);
        if k_max > 0 {
            // convolution powers of the shifted expansion built so far
            let mut ck = vec![0.0; l_max + 1];
            ck[0] = 1.0;
            let mut next = vec![0.0; l_max + 1];
            for k in 1..=k_max {
                for entry in next.iter_mut() {
                    *entry = 0.0;
                }
                for l in k..=l_max {
                    let mut acc = 0.0;
                    for (mu, &c_mu) in coeffs.iter().enumerate().take(l + 1).skip(1) {
                        acc += ck[l - mu] * c_mu;
                    }
                    next[l] = acc;
                }
                core::mem::swap(&mut ck, &mut next);
                for (l, &c_l) in ck.iter().enumerate() {
                    if c_l != 0.0 {
                        s += table_get(&problem.f_jk, l_max - l, k) * c_l;
                    }
                }
            }
        }
        let ratio = fp::exp(
            ln_gamma_raw(l_max as f64 / q_us as f64 + 1.0)
                - ln_gamma_raw(i as f64 / q_us as f64 + 1.0),
        );
        coeffs[i] = scale * ratio * s;
    }
    Ok(SeriesSolution {
        coeffs,
        rho,
        q,
    })
}

/// Evaluates a truncated expansion at `t >= 0` by Horner's rule in
/// `w = t^(rho/q)`.
pub fn eval_series(solution: &SeriesSolution, t: f64) -> f64 {
    let w = fp::powf(t, solution.rho / solution.q as f64);
    let mut acc = 0.0;
    for &c in solution.coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc
}
