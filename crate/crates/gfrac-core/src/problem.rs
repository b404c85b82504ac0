//! Initial-value problem descriptions.
//!
//! A [`GeneralizedIVP`] states a fractional initial-value problem for the
//! generalized Caputo derivative of order `alpha` with exponent `rho` on
//! `[a, T]`.  A [`CaputoIVP`] is the same problem after the substitution
//! `t -> t^rho`, which turns it into a standard Caputo problem on
//! `[a^rho, T^rho]`; the solvers in [`crate::schemes`] march the transformed
//! problem on a uniform grid.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fp;

/// Right-hand side `f(t, u)` shared by problems and solvers.
pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Coefficient table of an analytic right-hand side expansion,
/// `f(t, u) = sum_jk f[j][k] t^(rho j / q) (u - u(a))^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsSeries {
    /// Denominator of the rational order `alpha = p / q`.
    pub q: u32,
    /// Row `j`, column `k` holds the coefficient of `t^(rho j / q) (u - u(a))^k`.
    pub f_jk: Vec<Vec<f64>>,
}

/// Errors raised while constructing problem descriptions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProblemError {
    /// The order must be finite and positive.
    Order { alpha: f64 },
    /// The exponent must be finite and positive.
    Exponent { rho: f64 },
    /// The interval must satisfy `0 <= a < T`.
    Interval { a: f64, t_end: f64 },
    /// With `a = 0` the exponent must satisfy `rho <= 1/n` where
    /// `n = floor(alpha) + 1`, otherwise the transformed data is not
    /// regular enough for the equivalence to hold.
    Hypothesis { rho: f64, a: f64, n: usize },
    /// `init` must hold exactly `n = floor(alpha) + 1` values.
    InitLen { expected: usize, got: usize },
}

impl core::fmt::Display for ProblemError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ProblemError::Order { alpha } => write!(f, "order must be positive, got {alpha}"),
            ProblemError::Exponent { rho } => write!(f, "exponent must be positive, got {rho}"),
            ProblemError::Interval { a, t_end } => {
                write!(f, "need 0 <= a < T, got a = {a}, T = {t_end}")
            }
            ProblemError::Hypothesis { rho, a, n } => write!(
                f,
                "exponent rho = {rho} violates the regularity condition for a = {a} \
                 (need rho <= 1/{n} when a = 0)"
            ),
            ProblemError::InitLen { expected, got } => {
                write!(f, "expected {expected} initial values, got {got}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ProblemError {}

/// Fractional initial-value problem for the generalized Caputo derivative.
///
/// The data is `D^(alpha, rho) u = f(t, u)` on `[a, T]` with the first
/// `n = floor(alpha) + 1` coefficients of the expansion of `u` around `a`
/// prescribed in `init` (so `init[0]` is `u(a)`).
#[derive(Clone)]
pub struct GeneralizedIVP {
    /// Fractional order, positive.
    pub alpha: f64,
    /// Exponent of the derivative family, positive.
    pub rho: f64,
    /// Left endpoint, nonnegative.
    pub a: f64,
    /// Right endpoint, greater than `a`.
    pub t_end: f64,
    /// The `n` prescribed initial coefficients.
    pub init: Vec<f64>,
    /// Right-hand side `f(t, u)`.
    pub rhs: Rhs,
    /// Optional analytic expansion of `rhs` for the series solver.
    pub rhs_series: Option<RhsSeries>,
}

impl GeneralizedIVP {
    /// Builds a problem after validating the order, the interval, the
    /// exponent condition, and the initial-data length.
    ///
    /// For `a = 0` the exponent must satisfy `rho <= 1/n`; for `a > 0` any
    /// positive `rho` is accepted.
    pub fn new(
        alpha: f64,
        rho: f64,
        a: f64,
        t_end: f64,
        init: Vec<f64>,
        rhs: Rhs,
    ) -> Result<Self, ProblemError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(ProblemError::Order { alpha });
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(ProblemError::Exponent { rho });
        }
        if !(a >= 0.0) || !(t_end > a) || !t_end.is_finite() {
            return Err(ProblemError::Interval { a, t_end });
        }
        let n = (fp::floor(alpha) as usize) + 1;
        if a == 0.0 && rho > 1.0 / n as f64 {
            return Err(ProblemError::Hypothesis { rho, a, n });
        }
        if init.len() != n {
            return Err(ProblemError::InitLen {
                expected: n,
                got: init.len(),
            });
        }
        Ok(GeneralizedIVP {
            alpha,
            rho,
            a,
            t_end,
            init,
            rhs,
            rhs_series: None,
        })
    }

    /// Attaches an analytic right-hand side expansion.
    pub fn with_rhs_series(mut self, series: RhsSeries) -> Self {
        self.rhs_series = Some(series);
        self
    }

    /// Number of prescribed initial coefficients, `floor(alpha) + 1`.
    pub fn n(&self) -> usize {
        (fp::floor(self.alpha) as usize) + 1
    }
}

/// Standard Caputo initial-value problem in the transformed variable.
#[derive(Clone)]
pub struct CaputoIVP {
    /// Fractional order, positive.
    pub alpha: f64,
    /// Transformed left endpoint.
    pub a_bar: f64,
    /// Transformed right endpoint.
    pub t_end_bar: f64,
    /// Transformed initial coefficients.
    pub init_bar: Vec<f64>,
    /// Transformed right-hand side.
    pub rhs_bar: Rhs,
}

impl CaputoIVP {
    /// Builds a transformed problem after validating order, interval, and
    /// initial-data length.
    pub fn new(
        alpha: f64,
        a_bar: f64,
        t_end_bar: f64,
        init_bar: Vec<f64>,
        rhs_bar: Rhs,
    ) -> Result<Self, ProblemError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(ProblemError::Order { alpha });
        }
        if !(t_end_bar > a_bar) || !t_end_bar.is_finite() || !a_bar.is_finite() {
            return Err(ProblemError::Interval {
                a: a_bar,
                t_end: t_end_bar,
            });
        }
        let n = (fp::floor(alpha) as usize) + 1;
        if init_bar.len() != n {
            return Err(ProblemError::InitLen {
                expected: n,
                got: init_bar.len(),
            });
        }
        Ok(CaputoIVP {
            alpha,
            a_bar,
            t_end_bar,
            init_bar,
            rhs_bar,
        })
    }

    /// Number of initial coefficients, `floor(alpha) + 1`.
    pub fn n(&self) -> usize {
        (fp::floor(self.alpha) as usize) + 1
    }
}
