//! JSON problem descriptions for the command-line tools.
//!
//! A config file carries the problem data of a [`GeneralizedIVP`] plus the
//! scheme to run and the step counts to run it at.  Right-hand sides and
//! optional reference solutions are expressions in the grammar of
//! [`crate::expr`].

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use gfrac_core::{GeneralizedIVP, ProblemError, RhsSeries};

use crate::expr::{parse_expression, ParseError};

/// Shared closure type for reference solutions of one variable.
pub type ExactFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Scheme selector shared by config files and command-line flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    /// Piecewise-linear history quadrature, order `2 - alpha`.
    L1,
    /// Quadratic history quadrature at the shifted point, order `3 - alpha`.
    #[value(name = "l2sigma")]
    L2Sigma,
    /// Fractional Euler rectangle rule, order `alpha`.
    Euler,
    /// Truncated expansion of the memory term on the graded mesh.
    Almeida,
}

impl SchemeChoice {
    /// Short name as used in file stems and config files.
    pub fn name(self) -> &'static str {
        match self {
            SchemeChoice::L1 => "l1",
            SchemeChoice::L2Sigma => "l2sigma",
            SchemeChoice::Euler => "euler",
            SchemeChoice::Almeida => "almeida",
        }
    }
}

/// Step counts: a single run or a refinement sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepSpec {
    One(usize),
    Sweep(Vec<usize>),
}

/// Coefficient table of an analytic right-hand side for the series solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTable {
    /// Denominator of the rational order `alpha = p / q`.
    pub q: u32,
    /// Row `j`, column `k` holds the coefficient of `t^(rho j / q) (u - u(a))^k`.
    pub f_jk: Vec<Vec<f64>>,
}

/// One problem description as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Fractional order.
    pub alpha: f64,
    /// Derivative exponent.
    pub rho: f64,
    /// Left endpoint.
    pub a: f64,
    /// Right endpoint.
    #[serde(rename = "T")]
    pub t_end: f64,
    /// Prescribed initial coefficients.
    pub init: Vec<f64>,
    /// Right-hand side `f(t, u)`.
    pub rhs: String,
    /// Optional closed-form solution in `t`, used for error reporting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Optional expansion table of the right-hand side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesTable>,
    /// Scheme to run.
    pub scheme: SchemeChoice,
    /// Step count or sweep.
    #[serde(rename = "N")]
    pub steps: StepSpec,
}

/// Failures while loading or interpreting a config.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{field}`: {source}")]
    Expr {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("step counts must be positive")]
    Steps,
}

impl ProblemConfig {
    /// Loads a config from a JSON file.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Parses a config from JSON text.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Serializes back to pretty JSON.
    pub fn to_json(&self) -> Result<String, ConfigError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Builds the validated problem, parsing the right-hand side.
    pub fn to_ivp(&self) -> Result<GeneralizedIVP, ConfigError> {
        let rhs = parse_expression(&self.rhs)
            .map_err(|source| ConfigError::Expr {
                field: "rhs",
                source,
            })?
            .into_rhs();
        let ivp = GeneralizedIVP::new(
            self.alpha,
            self.rho,
            self.a,
            self.t_end,
            self.init.clone(),
            rhs,
        )?;
        Ok(match &self.series {
            Some(table) => ivp.with_rhs_series(RhsSeries {
                q: table.q,
                f_jk: table.f_jk.clone(),
            }),
            None => ivp,
        })
    }

    /// Parses the optional reference solution as a function of `t`.
    pub fn exact_fn(&self) -> Result<Option<ExactFn>, ConfigError> {
        let Some(src) = &self.exact else {
            return Ok(None);
        };
        let expr = parse_expression(src).map_err(|source| ConfigError::Expr {
            field: "exact",
            source,
        })?;
        Ok(Some(Arc::new(move |t| {
            expr.eval(t, f64::NAN).unwrap_or(f64::NAN)
        })))
    }

    /// Step counts as a list, validated to be positive.
    pub fn step_counts(&self) -> Result<Vec<usize>, ConfigError> {
        let list = match &self.steps {
            StepSpec::One(n) => vec![*n],
            StepSpec::Sweep(ns) => ns.clone(),
        };
        if list.is_empty() || list.contains(&0) {
            return Err(ConfigError::Steps);
        }
        Ok(list)
    }
}
