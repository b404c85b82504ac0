//! Convergence studies over the built-in example problems.
//!
//! Five parameterized problems with known behavior drive the convergence
//! tables and limit figures.  Each is stored in transformed coordinates,
//! where the solvers march a uniform grid, together with a closed-form
//! reference solution when one exists.  Errors are maximum absolute errors
//! over the nodes `1..=N` of the transformed grid, matching the solver
//! convergence convention.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use gfrac_core::mesh::build_graded_mesh;
use gfrac_core::problem::{CaputoIVP, GeneralizedIVP, ProblemError};
use gfrac_core::schemes::{
    solve_almeida, solve_euler_trap, solve_l1, solve_l2_1sigma, NonlinearSolveConfig, SchemeError,
};
use gfrac_core::special::{gamma, mittag_leffler, SpecialError, Tolerance};
use gfrac_core::transform::{pull_back, to_equivalent, TransformError};
use gfrac_core::{ConvergenceReport, MeshError};

use crate::config::{ExactFn, SchemeChoice};
use crate::report::{emit_report, ReportError, ReportFormat};

/// Expansion terms kept by the graded-mesh scheme when a study runs it.
pub const DEFAULT_TRUNC: usize = 10;

/// Identifier of a built-in example problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    One,
    Two,
    Three,
    Four,
    Five,
}

impl ExampleId {
    /// All identifiers in order.
    pub const ALL: [ExampleId; 5] = [
        ExampleId::One,
        ExampleId::Two,
        ExampleId::Three,
        ExampleId::Four,
        ExampleId::Five,
    ];

    /// Name as accepted on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ExampleId::One => "example1",
            ExampleId::Two => "example2",
            ExampleId::Three => "example3",
            ExampleId::Four => "example4",
            ExampleId::Five => "example5",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = StudyError;

    fn from_str(s: &str) -> Result<Self, StudyError> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| StudyError::UnknownExample(s.to_string()))
    }
}

/// Failures while assembling or running a study.
#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error("{0} has no closed-form reference solution")]
    NoClosedForm(ExampleId),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("step counts must be at least 2 and strictly increasing")]
    Steps,
    #[error("exponent list must be positive and strictly decreasing")]
    RhoList,
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// One example instantiated at a given order and exponent.
pub struct ExampleProblem {
    /// The problem as posed in the original variable.
    pub generalized: GeneralizedIVP,
    /// The same problem in transformed coordinates, with the closed-form
    /// transformed data rather than the numerically substituted one.
    pub transformed: CaputoIVP,
    /// Reference solution in the transformed variable, when known.
    pub exact_bar: Option<ExactFn>,
}

/// Instantiates a built-in example.
///
/// Intervals and initial data are fixed per example; the order `alpha` and
/// exponent `rho` come from the caller.  Example 4 has no closed-form
/// reference and is meant for scheme cross-validation.
pub fn example_problem(
    id: ExampleId,
    alpha: f64,
    rho: f64,
) -> Result<ExampleProblem, StudyError> {
    match id {
        ExampleId::One => {
            let scale = rho.powf(-alpha);
            let ratio = gamma(1.0 + 2.0 / rho)? / gamma(1.0 + 2.0 / rho + alpha)?;
            let generalized = GeneralizedIVP::new(
                alpha,
                rho,
                0.0,
                1.0,
                vec![0.0],
                Arc::new(|t, _| t * t),
            )?;
            let transformed = CaputoIVP::new(
                alpha,
                0.0,
                1.0,
                vec![0.0],
                Arc::new(move |tb: f64, _| scale * tb.powf(2.0 / rho)),
            )?;
            let exponent = 2.0 / rho + alpha;
            let exact: ExactFn = Arc::new(move |tb| scale * ratio * tb.powf(exponent));
            Ok(ExampleProblem {
                generalized,
                transformed,
                exact_bar: Some(exact),
            })
        }
        ExampleId::Two => {
            let coeff = gamma(4.0)? / gamma(4.0 - alpha)?;
            let generalized = GeneralizedIVP::new(
                alpha,
                rho,
                0.0,
                1.0,
                vec![0.0],
                Arc::new(move |t: f64, _| rho.powf(alpha) * coeff * t.powf(rho * (3.0 - alpha))),
            )?;
            // the transformed data carries no trace of rho, so runs with
            // different exponents produce bitwise identical tables
            let transformed = CaputoIVP::new(
                alpha,
                0.0,
                1.0,
                vec![0.0],
                Arc::new(move |tb: f64, _| coeff * tb.powf(3.0 - alpha)),
            )?;
            let exact: ExactFn = Arc::new(|tb| tb * tb * tb);
            Ok(ExampleProblem {
                generalized,
                transformed,
                exact_bar: Some(exact),
            })
        }
        ExampleId::Three => {
            let a_bar = 0.5f64.powf(rho);
            let t_end_bar = 1.0f64;
            let generalized = GeneralizedIVP::new(
                alpha,
                rho,
                0.5,
                1.0,
                vec![-1.0],
                Arc::new(move |t: f64, u| rho.powf(alpha) * (u + t.powf(rho) - a_bar)),
            )?;
            let transformed = CaputoIVP::new(
                alpha,
                a_bar,
                t_end_bar,
                vec![-1.0],
                Arc::new(move |tb: f64, u| u + tb - a_bar),
            )?;
            let tol = Tolerance::default();
            let exact: ExactFn = Arc::new(move |tb| {
                let w = tb - a_bar;
                let z = w.powf(alpha);
                let head = mittag_leffler(alpha, 1.0, z, &tol).unwrap_or(f64::NAN);
                let tail = mittag_leffler(alpha, alpha + 2.0, z, &tol).unwrap_or(f64::NAN);
                -head + w.powf(1.0 + alpha) * tail
            });
            Ok(ExampleProblem {
                generalized,
                transformed,
                exact_bar: Some(exact),
            })
        }
        ExampleId::Four => {
            let generalized = GeneralizedIVP::new(
                alpha,
                rho,
                0.25,
                4.0,
                vec![1.0],
                Arc::new(|t: f64, u: f64| t * u.sin()),
            )?;
            let transformed = to_equivalent(&generalized);
            Ok(ExampleProblem {
                generalized,
                transformed,
                exact_bar: None,
            })
        }
        ExampleId::Five => {
            let (transformed, _) = hadamard_problem(alpha, rho, 100.0)?;
            let c = gamma(2.0 - alpha)?;
            let generalized = GeneralizedIVP::new(
                alpha,
                rho,
                1.0,
                100.0,
                vec![0.0],
                Arc::new(move |t: f64, _| t.ln().powf(1.0 - alpha) / c),
            )?;
            let exact: ExactFn = Arc::new(move |tb: f64| (tb - 1.0).ln_1p() / rho);
            Ok(ExampleProblem {
                generalized,
                transformed,
                exact_bar: Some(exact),
            })
        }
    }
}

/// Transformed problem whose solution tends to `log t` as `rho` shrinks,
/// together with the transformed interval width.
fn hadamard_problem(
    alpha: f64,
    rho: f64,
    t_end: f64,
) -> Result<(CaputoIVP, f64), StudyError> {
    let c = gamma(2.0 - alpha)?;
    let width = (rho * t_end.ln()).exp_m1();
    let ivp = CaputoIVP::new(
        alpha,
        1.0,
        1.0 + width,
        vec![0.0],
        Arc::new(move |tb: f64, _| (tb - 1.0).ln_1p().powf(1.0 - alpha) / (rho * c)),
    )?;
    Ok((ivp, width))
}

/// Study request: one example swept over orders, exponents, and step counts.
#[derive(Clone, Debug)]
pub struct StudySpec {
    pub example: ExampleId,
    pub alphas: Vec<f64>,
    pub rhos: Vec<f64>,
    /// Strictly increasing step counts, each at least 2.
    pub step_counts: Vec<usize>,
    pub scheme: SchemeChoice,
    /// Where [`emit_study`] writes per-cell files, if anywhere.
    pub out_dir: Option<PathBuf>,
}

/// Convergence report of one `(alpha, rho)` cell.
#[derive(Clone, Debug)]
pub struct StudyCell {
    pub alpha: f64,
    pub rho: f64,
    pub report: ConvergenceReport,
}

fn check_step_counts(steps: &[usize]) -> Result<(), StudyError> {
    if steps.is_empty() || steps[0] < 2 || steps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(StudyError::Steps);
    }
    Ok(())
}

fn sup_error_uniform(values: &[f64], a_bar: f64, t_end_bar: f64, exact: &ExactFn) -> f64 {
    let n = values.len() - 1;
    let dt = (t_end_bar - a_bar) / n as f64;
    let mut worst = 0.0f64;
    for (i, &v) in values.iter().enumerate().skip(1) {
        let err = (exact(a_bar + i as f64 * dt) - v).abs();
        if err > worst {
            worst = err;
        }
    }
    worst
}

/// Runs one report per `(alpha, rho)` cell of the spec.
///
/// Fails with [`StudyError::NoClosedForm`] when the example has no
/// reference solution to measure against.
pub fn run_convergence_study(spec: &StudySpec) -> Result<Vec<StudyCell>, StudyError> {
    check_step_counts(&spec.step_counts)?;
    let cfg = NonlinearSolveConfig::default();
    let mut cells = Vec::new();
    for &alpha in &spec.alphas {
        for &rho in &spec.rhos {
            let problem = example_problem(spec.example, alpha, rho)?;
            let exact = problem
                .exact_bar
                .as_ref()
                .ok_or(StudyError::NoClosedForm(spec.example))?;
            let mut errors = Vec::with_capacity(spec.step_counts.len());
            for &n in &spec.step_counts {
                let tp = &problem.transformed;
                let error = match spec.scheme {
                    SchemeChoice::L1 => {
                        let values = solve_l1(tp, n, &cfg)?;
                        sup_error_uniform(&values, tp.a_bar, tp.t_end_bar, exact)
                    }
                    SchemeChoice::L2Sigma => {
                        let values = solve_l2_1sigma(tp, n, &cfg)?;
                        sup_error_uniform(&values, tp.a_bar, tp.t_end_bar, exact)
                    }
                    SchemeChoice::Euler => {
                        let values = solve_euler_trap(tp, n)?;
                        sup_error_uniform(&values, tp.a_bar, tp.t_end_bar, exact)
                    }
                    SchemeChoice::Almeida => {
                        let gp = &problem.generalized;
                        let mesh = build_graded_mesh(gp.a, gp.t_end, gp.rho, n)?;
                        let solution = solve_almeida(gp, DEFAULT_TRUNC, &mesh, &cfg)?;
                        let mut worst = 0.0f64;
                        for (i, &v) in solution.values.iter().enumerate().skip(1) {
                            let err = (exact(mesh.nodes_bar[i]) - v).abs();
                            if err > worst {
                                worst = err;
                            }
                        }
                        worst
                    }
                };
                errors.push(error);
            }
            cells.push(StudyCell {
                alpha,
                rho,
                report: ConvergenceReport::from_errors(&spec.step_counts, &errors),
            });
        }
    }
    Ok(cells)
}

/// Writes one CSV and one SVG per cell and returns the paths.
pub fn emit_study(
    cells: &[StudyCell],
    out_dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>, ReportError> {
    fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for cell in cells {
        let base = format!("{stem}_rho{:.4}_alpha{:.4}", cell.rho, cell.alpha);
        let csv = out_dir.join(format!("{base}.csv"));
        emit_report(&cell.report, ReportFormat::Csv, &csv)?;
        paths.push(csv);
        let svg = out_dir.join(format!("{base}.svg"));
        emit_report(&cell.report, ReportFormat::Svg, &svg)?;
        paths.push(svg);
    }
    Ok(paths)
}

/// Maximum distance from `log t` for a sequence of shrinking exponents.
///
/// For each exponent the associated problem is integrated with the
/// piecewise-linear scheme and compared against `log t` at the nodes; the
/// limit problem has `log t` as its exact solution, so the distances shrink
/// as the exponent does.
pub fn run_hadamard_limit(
    rhos: &[f64],
    alpha: f64,
    t_end: f64,
    n_steps: usize,
) -> Result<Vec<(f64, f64)>, StudyError> {
    if rhos.is_empty()
        || rhos.iter().any(|&r| !(r > 0.0))
        || rhos.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(StudyError::RhoList);
    }
    if n_steps < 2 {
        return Err(StudyError::Steps);
    }
    let cfg = NonlinearSolveConfig::default();
    let mut out = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let (ivp, width) = hadamard_problem(alpha, rho, t_end)?;
        let values = solve_l1(&ivp, n_steps, &cfg)?;
        let dt = width / n_steps as f64;
        let mut worst = 0.0f64;
        for (i, &v) in values.iter().enumerate().skip(1) {
            let reference = (i as f64 * dt).ln_1p() / rho;
            let err = (reference - v).abs();
            if err > worst {
                worst = err;
            }
        }
        out.push((rho, worst));
    }
    Ok(out)
}

/// Numerical solution and `log t` reference on the physical nodes.
#[derive(Clone, Debug)]
pub struct HadamardOverlay {
    pub t: Vec<f64>,
    pub numeric: Vec<f64>,
    pub reference: Vec<f64>,
}

/// Solves the shrinking-exponent problem once and tabulates it against
/// `log t` in the original variable.
pub fn run_hadamard_overlay(
    rho: f64,
    alpha: f64,
    t_end: f64,
    n_steps: usize,
) -> Result<HadamardOverlay, StudyError> {
    if !(rho > 0.0) {
        return Err(StudyError::RhoList);
    }
    if n_steps < 2 {
        return Err(StudyError::Steps);
    }
    let (ivp, width) = hadamard_problem(alpha, rho, t_end)?;
    let numeric = solve_l1(&ivp, n_steps, &NonlinearSolveConfig::default())?;
    let dt = width / n_steps as f64;
    let mut t = Vec::with_capacity(numeric.len());
    let mut reference = Vec::with_capacity(numeric.len());
    for i in 0..numeric.len() {
        let log_t = (i as f64 * dt).ln_1p() / rho;
        t.push(log_t.exp());
        reference.push(log_t);
    }
    Ok(HadamardOverlay {
        t,
        numeric,
        reference,
    })
}

/// Two schemes run on the same problem and mesh, with their distance.
#[derive(Clone, Debug)]
pub struct SchemeComparison {
    /// Physical nodes shared by both columns.
    pub nodes: Vec<f64>,
    /// Values from the graded-mesh expansion scheme.
    pub almeida: Vec<f64>,
    /// Values from the piecewise-linear scheme, pulled back to the nodes.
    pub l1: Vec<f64>,
    /// Maximum absolute difference over all nodes.
    pub sup_distance: f64,
}

/// Cross-validates the graded-mesh scheme against the piecewise-linear one.
///
/// Useful when no closed form exists: two unrelated discretizations that
/// agree pointwise make a strong case that both converged.
pub fn run_scheme_comparison(
    p: &GeneralizedIVP,
    n_steps: usize,
    n_trunc: usize,
) -> Result<SchemeComparison, StudyError> {
    let cfg = NonlinearSolveConfig::default();
    let mesh = build_graded_mesh(p.a, p.t_end, p.rho, n_steps)?;
    let almeida = solve_almeida(p, n_trunc, &mesh, &cfg)?;
    let transformed = to_equivalent(p);
    let values_bar = solve_l1(&transformed, n_steps, &cfg)?;
    let l1 = pull_back(&values_bar, &mesh)?;
    let sup_distance = almeida
        .values
        .iter()
        .zip(l1.values.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(SchemeComparison {
        nodes: mesh.nodes.clone(),
        almeida: almeida.values,
        l1: l1.values,
        sup_distance,
    })
}

/// The study grid behind one of the three published convergence tables.
pub fn table_study(table: u8) -> Option<StudySpec> {
    let step_counts = vec![16, 32, 64, 128, 256];
    match table {
        1 => Some(StudySpec {
            example: ExampleId::One,
            alphas: vec![0.9, 0.5, 0.2],
            rhos: vec![0.9, std::f64::consts::FRAC_PI_6, 1.0 / 3.0],
            step_counts,
            scheme: SchemeChoice::L1,
            out_dir: None,
        }),
        2 => Some(StudySpec {
            example: ExampleId::Two,
            alphas: vec![0.9, 0.5, 0.2],
            rhos: vec![5.0 * std::f64::consts::LN_2 / 4.0, 1.0 / 6.0],
            step_counts,
            scheme: SchemeChoice::L2Sigma,
            out_dir: None,
        }),
        3 => Some(StudySpec {
            example: ExampleId::Three,
            alphas: vec![0.9, 0.75, 0.5],
            rhos: vec![0.9, 0.5, 0.05],
            step_counts,
            scheme: SchemeChoice::Euler,
            out_dir: None,
        }),
        _ => None,
    }
}
