//! Command-line interface.
//!
//! `solve` integrates a problem described by a JSON config, `bench`
//! reproduces the convergence tables and figures, `eval-deriv` evaluates
//! the generalized derivative of a user-supplied function, `ml` prints
//! Mittag-Leffler values, and `series` runs the expansion solver.  Output
//! files land in the directory named by `--out-dir` or the `GFRAC_OUT_DIR`
//! environment variable.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use gfrac_core::mesh::build_graded_mesh;
use gfrac_core::operators::{gen_caputo_derivative, OperatorError, QuadratureSpec};
use gfrac_core::schemes::{
    solve_almeida, solve_euler_trap, solve_l1, solve_l2_1sigma, NonlinearSolveConfig, SchemeError,
};
use gfrac_core::series::{series_solve, SeriesError, SeriesProblem};
use gfrac_core::special::{mittag_leffler, SpecialError};
use gfrac_core::transform::{pull_back, to_equivalent, TransformError};
use gfrac_core::{linf_error, ConvergenceReport, MeshError, Tolerance};

use crate::config::{ConfigError, ProblemConfig, SchemeChoice, StepSpec};
use crate::expr::{parse_expression, ParseError};
use crate::report::{
    emit_report, sig17, write_chart_svg, write_columns_csv, ChartSpec, ReportError, ReportFormat,
    SeriesLine,
};
use crate::study::{
    emit_study, example_problem, run_convergence_study, run_hadamard_limit, run_hadamard_overlay,
    run_scheme_comparison, table_study, ExampleId, StudyError, DEFAULT_TRUNC,
};

#[derive(Parser)]
#[command(name = "gfrac", version, about = "Generalized Caputo fractional solvers")]
struct Cli {
    /// Directory output files are written into
    #[arg(
        long,
        global = true,
        env = "GFRAC_OUT_DIR",
        default_value = "out",
        value_name = "DIR"
    )]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem from a JSON config and write node/value CSV files
    Solve {
        /// Path to the problem config
        config: PathBuf,
        /// Override the scheme named in the config
        #[arg(long, value_enum)]
        scheme: Option<SchemeChoice>,
        /// Override the step counts with a single value
        #[arg(long = "N")]
        n: Option<usize>,
        /// Retained expansion terms of the graded-mesh scheme
        #[arg(long, default_value_t = DEFAULT_TRUNC)]
        n_trunc: usize,
    },
    /// Reproduce a convergence table or a figure
    Bench {
        /// Table number: 1, 2, or 3
        #[arg(long, conflicts_with = "figure")]
        table: Option<u8>,
        /// Figure number: 2, 3, or 4
        #[arg(long)]
        figure: Option<u8>,
    },
    /// Evaluate the generalized derivative from the ordinary derivatives
    #[command(allow_negative_numbers = true)]
    EvalDeriv {
        /// Fractional order
        #[arg(long)]
        alpha: f64,
        /// Derivative exponent
        #[arg(long)]
        rho: f64,
        /// Lower limit
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        /// Ordinary derivatives of u as expressions in t, lowest order
        /// first, one flag per order
        #[arg(long = "du", required = true)]
        du: Vec<String>,
        /// Evaluation points
        #[arg(required = true)]
        points: Vec<f64>,
    },
    /// Print the two-parameter Mittag-Leffler function value
    #[command(allow_negative_numbers = true)]
    Ml { alpha: f64, beta: f64, z: f64 },
    /// Run the series solver on a config that carries an expansion table
    #[command(allow_negative_numbers = true)]
    Series {
        /// Path to the problem config
        config: PathBuf,
        /// Number of series coefficients to compute
        #[arg(long, default_value_t = 40)]
        terms: usize,
        /// Evaluate the truncated series here instead of printing coefficients
        #[arg(long = "at")]
        at: Vec<f64>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Study(#[from] StudyError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Expr(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
}

/// Parses arguments, runs the requested command, and returns the process
/// exit code: zero exactly when every requested output was produced.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            config,
            scheme,
            n,
            n_trunc,
        } => cmd_solve(&cli.out_dir, &config, scheme, n, n_trunc),
        Command::Bench { table, figure } => cmd_bench(&cli.out_dir, table, figure),
        Command::EvalDeriv {
            alpha,
            rho,
            a,
            du,
            points,
        } => cmd_eval_deriv(alpha, rho, a, &du, &points),
        Command::Ml { alpha, beta, z } => cmd_ml(alpha, beta, z),
        Command::Series { config, terms, at } => cmd_series(&config, terms, &at),
    }
}

fn cmd_solve(
    out_dir: &Path,
    config_path: &Path,
    scheme: Option<SchemeChoice>,
    n: Option<usize>,
    n_trunc: usize,
) -> Result<(), CliError> {
    let mut cfg = ProblemConfig::from_path(config_path)?;
    if let Some(s) = scheme {
        cfg.scheme = s;
    }
    if let Some(n) = n {
        cfg.steps = StepSpec::One(n);
    }
    let step_counts = cfg.step_counts()?;
    let ivp = cfg.to_ivp()?;
    let exact = cfg.exact_fn()?;
    let transformed = to_equivalent(&ivp);
    let solve_cfg = NonlinearSolveConfig::default();
    fs::create_dir_all(out_dir)?;
    let stem = config_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("problem");

    let mut errors = Vec::new();
    for &n in &step_counts {
        let mesh = build_graded_mesh(ivp.a, ivp.t_end, ivp.rho, n)?;
        let solution = match cfg.scheme {
            SchemeChoice::Almeida => solve_almeida(&ivp, n_trunc, &mesh, &solve_cfg)?,
            other => {
                let values_bar = match other {
                    SchemeChoice::L1 => solve_l1(&transformed, n, &solve_cfg)?,
                    SchemeChoice::L2Sigma => solve_l2_1sigma(&transformed, n, &solve_cfg)?,
                    _ => solve_euler_trap(&transformed, n)?,
                };
                pull_back(&values_bar, &mesh)?
            }
        };
        let path = out_dir.join(format!("{stem}_{}_N{n}.csv", cfg.scheme.name()));
        write_columns_csv(&path, &["t", "u"], &[&solution.mesh.nodes, &solution.values])?;
        println!("wrote {}", path.display());
        if let Some(exact) = &exact {
            let err = linf_error(&solution, |t| exact(t));
            println!("N={n} max error {}", sig17(err));
            errors.push(err);
        }
    }
    if errors.len() >= 2 {
        let report = ConvergenceReport::from_errors(&step_counts, &errors);
        let path = out_dir.join(format!("{stem}_{}_report.csv", cfg.scheme.name()));
        emit_report(&report, ReportFormat::Csv, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_bench(out_dir: &Path, table: Option<u8>, figure: Option<u8>) -> Result<(), CliError> {
    match (table, figure) {
        (Some(t), None) => bench_table(out_dir, t),
        (None, Some(f)) => bench_figure(out_dir, f),
        _ => Err(CliError::Usage(
            "pass exactly one of --table or --figure".to_string(),
        )),
    }
}

fn bench_table(out_dir: &Path, table: u8) -> Result<(), CliError> {
    let mut spec = table_study(table)
        .ok_or_else(|| CliError::Usage(format!("no table {table}; tables are 1, 2, 3")))?;
    spec.out_dir = Some(out_dir.to_path_buf());
    let cells = run_convergence_study(&spec)?;
    let paths = emit_study(&cells, out_dir, &format!("table{table}"))?;
    for path in &paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn bench_figure(out_dir: &Path, figure: u8) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)?;
    match figure {
        2 => {
            let problem = example_problem(ExampleId::Four, 0.5, 0.75)?;
            let cmp = run_scheme_comparison(&problem.generalized, 256, DEFAULT_TRUNC)?;
            let csv = out_dir.join("figure2.csv");
            write_columns_csv(
                &csv,
                &["t", "almeida", "l1"],
                &[&cmp.nodes, &cmp.almeida, &cmp.l1],
            )?;
            println!("wrote {}", csv.display());
            let svg = out_dir.join("figure2.svg");
            write_chart_svg(
                &svg,
                &ChartSpec {
                    title: "graded-mesh expansion scheme against pulled-back L1",
                    x_label: "t",
                    y_label: "u",
                    log_x: false,
                    log_y: false,
                    slope_guides: &[],
                    series: &[
                        SeriesLine {
                            label: "almeida",
                            x: &cmp.nodes,
                            y: &cmp.almeida,
                        },
                        SeriesLine {
                            label: "l1",
                            x: &cmp.nodes,
                            y: &cmp.l1,
                        },
                    ],
                },
            )?;
            println!("wrote {}", svg.display());
            println!("sup distance {}", sig17(cmp.sup_distance));
            Ok(())
        }
        3 => {
            let rhos = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7];
            let rows = run_hadamard_limit(&rhos, 0.5, 100.0, 256)?;
            let rho_col: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let err_col: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let csv = out_dir.join("figure3.csv");
            write_columns_csv(&csv, &["rho", "error"], &[&rho_col, &err_col])?;
            println!("wrote {}", csv.display());
            let svg = out_dir.join("figure3.svg");
            write_chart_svg(
                &svg,
                &ChartSpec {
                    title: "distance from log t as the exponent shrinks",
                    x_label: "rho",
                    y_label: "error",
                    log_x: true,
                    log_y: true,
                    slope_guides: &[],
                    series: &[SeriesLine {
                        label: "error",
                        x: &rho_col,
                        y: &err_col,
                    }],
                },
            )?;
            println!("wrote {}", svg.display());
            Ok(())
        }
        4 => {
            let overlay = run_hadamard_overlay(1e-7, 0.5, 100.0, 256)?;
            let csv = out_dir.join("figure4.csv");
            write_columns_csv(
                &csv,
                &["t", "numeric", "log_t"],
                &[&overlay.t, &overlay.numeric, &overlay.reference],
            )?;
            println!("wrote {}", csv.display());
            let svg = out_dir.join("figure4.svg");
            write_chart_svg(
                &svg,
                &ChartSpec {
                    title: "small-exponent solution on top of log t",
                    x_label: "t",
                    y_label: "u",
                    log_x: true,
                    log_y: false,
                    slope_guides: &[],
                    series: &[
                        SeriesLine {
                            label: "numeric",
                            x: &overlay.t,
                            y: &overlay.numeric,
                        },
                        SeriesLine {
                            label: "log t",
                            x: &overlay.t,
                            y: &overlay.reference,
                        },
                    ],
                },
            )?;
            println!("wrote {}", svg.display());
            Ok(())
        }
        other => Err(CliError::Usage(format!(
            "no figure {other}; figures are 2, 3, 4"
        ))),
    }
}

fn cmd_eval_deriv(
    alpha: f64,
    rho: f64,
    a: f64,
    du: &[String],
    points: &[f64],
) -> Result<(), CliError> {
    let n = if alpha > 0.0 { alpha.floor() as usize + 1 } else { 1 };
    if du.len() != n {
        return Err(CliError::Usage(format!(
            "order {alpha} needs {n} derivative expression(s), got {}",
            du.len()
        )));
    }
    let mut exprs = Vec::with_capacity(du.len());
    for src in du {
        exprs.push(parse_expression(src)?);
    }
    let derivs = |s: f64| -> Vec<f64> {
        exprs
            .iter()
            .map(|e| e.eval(s, f64::NAN).unwrap_or(f64::NAN))
            .collect()
    };
    let spec = QuadratureSpec::default();
    for &t in points {
        let value = gen_caputo_derivative(derivs, alpha, rho, a, t, &spec)?;
        println!("{t},{}", sig17(value));
    }
    Ok(())
}

fn cmd_ml(alpha: f64, beta: f64, z: f64) -> Result<(), CliError> {
    let value = mittag_leffler(alpha, beta, z, &Tolerance::default())?;
    println!("{value}");
    Ok(())
}

fn cmd_series(config_path: &Path, terms: usize, at: &[f64]) -> Result<(), CliError> {
    let cfg = ProblemConfig::from_path(config_path)?;
    let table = cfg
        .series
        .as_ref()
        .ok_or_else(|| CliError::Usage("config has no `series` table".to_string()))?;
    if cfg.a != 0.0 {
        return Err(CliError::Usage(
            "the series expansion is taken around 0, so the config needs a = 0".to_string(),
        ));
    }
    let q = table.q;
    let p_real = cfg.alpha * q as f64;
    let p = p_real.round();
    if !(p > 0.0) || (p_real - p).abs() > 1e-9 {
        return Err(CliError::Usage(format!(
            "alpha = {} is not a positive multiple of 1/{q}",
            cfg.alpha
        )));
    }
    let problem = SeriesProblem {
        p: p as u32,
        q,
        rho: cfg.rho,
        f_jk: table.f_jk.clone(),
        init: cfg.init.clone(),
        m: terms,
    };
    let solution = series_solve(&problem)?;
    if at.is_empty() {
        for (k, c) in solution.coeffs.iter().enumerate() {
            println!("{k},{}", sig17(*c));
        }
    } else {
        for &t in at {
            println!("{t},{}", sig17(gfrac_core::series::eval_series(&solution, t)));
        }
    }
    Ok(())
}
