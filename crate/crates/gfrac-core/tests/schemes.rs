use std::sync::Arc;

use gfrac_core::schemes::{
    solve_almeida, solve_euler_trap, solve_l1, solve_l2_1sigma, L1Weights, L21SigmaWeights,
    NonlinearSolveConfig, SchemeError,
};
use gfrac_core::special::{gamma, mittag_leffler, Tolerance};
use gfrac_core::{build_graded_mesh, CaputoIVP, GeneralizedIVP};

fn cfg() -> NonlinearSolveConfig {
    NonlinearSolveConfig::default()
}

/// Transformed right-hand side and solution of the power-law benchmark
/// problem with data t^2 on [0, 1].
fn power_problem(alpha: f64, rho: f64) -> (CaputoIVP, impl Fn(f64) -> f64) {
    let scale = rho.powf(-alpha);
    let rhs: gfrac_core::Rhs = Arc::new(move |t_bar: f64, _| scale * t_bar.powf(2.0 / rho));
    let p = CaputoIVP::new(alpha, 0.0, 1.0, vec![0.0], rhs).unwrap();
    let c = scale * gamma(1.0 + 2.0 / rho).unwrap() / gamma(1.0 + 2.0 / rho + alpha).unwrap();
    let exact = move |t_bar: f64| c * t_bar.powf(2.0 / rho + alpha);
    (p, exact)
}

/// Transformed cubic benchmark; its data and solution carry no rho at all.
fn cubic_problem(alpha: f64) -> (CaputoIVP, impl Fn(f64) -> f64) {
    let c = gamma(4.0).unwrap() / gamma(4.0 - alpha).unwrap();
    let rhs: gfrac_core::Rhs = Arc::new(move |t_bar: f64, _| c * t_bar.powf(3.0 - alpha));
    let p = CaputoIVP::new(alpha, 0.0, 1.0, vec![0.0], rhs).unwrap();
    (p, |t_bar: f64| t_bar * t_bar * t_bar)
}

/// Transformed linear benchmark with a Mittag-Leffler closed form,
/// posed away from the origin.
fn linear_problem(alpha: f64, rho: f64) -> (CaputoIVP, impl Fn(f64) -> f64) {
    let a_bar = 0.5f64.powf(rho);
    let rhs: gfrac_core::Rhs = Arc::new(move |t_bar: f64, x: f64| x + t_bar - a_bar);
    let p = CaputoIVP::new(alpha, a_bar, 1.0, vec![-1.0], rhs).unwrap();
    let tol = Tolerance::default();
    let exact = move |t_bar: f64| {
        let w = t_bar - a_bar;
        let z = w.powf(alpha);
        -mittag_leffler(alpha, 1.0, z, &tol).unwrap()
            + w.powf(1.0 + alpha) * mittag_leffler(alpha, alpha + 2.0, z, &tol).unwrap()
    };
    (p, exact)
}

fn sup_error(p: &CaputoIVP, values: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
    let n = values.len() - 1;
    let dt = (p.t_end_bar - p.a_bar) / n as f64;
    values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &v)| (v - exact(p.a_bar + i as f64 * dt)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn l1_weights_shape() {
    let w = L1Weights::new(0.4, 8);
    assert_eq!(w.alpha(), 0.4);
    assert_eq!(w.as_slice().len(), 8);
    assert_eq!(w.get(1), 1.0);
    for j in 1..8 {
        assert!(w.get(j) > w.get(j + 1), "weights must decrease at j = {j}");
        assert!(w.get(j + 1) > 0.0);
    }
}

#[test]
fn l1_is_exact_on_linear_solutions() {
    let alpha = 0.6;
    let c = gamma(2.0 - alpha).unwrap();
    let rhs: gfrac_core::Rhs = Arc::new(move |t_bar: f64, _| t_bar.powf(1.0 - alpha) / c);
    let p = CaputoIVP::new(alpha, 0.0, 1.0, vec![0.0], rhs).unwrap();
    let u = solve_l1(&p, 8, &cfg()).unwrap();
    for (i, &v) in u.iter().enumerate() {
        let t_bar = i as f64 / 8.0;
        assert!((v - t_bar).abs() < 1e-12, "node {i}: {v} vs {t_bar}");
    }
}

#[test]
fn l1_single_step_unrolled_by_hand() {
    let alpha = 0.3;
    let rhs: gfrac_core::Rhs = Arc::new(|_, _| 0.7);
    let p = CaputoIVP::new(alpha, 0.0, 1.0, vec![2.0], rhs).unwrap();
    let u = solve_l1(&p, 1, &cfg()).unwrap();
    assert_eq!(u[0], 2.0);
    let want = gamma(1.7).unwrap() * 0.7;
    assert!((u[1] - u[0] - want).abs() < 1e-14);
}

#[test]
fn l1_matches_published_errors_for_power_data() {
    let (p, exact) = power_problem(0.5, 0.9);
    let e16 = sup_error(&p, &solve_l1(&p, 16, &cfg()).unwrap(), &exact);
    let e32 = sup_error(&p, &solve_l1(&p, 32, &cfg()).unwrap(), &exact);
    assert!((e16 - 7.6009e-3).abs() <= 0.01 * 7.6009e-3, "e16 = {e16:e}");
    assert!((e32 - 2.7918e-3).abs() <= 0.01 * 2.7918e-3, "e32 = {e32:e}");
    let order = (e16 / e32).ln() / 2f64.ln();
    assert!((order - 1.4450).abs() <= 0.02, "order = {order}");
}

#[test]
fn l1_errors_decrease_monotonically() {
    let (p, exact) = power_problem(0.5, 0.9);
    let mut last = f64::INFINITY;
    for n in [16usize, 32, 64, 128, 256] {
        let e = sup_error(&p, &solve_l1(&p, n, &cfg()).unwrap(), &exact);
        assert!(e < last, "error went up at N = {n}: {e} vs {last}");
        last = e;
    }
}

#[test]
fn l1_reports_divergent_iteration() {
    let rhs: gfrac_core::Rhs = Arc::new(|_, x: f64| 1e6 * x);
    let p = CaputoIVP::new(0.5, 0.0, 1.0, vec![1.0], rhs).unwrap();
    let err = solve_l1(&p, 4, &cfg()).err().unwrap();
    match err {
        SchemeError::NonConvergence { node, iterations } => {
            assert_eq!(node, 1);
            assert_eq!(iterations, cfg().max_iter);
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn l2_sigma_weights_shape() {
    let w = L21SigmaWeights::new(0.9, 16);
    assert!((w.sigma() - (1.0 - 0.45)).abs() < 1e-15);
    let first = w.ladder(0);
    assert_eq!(first, vec![w.sigma().powf(1.0 - 0.9)]);
    for n in [1usize, 5, 16] {
        let ladder = w.ladder(n);
        assert_eq!(ladder.len(), n + 1);
        // the correction terms telescope out of the sum
        let total: f64 = ladder.iter().sum();
        let want = (n as f64 + w.sigma()).powf(1.0 - 0.9);
        assert!((total - want).abs() <= 1e-12 * want, "n = {n}");
    }
}

#[test]
fn l2_sigma_is_exact_on_linear_solutions() {
    let alpha = 0.4;
    let c = gamma(2.0 - alpha).unwrap();
    let rhs: gfrac_core::Rhs = Arc::new(move |t_bar: f64, _| t_bar.powf(1.0 - alpha) / c);
    let p = CaputoIVP::new(alpha, 0.0, 1.0, vec![0.0], rhs).unwrap();
    let u = solve_l2_1sigma(&p, 8, &cfg()).unwrap();
    for (i, &v) in u.iter().enumerate() {
        let t_bar = i as f64 / 8.0;
        assert!((v - t_bar).abs() < 1e-12, "node {i}: {v} vs {t_bar}");
    }
}

#[test]
fn l2_sigma_matches_published_errors_for_cubic_data() {
    let (p, exact) = cubic_problem(0.9);
    let e16 = sup_error(&p, &solve_l2_1sigma(&p, 16, &cfg()).unwrap(), &exact);
    assert!((e16 - 7.5367e-4).abs() <= 0.01 * 7.5367e-4, "e16 = {e16:e}");
}

#[test]
fn l2_sigma_handles_state_dependent_rhs() {
    // D^alpha u = u with u(0) = 1 has the Mittag-Leffler solution, whose
    // derivative is unbounded at the origin; on a uniform grid the endpoint
    // error then decays at the reduced rate 2 alpha = 1
    let alpha = 0.5;
    let rhs: gfrac_core::Rhs = Arc::new(|_, x: f64| x);
    let p = CaputoIVP::new(alpha, 0.0, 1.0, vec![1.0], rhs).unwrap();
    let tol = Tolerance::default();
    let reference = mittag_leffler(alpha, 1.0, 1.0, &tol).unwrap();
    let mut final_errors = Vec::new();
    for n in [128usize, 256, 512] {
        let u = solve_l2_1sigma(&p, n, &cfg()).unwrap();
        final_errors.push((u[n] - reference).abs());
    }
    assert!(final_errors[0] <= 1e-2, "coarse error {:e}", final_errors[0]);
    for pair in final_errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            (1.8..=2.2).contains(&ratio),
            "error ratio {ratio} strays from first order"
        );
    }
}

#[test]
fn euler_trap_keeps_constant_solutions() {
    let rhs: gfrac_core::Rhs = Arc::new(|_, _| 0.0);
    let p = CaputoIVP::new(0.7, 0.5, 2.0, vec![5.0], rhs).unwrap();
    let u = solve_euler_trap(&p, 12).unwrap();
    for &v in &u {
        assert_eq!(v, 5.0);
    }
}

#[test]
fn euler_trap_matches_published_errors_for_linear_problem() {
    let (p, exact) = linear_problem(0.9, 0.9);
    let e16 = sup_error(&p, &solve_euler_trap(&p, 16).unwrap(), &exact);
    assert!((e16 - 5.5781e-3).abs() <= 0.05 * 5.5781e-3, "e16 = {e16:e}");
}

#[test]
fn almeida_keeps_constant_solutions() {
    let rhs: gfrac_core::Rhs = Arc::new(|_, _| 0.0);
    let p = GeneralizedIVP::new(0.5, 0.75, 0.25, 4.0, vec![1.0], rhs).unwrap();
    let mesh = build_graded_mesh(0.25, 4.0, 0.75, 16).unwrap();
    let sol = solve_almeida(&p, 7, &mesh, &cfg()).unwrap();
    for &v in &sol.values {
        assert_eq!(v, 1.0);
    }
}

#[test]
fn almeida_is_exact_on_constant_data() {
    // constant data c integrates to u_a + c (t^rho - a^rho)^alpha / (rho^alpha Gamma(1+alpha))
    let c = 2.0;
    let a = 0.25;
    let t_end = 4.0;
    for (alpha, rho) in [(0.9, 0.5), (0.5, 0.75), (0.2, 1.0), (0.7, 0.3)] {
        let rhs: gfrac_core::Rhs = Arc::new(move |_, _| c);
        let p = GeneralizedIVP::new(alpha, rho, a, t_end, vec![1.0], rhs).unwrap();
        let mesh = build_graded_mesh(a, t_end, rho, 64).unwrap();
        let sol = solve_almeida(&p, 7, &mesh, &cfg()).unwrap();
        let g1a = gamma(1.0 + alpha).unwrap();
        let mut worst = 0.0f64;
        for (&v, &t) in sol.values.iter().zip(&mesh.nodes) {
            let want =
                1.0 + c * (t.powf(rho) - a.powf(rho)).powf(alpha) / (rho.powf(alpha) * g1a);
            worst = worst.max((v - want).abs());
        }
        assert!(
            worst <= 1e-12,
            "alpha = {alpha}, rho = {rho}: sup error {worst:e}"
        );
    }
}

#[test]
fn almeida_converges_on_power_law_solution() {
    // exact solution ((t^rho) / rho)^3 with matching power-law data
    let alpha = 0.9;
    let rho = 0.9;
    let c = gamma(4.0).unwrap() / gamma(4.0 - alpha).unwrap();
    let rhs: gfrac_core::Rhs =
        Arc::new(move |t: f64, _| c * (t.powf(rho) / rho).powf(3.0 - alpha));
    let p = GeneralizedIVP::new(alpha, rho, 0.0, 1.0, vec![0.0], rhs).unwrap();
    let mesh = build_graded_mesh(0.0, 1.0, rho, 256).unwrap();
    let sol = solve_almeida(&p, 10, &mesh, &cfg()).unwrap();
    let mut worst = 0.0f64;
    for (&v, &t) in sol.values.iter().zip(&mesh.nodes) {
        let want = (t.powf(rho) / rho).powi(3);
        worst = worst.max((v - want).abs());
    }
    assert!(worst <= 1e-2, "sup error {worst:e}");
}

#[test]
fn almeida_records_solution_metadata() {
    let rhs: gfrac_core::Rhs = Arc::new(|t: f64, x: f64| t * x.sin());
    let p = GeneralizedIVP::new(0.5, 0.75, 0.25, 4.0, vec![1.0], rhs).unwrap();
    let mesh = build_graded_mesh(0.25, 4.0, 0.75, 32).unwrap();
    let sol = solve_almeida(&p, 10, &mesh, &cfg()).unwrap();
    assert_eq!(sol.scheme_id, "almeida");
    assert_eq!(sol.values.len(), 33);
    assert_eq!(sol.values[0], 1.0);
    assert_eq!(sol.diagnostics.iterations.len(), 32);
    assert!(sol.diagnostics.iterations.iter().all(|&k| k >= 1));
}

#[test]
fn almeida_rejects_foreign_meshes() {
    let rhs: gfrac_core::Rhs = Arc::new(|_, _| 0.0);
    let p = GeneralizedIVP::new(0.5, 0.75, 0.25, 4.0, vec![1.0], rhs).unwrap();
    let wrong_rho = build_graded_mesh(0.25, 4.0, 0.5, 16).unwrap();
    assert_eq!(
        solve_almeida(&p, 7, &wrong_rho, &cfg()).err().unwrap(),
        SchemeError::MeshMismatch
    );
    let wrong_a = build_graded_mesh(0.5, 4.0, 0.75, 16).unwrap();
    assert_eq!(
        solve_almeida(&p, 7, &wrong_a, &cfg()).err().unwrap(),
        SchemeError::MeshMismatch
    );
}

#[test]
fn schemes_reject_bad_arguments() {
    let rhs: gfrac_core::Rhs = Arc::new(|_, _| 0.0);
    let p = CaputoIVP {
        alpha: 1.5,
        a_bar: 0.0,
        t_end_bar: 1.0,
        init_bar: vec![0.0, 0.0],
        rhs_bar: Arc::clone(&rhs),
    };
    assert_eq!(
        solve_l1(&p, 8, &cfg()).err().unwrap(),
        SchemeError::AlphaRange { alpha: 1.5 }
    );
    assert_eq!(
        solve_euler_trap(&p, 8).err().unwrap(),
        SchemeError::AlphaRange { alpha: 1.5 }
    );

    let p = CaputoIVP::new(0.5, 0.0, 1.0, vec![0.0], Arc::clone(&rhs)).unwrap();
    assert_eq!(solve_l1(&p, 0, &cfg()).err().unwrap(), SchemeError::Steps);
    let bad = NonlinearSolveConfig {
        tol: 0.0,
        max_iter: 100,
    };
    assert_eq!(solve_l1(&p, 8, &bad).err().unwrap(), SchemeError::BadConfig);

    let hollow = CaputoIVP {
        alpha: 0.5,
        a_bar: 0.0,
        t_end_bar: 1.0,
        init_bar: Vec::new(),
        rhs_bar: rhs,
    };
    assert_eq!(
        solve_l2_1sigma(&hollow, 8, &cfg()).err().unwrap(),
        SchemeError::EmptyInit
    );
}
