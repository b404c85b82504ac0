use std::sync::Arc;

use gfrac_core::{
    build_graded_mesh, CaputoIVP, ConvergenceReport, GeneralizedIVP, MeshError, ProblemError,
};

fn zero_rhs() -> gfrac_core::Rhs {
    Arc::new(|_t, _u| 0.0)
}

#[test]
fn uniform_mesh_when_exponent_is_one() {
    let mesh = build_graded_mesh(0.0, 1.0, 1.0, 4).unwrap();
    assert_eq!(mesh.nodes_bar, &[0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(mesh.nodes, &[0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(mesh.steps(), 4);
    assert_eq!(mesh.dt_bar(), 0.25);
}

#[test]
fn physical_nodes_match_exponent_map_exactly_when_rho_is_one() {
    let mesh = build_graded_mesh(0.3, 2.7, 1.0, 17).unwrap();
    for (tb, t) in mesh.nodes_bar.iter().zip(&mesh.nodes) {
        assert_eq!(tb, t);
    }
}

#[test]
fn graded_mesh_square_root_exponent() {
    let mesh = build_graded_mesh(0.0, 1.0, 0.5, 2).unwrap();
    assert_eq!(mesh.nodes_bar, &[0.0, 0.5, 1.0]);
    assert!((mesh.nodes[1] - 0.25).abs() < 1e-15);
    assert_eq!(mesh.nodes[0], 0.0);
    assert_eq!(mesh.nodes[2], 1.0);
}

#[test]
fn mesh_endpoints_are_exact() {
    let mesh = build_graded_mesh(0.5, 4.0, 0.75, 13).unwrap();
    assert_eq!(mesh.nodes[0], 0.5);
    assert_eq!(mesh.nodes[13], 4.0);
}

#[test]
fn mesh_survives_tiny_exponent() {
    // rho this small sends t^rho within a few ulp of 1 across [1, 100], the
    // regime where naive powf differences collapse to zero.
    let mesh = build_graded_mesh(1.0, 100.0, 1e-7, 8).unwrap();
    assert_eq!(mesh.nodes[0], 1.0);
    assert_eq!(mesh.nodes[8], 100.0);
    for w in mesh.nodes.windows(2) {
        assert!(w[1] > w[0], "nodes must increase: {} !< {}", w[0], w[1]);
    }
    for w in mesh.nodes_bar.windows(2) {
        assert!(w[1] > w[0]);
    }
    for (tb, t) in mesh.nodes_bar.iter().zip(mesh.nodes).skip(1) {
        let mapped = t.powf(1e-7);
        assert!(
            (mapped - tb).abs() <= 1e-12 * tb.abs(),
            "t^rho = {mapped:e} vs node {tb:e}"
        );
    }
}

#[test]
fn mesh_rejects_bad_input() {
    assert_eq!(build_graded_mesh(0.0, 1.0, 0.5, 0), Err(MeshError::Steps));
    assert_eq!(
        build_graded_mesh(1.0, 1.0, 0.5, 4),
        Err(MeshError::Interval { a: 1.0, t_end: 1.0 })
    );
    assert_eq!(
        build_graded_mesh(2.0, 1.0, 0.5, 4),
        Err(MeshError::Interval { a: 2.0, t_end: 1.0 })
    );
    assert_eq!(
        build_graded_mesh(0.0, 1.0, 0.0, 4),
        Err(MeshError::Exponent { rho: 0.0 })
    );
    assert_eq!(
        build_graded_mesh(0.0, 1.0, -0.3, 4),
        Err(MeshError::Exponent { rho: -0.3 })
    );
    let err = build_graded_mesh(0.0, 1.0, f64::NAN, 4).unwrap_err();
    assert!(matches!(err, MeshError::Exponent { .. }));
}

#[test]
fn problem_accepts_positive_left_endpoint_with_any_positive_exponent() {
    for rho in [0.1, 0.5, 1.0, 2.5, 7.0] {
        let p = GeneralizedIVP::new(1.4, rho, 0.5, 2.0, vec![1.0, 0.0], zero_rhs());
        assert!(p.is_ok(), "rho = {rho}");
    }
}

#[test]
fn problem_enforces_exponent_bound_at_origin() {
    // order below one: n = 1, so any rho in (0, 1] passes
    assert!(GeneralizedIVP::new(0.7, 1.0, 0.0, 1.0, vec![1.0], zero_rhs()).is_ok());
    assert!(GeneralizedIVP::new(0.7, 0.3, 0.0, 1.0, vec![1.0], zero_rhs()).is_ok());
    let err = GeneralizedIVP::new(0.7, 1.2, 0.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Hypothesis { n: 1, .. }));

    // order between one and two: n = 2, bound tightens to 1/2
    assert!(GeneralizedIVP::new(1.5, 0.5, 0.0, 1.0, vec![1.0, 2.0], zero_rhs()).is_ok());
    let err = GeneralizedIVP::new(1.5, 0.6, 0.0, 1.0, vec![1.0, 2.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Hypothesis { n: 2, .. }));
}

#[test]
fn problem_validates_order_interval_and_data() {
    let err = GeneralizedIVP::new(0.0, 0.5, 0.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Order { .. }));
    let err = GeneralizedIVP::new(-0.5, 0.5, 0.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Order { .. }));
    let err = GeneralizedIVP::new(f64::NAN, 0.5, 0.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Order { .. }));

    let err = GeneralizedIVP::new(0.5, 0.5, 1.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Interval { .. }));
    let err = GeneralizedIVP::new(0.5, 0.5, -0.1, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Interval { .. }));

    let err = GeneralizedIVP::new(0.5, 0.5, 0.0, 1.0, vec![1.0, 2.0], zero_rhs()).err().unwrap();
    assert_eq!(
        format!("{err}"),
        format!(
            "{}",
            ProblemError::InitLen {
                expected: 1,
                got: 2
            }
        )
    );
    let err = GeneralizedIVP::new(1.5, 0.5, 0.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(
        err,
        ProblemError::InitLen {
            expected: 2,
            got: 1
        }
    ));
}

#[test]
fn problem_records_derivative_count() {
    let p = GeneralizedIVP::new(0.5, 0.5, 0.0, 1.0, vec![1.0], zero_rhs()).unwrap();
    assert_eq!(p.n(), 1);
    let p = GeneralizedIVP::new(1.0 + 1e-9, 0.5, 0.5, 1.0, vec![1.0, 0.0], zero_rhs()).unwrap();
    assert_eq!(p.n(), 2);
    let p = GeneralizedIVP::new(2.5, 0.3, 0.5, 1.0, vec![1.0, 0.0, 0.0], zero_rhs()).unwrap();
    assert_eq!(p.n(), 3);
}

#[test]
fn transformed_problem_validates_interval() {
    let err = CaputoIVP::new(0.5, 1.0, 1.0, vec![1.0], zero_rhs()).err().unwrap();
    assert!(matches!(err, ProblemError::Interval { .. }));
    let p = CaputoIVP::new(0.5, 0.25, 1.0, vec![1.0], zero_rhs()).unwrap();
    assert_eq!(p.n(), 1);
}

#[test]
fn sup_error_skips_initial_node() {
    let mesh = build_graded_mesh(0.0, 1.0, 1.0, 4).unwrap();
    let values = mesh.nodes.to_vec();
    let sol = gfrac_core::Solution {
        mesh: mesh.clone(),
        values,
        scheme_id: "test",
        diagnostics: Default::default(),
    };
    assert_eq!(gfrac_core::linf_error(&sol, |t| t), 0.0);

    let mut shifted = sol.clone();
    for v in shifted.values.iter_mut() {
        *v += 1e-3;
    }
    let err = gfrac_core::linf_error(&shifted, |t| t);
    assert!((err - 1e-3).abs() < 1e-18);

    // a mismatch at the initial node alone must not register
    let mut bad_origin = sol;
    bad_origin.values[0] = 42.0;
    assert_eq!(gfrac_core::linf_error(&bad_origin, |t| t), 0.0);
}

#[test]
fn convergence_report_recovers_second_order() {
    let ns = [16usize, 32, 64, 128];
    let errors: Vec<f64> = ns.iter().map(|&n| 5.0 / (n as f64).powi(2)).collect();
    let report = ConvergenceReport::from_errors(&ns, &errors);
    assert_eq!(report.rows.len(), 4);
    assert!(report.rows[0].order.is_none());
    for row in &report.rows[1..] {
        let order = row.order.unwrap();
        assert!((order - 2.0).abs() < 1e-12, "order = {order}");
    }
    assert_eq!(report.rows[2].n_steps, 64);
    assert!((report.rows[2].error - 5.0 / 4096.0).abs() < 1e-18);
}
