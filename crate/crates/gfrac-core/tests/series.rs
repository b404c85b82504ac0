use gfrac_core::operators::{gen_caputo_derivative, QuadratureSpec};
use gfrac_core::series::{eval_series, series_solve, SeriesError, SeriesProblem, SeriesSolution};
use gfrac_core::special::{gamma, mittag_leffler, Tolerance};

/// Pointwise derivative of a truncated expansion, for feeding the
/// quadrature oracle.
fn series_deriv(sol: &SeriesSolution, s: f64) -> f64 {
    sol.coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| {
            let e = sol.rho * i as f64 / sol.q as f64;
            c * e * s.powf(e - 1.0)
        })
        .sum()
}

#[test]
fn zero_rhs_keeps_only_the_initial_coefficient() {
    let problem = SeriesProblem {
        p: 1,
        q: 2,
        rho: 0.5,
        f_jk: Vec::new(),
        init: vec![5.0],
        m: 10,
    };
    let sol = series_solve(&problem).unwrap();
    assert_eq!(sol.coeffs.len(), 11);
    assert_eq!(sol.coeffs[0], 5.0);
    for &c in &sol.coeffs[1..] {
        assert_eq!(c, 0.0);
    }
}

#[test]
fn linear_rhs_reproduces_mittag_leffler_coefficients() {
    // f(t, u) = lambda u written around u(0) = u_a needs a constant column
    let lambda = 0.8;
    let u_a = 1.7;
    let rho = 0.5;
    let problem = SeriesProblem {
        p: 1,
        q: 2,
        rho,
        f_jk: vec![vec![lambda * u_a, lambda]],
        init: vec![u_a],
        m: 13,
    };
    let sol = series_solve(&problem).unwrap();
    for (i, &c) in sol.coeffs.iter().enumerate() {
        let want = u_a * (lambda * rho.powf(-0.5)).powi(i as i32)
            / gamma(i as f64 / 2.0 + 1.0).unwrap();
        assert!(
            (c - want).abs() <= 1e-10 * want.abs(),
            "coefficient {i}: got {c}, want {want}"
        );
    }
}

#[test]
fn pure_time_power_rhs_lands_on_a_single_coefficient() {
    // f(t, u) = t^(3 rho) occupies row six; the response appears at index
    // seven and nowhere else
    let rho: f64 = 0.9;
    let problem = SeriesProblem {
        p: 1,
        q: 2,
        rho,
        f_jk: vec![
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            vec![1.0],
        ],
        init: vec![0.7],
        m: 16,
    };
    let sol = series_solve(&problem).unwrap();
    assert_eq!(sol.coeffs[0], 0.7);
    #[allow(clippy::excessive_precision)]
    let want = 0.54373306397036833967;
    assert!(
        (sol.coeffs[7] - want).abs() <= 1e-13 * want,
        "got {}",
        sol.coeffs[7]
    );
    let closed = gamma(4.0).unwrap() / gamma(4.5).unwrap() * rho.powf(-0.5);
    assert!((sol.coeffs[7] - closed).abs() <= 1e-13 * closed);
    for (i, &c) in sol.coeffs.iter().enumerate() {
        if i != 0 && i != 7 {
            assert_eq!(c, 0.0, "coefficient {i} should stay empty");
        }
    }
}

#[test]
fn coefficients_below_the_order_follow_the_sparsity_rule() {
    let problem = SeriesProblem {
        p: 3,
        q: 4,
        rho: 0.8,
        f_jk: Vec::new(),
        init: vec![2.0],
        m: 6,
    };
    let sol = series_solve(&problem).unwrap();
    assert_eq!(sol.coeffs[0], 2.0);
    assert_eq!(sol.coeffs[1], 0.0);
    assert_eq!(sol.coeffs[2], 0.0);

    // order above two: three initial values spread over the even slots
    let rho = 0.3;
    let problem = SeriesProblem {
        p: 5,
        q: 2,
        rho,
        f_jk: Vec::new(),
        init: vec![1.0, 2.0, 3.0],
        m: 8,
    };
    let sol = series_solve(&problem).unwrap();
    assert_eq!(sol.coeffs[0], 1.0);
    assert_eq!(sol.coeffs[1], 0.0);
    assert!((sol.coeffs[2] - 2.0 / rho).abs() <= 1e-14 * (2.0 / rho));
    assert_eq!(sol.coeffs[3], 0.0);
    let want = 3.0 / (2.0 * rho * rho);
    assert!((sol.coeffs[4] - want).abs() <= 1e-14 * want);
    for &c in &sol.coeffs[5..] {
        assert_eq!(c, 0.0);
    }
}

#[test]
fn evaluation_is_a_polynomial_in_the_fractional_power() {
    let sol = SeriesSolution {
        coeffs: vec![0.0, 1.0],
        rho: 0.5,
        q: 2,
    };
    assert!((eval_series(&sol, 4.0) - 2.0f64.sqrt()).abs() < 1e-15);
    let sol = SeriesSolution {
        coeffs: vec![3.25, 0.0, -1.0],
        rho: 0.5,
        q: 2,
    };
    assert_eq!(eval_series(&sol, 0.0), 3.25);
    // w = t^(rho/q): value is 3.25 - w^2 = 3.25 - sqrt(t)
    assert!((eval_series(&sol, 0.25) - (3.25 - 0.5)).abs() < 1e-15);
}

#[test]
fn truncated_series_tracks_the_mittag_leffler_solution() {
    let lambda = 0.8;
    let u_a = 1.7;
    let rho: f64 = 0.5;
    let problem = SeriesProblem {
        p: 1,
        q: 2,
        rho,
        f_jk: vec![vec![lambda * u_a, lambda]],
        init: vec![u_a],
        m: 60,
    };
    let sol = series_solve(&problem).unwrap();
    let tol = Tolerance::default();
    for t in [0.0, 0.1, 0.25, 0.5] {
        let got = eval_series(&sol, t);
        let z = lambda * (t.powf(rho) / rho).powf(0.5);
        let want = u_a * mittag_leffler(0.5, 1.0, z, &tol).unwrap();
        assert!(
            (got - want).abs() <= 1e-8 * want.abs(),
            "t = {t}: got {got}, want {want}"
        );
    }
}

#[test]
fn series_solution_satisfies_the_equation_under_quadrature() {
    let spec = QuadratureSpec {
        panels: 64,
        refinement_limit: 12,
        tol: Tolerance {
            rel: 1e-7,
            abs: 1e-300,
            max_terms: 10_000,
        },
    };

    // linear problem, singular derivative stack at the origin
    let lambda = 0.8;
    let u_a = 1.7;
    let rho: f64 = 0.5;
    let problem = SeriesProblem {
        p: 1,
        q: 2,
        rho,
        f_jk: vec![vec![lambda * u_a, lambda]],
        init: vec![u_a],
        m: 60,
    };
    let sol = series_solve(&problem).unwrap();
    for t in [0.15, 0.3, 0.45, 0.6, 0.75] {
        let got =
            gen_caputo_derivative(|s| vec![series_deriv(&sol, s)], 0.5, rho, 0.0, t, &spec)
                .unwrap();
        let want = lambda * eval_series(&sol, t);
        assert!(
            (got - want).abs() <= 1e-4 * want.abs(),
            "t = {t}: derivative {got} vs rhs {want}"
        );
    }

    // pure time-power problem, smooth derivative stack
    let rho: f64 = 0.9;
    let problem = SeriesProblem {
        p: 1,
        q: 2,
        rho,
        f_jk: vec![
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            vec![1.0],
        ],
        init: vec![0.7],
        m: 16,
    };
    let sol = series_solve(&problem).unwrap();
    for t in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let got =
            gen_caputo_derivative(|s| vec![series_deriv(&sol, s)], 0.5, rho, 0.0, t, &spec)
                .unwrap();
        let want = t.powf(3.0 * rho);
        assert!(
            (got - want).abs() <= 1e-4 * want.abs(),
            "t = {t}: derivative {got} vs rhs {want}"
        );
    }
}

#[test]
fn series_rejects_bad_problems() {
    let base = SeriesProblem {
        p: 1,
        q: 2,
        rho: 0.5,
        f_jk: Vec::new(),
        init: vec![1.0],
        m: 4,
    };

    let mut problem = base.clone();
    problem.p = 2;
    problem.q = 4;
    assert_eq!(
        series_solve(&problem).err().unwrap(),
        SeriesError::NotCoprime { p: 2, q: 4 }
    );

    let mut problem = base.clone();
    problem.q = 1;
    assert!(matches!(
        series_solve(&problem).err().unwrap(),
        SeriesError::BadOrder { .. }
    ));

    let mut problem = base.clone();
    problem.p = 0;
    assert!(matches!(
        series_solve(&problem).err().unwrap(),
        SeriesError::BadOrder { .. }
    ));

    let mut problem = base.clone();
    problem.rho = 1.2;
    assert!(matches!(
        series_solve(&problem).err().unwrap(),
        SeriesError::Hypothesis { n: 1, .. }
    ));

    let mut problem = base.clone();
    problem.init = vec![1.0, 2.0];
    assert_eq!(
        series_solve(&problem).err().unwrap(),
        SeriesError::InitLen {
            expected: 1,
            got: 2
        }
    );

    let mut problem = base;
    problem.f_jk = vec![vec![0.0, f64::NAN]];
    assert_eq!(
        series_solve(&problem).err().unwrap(),
        SeriesError::TableEntry { j: 0, k: 1 }
    );
}
