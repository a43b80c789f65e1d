//! End-to-end behavior of the monotone integral-equation solver:
//! operator isotonicity, ball invariance, quadrature refinement rates,
//! and agreement with the independent scalar oracle.

use ordfix_core::hammerstein::{
    apply_operator, audit_conditions, build_grid, compute_lambda, explore_solution_set,
    monotone_solve, parse_problem_config, separable_oracle, weighted_p_norm, HammersteinError,
    HammersteinProblem, Kernel, Nonlinearity, Profile, QuadratureRule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONES: Profile = Profile {
    intercept: 1.0,
    slope: 0.0,
};

const RAMP: Profile = Profile {
    intercept: 1.0,
    slope: 1.0,
};

/// The cross-checkable fixture: rank-one kernel `1 + t`, bounded shifted
/// sigmoid, conjugate pair (2, 2), unit ball.
fn sigmoid_problem(count: usize, rule: QuadratureRule) -> HammersteinProblem {
    let grid = build_grid(0.0, 1.0, count, rule).unwrap();
    HammersteinProblem::new(
        grid,
        Kernel::Separable { g: RAMP, h: ONES },
        Nonlinearity::BoundedSigmoid { a: 0.2, b: 0.3 },
        2.0,
        1.0,
    )
    .unwrap()
}

/// A vector in the closed `p`-ball of radius `limit`, built from a random
/// direction and a random radius.
fn ball_point(rng: &mut ChaCha8Rng, problem: &HammersteinProblem, limit: f64) -> Vec<f64> {
    let direction: Vec<f64> = (0..problem.len())
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    let norm = weighted_p_norm(problem, &direction);
    if norm == 0.0 {
        return vec![0.0; problem.len()];
    }
    let scale = limit * rng.random_range(0.0..=1.0) / norm;
    direction.iter().map(|d| d * scale).collect()
}

#[test]
fn the_operator_is_isotone_on_a_thousand_ordered_pairs() {
    let problem = sigmoid_problem(33, QuadratureRule::Trapezoid);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..1000 {
        // x plus a nonnegative bump stays nodewise above x; both stay in
        // the ball because each part has norm at most gamma / 2.
        let x = ball_point(&mut rng, &problem, 0.45);
        let bump: Vec<f64> = (0..problem.len())
            .map(|_| rng.random_range(0.0..=0.1))
            .collect();
        let y: Vec<f64> = x.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let fx = apply_operator(&problem, &x).unwrap();
        let fy = apply_operator(&problem, &y).unwrap();
        for (a, b) in fx.iter().zip(&fy) {
            assert!(*b >= a - 1e-12, "operator broke the order: {a} vs {b}");
        }
    }
}

#[test]
fn the_operator_maps_the_ball_into_the_ball() {
    let problem = sigmoid_problem(33, QuadratureRule::GaussLegendre);
    let audit = audit_conditions(&problem, 200, 17).unwrap();
    assert!(audit.all_pass(), "{:?}", audit.first_failure());
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..500 {
        let x = ball_point(&mut rng, &problem, problem.gamma);
        let image = apply_operator(&problem, &x).unwrap();
        let norm = weighted_p_norm(&problem, &image);
        assert!(
            norm <= problem.gamma + 1e-10,
            "image climbed out of the ball: {norm}"
        );
    }
}

#[test]
fn iterates_from_zero_climb_nodewise_inside_the_ball() {
    // Re-derive the iteration by hand and check the certificates the
    // solver claims to enforce.
    let problem = sigmoid_problem(65, QuadratureRule::Trapezoid);
    let mut current = vec![0.0; problem.len()];
    for _ in 0..30 {
        let next = apply_operator(&problem, &current).unwrap();
        for (a, b) in current.iter().zip(&next) {
            assert!(*b >= a - 1e-12);
        }
        assert!(weighted_p_norm(&problem, &next) <= problem.gamma + 1e-10);
        current = next;
    }
}

#[test]
fn growth_constants_respect_kernel_domination() {
    // |T1| <= |T2| pointwise forces lambda1 <= lambda2.
    let grid = build_grid(0.0, 1.0, 33, QuadratureRule::Trapezoid).unwrap();
    let f = Nonlinearity::Constant { value: 1.0 };
    let pairs: [(Kernel, Kernel); 3] = [
        (
            Kernel::Constant { value: 0.6 },
            Kernel::Constant { value: 1.0 },
        ),
        (
            Kernel::GaussianBump {
                amplitude: 0.5,
                width: 0.3,
            },
            Kernel::Constant { value: 0.5 },
        ),
        (
            Kernel::Separable { g: RAMP, h: ONES },
            Kernel::Affine {
                c0: 2.0,
                ct: 1.0,
                cs: 0.0,
            },
        ),
    ];
    for (small, large) in pairs {
        for (t, s) in [(0.0, 0.0), (0.3, 0.8), (1.0, 0.5)] {
            assert!(small.eval(t, s).abs() <= large.eval(t, s).abs() + 1e-12);
        }
        let lambda_small = compute_lambda(
            &HammersteinProblem::new(grid.clone(), small, f.clone(), 2.0, 1.0).unwrap(),
        )
        .unwrap();
        let lambda_large = compute_lambda(
            &HammersteinProblem::new(grid.clone(), large, f.clone(), 2.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!(
            lambda_small <= lambda_large + 1e-12,
            "{lambda_small} vs {lambda_large}"
        );
    }
}

#[test]
fn trapezoid_bias_in_the_growth_constant_shrinks_fourfold_per_refinement() {
    // For the kernel 1 + t the exact constant is 7/3; the composite
    // trapezoid rule carries an O(h^2) bias, so halving h divides the
    // error by about four.
    let kernel = Kernel::Affine {
        c0: 1.0,
        ct: 1.0,
        cs: 0.0,
    };
    let f = Nonlinearity::Constant { value: 1.0 };
    let lambda_at = |count: usize| {
        let grid = build_grid(0.0, 1.0, count, QuadratureRule::Trapezoid).unwrap();
        compute_lambda(&HammersteinProblem::new(grid, kernel.clone(), f.clone(), 2.0, 1.0).unwrap())
            .unwrap()
    };
    let exact = 7.0 / 3.0;
    let errors = [
        lambda_at(17) - exact,
        lambda_at(33) - exact,
        lambda_at(65) - exact,
    ];
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "refinement ratio {ratio} out of range"
        );
    }
}

#[test]
fn trapezoid_bias_in_the_solution_norm_shrinks_fourfold_per_refinement() {
    let norm_at = |count: usize| {
        let problem = sigmoid_problem(count, QuadratureRule::Trapezoid);
        monotone_solve(&problem, 1e-13, 500).unwrap().norm_p
    };
    let coarse = norm_at(33);
    let medium = norm_at(65);
    let fine = norm_at(129);
    let ratio = (coarse - medium) / (medium - fine);
    assert!(
        (3.5..=4.5).contains(&ratio),
        "refinement ratio {ratio} out of range"
    );
}

#[test]
fn the_monotone_run_matches_the_separable_oracle() {
    let problem = sigmoid_problem(257, QuadratureRule::GaussLegendre);
    let lambda = compute_lambda(&problem).unwrap();
    assert!((lambda - 7.0 / 3.0).abs() < 1e-12, "{lambda}");
    let report = monotone_solve(&problem, 1e-12, 500).unwrap();
    assert!(report.condition_log.iter().all(|v| v.pass));
    assert!(report.residual_p < 1e-10);
    assert!(report.nonzero_ok);
    let oracle = separable_oracle(
        &RAMP,
        &ONES,
        &Nonlinearity::BoundedSigmoid { a: 0.2, b: 0.3 },
        &problem.grid,
        1e-12,
    )
    .unwrap();
    let sup_gap = report
        .solution
        .iter()
        .zip(&oracle.solution)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(sup_gap < 1e-6, "solver and oracle disagree by {sup_gap}");
    // The scalar root lives where the bounded nonlinearity forces it.
    assert!(oracle.c_star > 0.2 && oracle.c_star < 0.5);
}

#[test]
fn a_tiny_budget_reports_no_convergence_with_the_defect() {
    let grid = build_grid(0.0, 1.0, 9, QuadratureRule::Trapezoid).unwrap();
    let problem = HammersteinProblem::new(
        grid,
        Kernel::Constant { value: 1.0 },
        Nonlinearity::Constant { value: 1.0 },
        2.0,
        1.0,
    )
    .unwrap();
    match monotone_solve(&problem, 1e-12, 1) {
        Err(HammersteinError::NoConvergence { max_iter, defect }) => {
            assert_eq!(max_iter, 1);
            // After one application the iterate is the all-ones vector,
            // which is already fixed, so the remaining defect is zero —
            // the budget, not the equation, stopped the run.
            assert!(defect < 1e-12);
        }
        other => panic!("expected a convergence failure, got {other:?}"),
    }
}

#[test]
fn config_documents_drive_the_same_run() {
    let text = r#"{
        "domain": [0.0, 1.0],
        "nodes": 129,
        "rule": "trapezoid",
        "p": 2.0,
        "gamma": 1.0,
        "kernel": {"family": "constant", "value": 1.0},
        "nonlinearity": {"family": "constant", "value": 1.0}
    }"#;
    let (problem, settings) = parse_problem_config(text).unwrap();
    let report = monotone_solve(&problem, settings.eps, settings.max_iter).unwrap();
    assert_eq!(report.iterates_count, 2);
    assert!(report.residual_p < 1e-12);
    assert!(report.solution.iter().all(|x| (x - 1.0).abs() < 1e-12));
}

#[test]
fn exploration_reaches_the_same_solution_from_below_and_above() {
    let problem = sigmoid_problem(65, QuadratureRule::GaussLegendre);
    let n = problem.len();
    // The sigmoid stays below 1/2, so c·(1+t) with c = 1/2 dominates its
    // own image: a supersolution inside the ball.
    let supersolution: Vec<f64> = problem.grid.nodes.iter().map(|t| 0.5 * (1.0 + t)).collect();
    let seeds = vec![vec![0.0; n], supersolution];
    let report = explore_solution_set(&problem, &seeds, 1e-11, 500).unwrap();
    assert_eq!(report.solutions.len(), 1, "both seeds reach the same point");
    assert_eq!(report.maximal, vec![0]);
    assert_eq!(report.outcomes[0].direction, "ascending");
    assert_eq!(report.outcomes[1].direction, "descending");
}
