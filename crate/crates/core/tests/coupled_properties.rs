mod common;

use coupled_are::coupled::{gains_from_values, solve_coupled, sweep, IterationConfig, Status};
use coupled_are::matrix::{is_hurwitz, Mat, HURWITZ_MARGIN};
use coupled_are::problem::{builtin_example, Dims, ProblemSpec, EXAMPLE_IDS};
use coupled_are::verify::scalar_oracle;
use rand::Rng;

fn tight() -> IterationConfig {
    IterationConfig {
        epsilon: 1e-16,
        ..Default::default()
    }
}

#[test]
fn known_solutions_are_fixed_points() {
    for id in EXAMPLE_IDS {
        let (spec, sol) = builtin_example(id).unwrap();
        let (next, _) = sweep(&spec, &sol, &tight()).unwrap();
        let tol = if id == 5 { 1e-2 } else { 1e-8 };
        assert!((&next.x1 - &sol.x1).max_abs() <= tol, "example {id}");
        assert!((&next.x2 - &sol.x2).max_abs() <= tol, "example {id}");
    }
}

#[test]
fn converged_reports_are_consistent() {
    for id in EXAMPLE_IDS {
        let (spec, _) = builtin_example(id).unwrap();
        let r = solve_coupled(&spec, &tight());
        assert_eq!(r.status, Status::Converged, "example {id}");
        assert!(r.values.x1.asymmetry() <= 1e-10 && r.values.x2.asymmetry() <= 1e-10);
        let g = r.gains.as_ref().unwrap();
        let res = r.residuals.unwrap();
        assert!(res.res_gain <= 1e-8, "example {id}");
        let closed = &(spec.a() + &(spec.b1() * &g.theta1)) + &(spec.b2() * &g.theta2);
        assert!(is_hurwitz(&closed, HURWITZ_MARGIN).unwrap(), "example {id}");
        assert!(res.closed_loop_ok && res.psd1 && res.psd2);
        assert_eq!(*g, gains_from_values(&spec, &r.values).unwrap());
    }
}

#[test]
fn default_epsilon_stops_at_first_small_step() {
    for id in EXAMPLE_IDS {
        let (spec, _) = builtin_example(id).unwrap();
        let r = solve_coupled(&spec, &IterationConfig::default());
        assert_eq!(r.status, Status::Converged);
        let (last, before) = r.trace.split_last().unwrap();
        assert!(last.step_sq < 1e-3);
        assert!(before.iter().all(|t| t.step_sq >= 1e-3));
        assert_eq!(r.trace.len(), r.iterations);
    }
}

#[test]
fn trace_tail_is_nonincreasing() {
    for id in EXAMPLE_IDS {
        let (spec, _) = builtin_example(id).unwrap();
        let r = solve_coupled(&spec, &tight());
        let tail: Vec<f64> = r.trace.iter().rev().take(5).map(|t| t.step_sq).collect();
        // reversed, so the sequence must be nondecreasing here
        assert!(
            tail.windows(2).all(|w| w[0] <= w[1]),
            "example {id}: {tail:?}"
        );
    }
}

fn random_scalar_problem(rng: &mut rand_chacha::ChaCha8Rng) -> ProblemSpec {
    let mut r = |lo: f64, hi: f64| rng.random_range(lo..hi);
    let r1_12 = r(-0.3, 0.3);
    let r2_12 = r(-0.3, 0.3);
    let r1 = Mat::from_rows(&[[r(0.5, 2.0), r1_12], [r1_12, r(0.0, 1.0)]]).unwrap();
    let r2 = Mat::from_rows(&[[r(0.0, 1.0), r2_12], [r2_12, r(0.5, 2.0)]]).unwrap();
    ProblemSpec::new(
        Dims::new(1, 1, 1).unwrap(),
        Mat::scalar(r(-2.0, 2.0)),
        Mat::scalar(r(0.5, 1.5)),
        Mat::scalar(r(0.5, 1.5)),
        Mat::scalar(r(0.5, 3.0)),
        Mat::scalar(r(0.5, 3.0)),
        r1,
        r2,
    )
    .unwrap()
}

#[test]
fn scalar_solutions_are_oracle_roots() {
    let mut rng = common::rng(404);
    let mut checked = 0;
    for _ in 0..40 {
        let spec = random_scalar_problem(&mut rng);
        let r = solve_coupled(&spec, &tight());
        if r.status != Status::Converged {
            continue;
        }
        let (x1, x2) = (r.values.x1[(0, 0)], r.values.x2[(0, 0)]);
        let roots = scalar_oracle(&spec).unwrap();
        assert!(
            roots
                .iter()
                .any(|&(a, b)| (a - x1).abs() <= 1e-6 && (b - x2).abs() <= 1e-6),
            "({x1}, {x2}) not among {roots:?}"
        );
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} random problems converged");
}
