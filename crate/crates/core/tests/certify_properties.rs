mod common;

use common::*;
use heron_core::certify::{
    cosine_sums, stationarity_residual, tangent_basis, two_set_check, CERTIFICATE_TOL,
};
use heron_core::{
    grid_solve, solve, vector, ConstraintProjection, ConvexSet, OracleConfig, Scenario,
    SolverConfig, StepSchedule, Vector, Verdict,
};
use proptest::prelude::*;
use rand::Rng;

fn best_after(
    sc: &Scenario,
    start: Vector,
    iters: u64,
    projection: ConstraintProjection,
) -> Vector {
    let cfg = SolverConfig::new(StepSchedule::harmonic(1.0).unwrap(), iters, start)
        .with_stride(iters)
        .with_projection(projection);
    solve(sc, &cfg).unwrap().best_x
}

fn residual(sc: &Scenario, x: &Vector) -> f64 {
    stationarity_residual(sc, x, CERTIFICATE_TOL)
        .unwrap()
        .residual
        .unwrap()
}

/// Random affine constraint in the plane or space with point and ball targets
/// kept off it.
fn random_affine_scenario(rng: &mut TestRng) -> Scenario {
    let dim = rng.gen_range(2..=3);
    let k = rng.gen_range(1..dim);
    let base = random_vector(rng, dim, 3.0);
    let dirs: Vec<Vector> = (0..k).map(|_| random_vector(rng, dim, 1.0)).collect();
    let omega = ConvexSet::affine(base, dirs).unwrap();
    let n = rng.gen_range(2..=4);
    let mut targets = Vec::new();
    while targets.len() < n {
        let c = random_vector(rng, dim, 6.0);
        let t = if rng.gen_bool(0.5) {
            ConvexSet::singleton(c)
        } else {
            ConvexSet::ball(c, rng.gen_range(0.1..1.0)).unwrap()
        };
        if t.distance(&omega.project(&t.anchor()).unwrap()).unwrap() > 0.2 {
            targets.push(t);
        }
    }
    Scenario::new(omega, targets).unwrap()
}

#[test]
fn residual_at_the_solver_best_shrinks_with_the_budget() {
    let cases = [
        (squares_disk(), vector![-3, 5.5]),
        (cubes_ball(), vector![2, 2, 0]),
    ];
    for (sc, start) in cases {
        for projection in [ConstraintProjection::Metric, ConstraintProjection::Sphere] {
            let coarse = residual(&sc, &best_after(&sc, start.clone(), 1_000, projection));
            let fine = residual(&sc, &best_after(&sc, start.clone(), 100_000, projection));
            assert!(fine <= 1e-2, "{projection:?}: residual {fine}");
            assert!(fine < coarse, "{projection:?}: {coarse} -> {fine}");
        }
    }
}

#[test]
fn origin_is_beaten_along_the_line() {
    let heron = classical_heron();
    let sc = heron.scenario();
    let along = |t: f64| objective_by_hand(&sc, &vector![t, 0]);
    let t = golden_section(along, -10.0, 10.0, 1e-10);
    assert!((t - 1.0).abs() < 1e-6);
    assert!(along(0.0) > along(t) + 0.1);

    let r = residual(&sc, &vector![0, 0]);
    assert!(r > 0.2);
    // hand evaluation: a_1 = (0,-1), a_2 = (-4,-3)/5, -sum = (0.8, 1.6), normal cone = y-axis
    assert!((r - 0.8).abs() < 1e-15);
}

#[test]
fn certified_points_match_the_oracle() {
    let mut rng = rng(7);
    for _ in 0..10 {
        let heron = random_heron(&mut rng);
        let sc = heron.scenario();
        let xbar = heron.optimum();
        let cert = stationarity_residual(&sc, &xbar, CERTIFICATE_TOL).unwrap();
        assert!(cert.verdict.is_optimal(), "{:?}", cert.verdict);
        // the line is unbounded; search around the two points
        let lo = vector![
            heron.a[0].min(heron.b[0]) - 5.0,
            heron.a[1].min(heron.b[1]) - 5.0
        ];
        let hi = vector![
            heron.a[0].max(heron.b[0]) + 5.0,
            heron.a[1].max(heron.b[1]) + 5.0
        ];
        let oracle = grid_solve(
            &sc,
            &OracleConfig {
                bounding_box: Some((lo, hi)),
                ..OracleConfig::default()
            },
        )
        .unwrap();
        let value = sc.evaluate(&xbar).unwrap().value();
        assert!(value <= oracle.value + oracle.error_bound);
        assert!((value - heron.optimal_value()).abs() < 1e-12);
    }
}

#[test]
fn clearly_nonstationary_points_are_beaten_by_the_oracle() {
    let mut rng = rng(11);
    let mut checked = 0;
    for _ in 0..5 {
        let sc = random_ball_scenario(&mut rng);
        let oracle = grid_solve(&sc, &OracleConfig::default()).unwrap();
        for _ in 0..40 {
            let x = sample_member(&mut rng, sc.constraint());
            let cert = stationarity_residual(&sc, &x, CERTIFICATE_TOL).unwrap();
            match cert.verdict {
                Verdict::NotStationary { residual } if residual >= 0.1 => {
                    assert!(sc.evaluate(&x).unwrap().value() > oracle.value + 1e-6);
                    checked += 1;
                }
                _ => {}
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn reflection_optima_pass_the_two_set_check() {
    let mut rng = rng(3);
    for _ in 0..10 {
        let heron = random_heron(&mut rng);
        let sc = heron.scenario();
        let v = two_set_check(&sc, &heron.optimum(), &heron.unit_normal(), 1e-9).unwrap();
        assert!(v.necessary_holds());
        assert_eq!(v.sufficient_holds(), Some(true));
        let off = heron.optimum().add_scaled(0.5, &heron.unit_dir());
        let v = two_set_check(&sc, &off, &heron.unit_normal(), 1e-9).unwrap();
        assert!(!v.necessary_holds());
    }
}

proptest! {
    #[test]
    fn cosine_sums_ignore_direction_scale(seed: u64) {
        let mut rng = rng(seed);
        let sc = random_ball_scenario(&mut rng);
        let x = sample_member(&mut rng, sc.constraint());
        let dirs: Vec<Vector> = (0..3).map(|_| random_unit(&mut rng, 2)).collect();
        let scaled: Vec<Vector> = dirs
            .iter()
            .map(|d| d.scale(10f64.powf(rng.gen_range(-6.0..6.0))))
            .collect();
        let a = cosine_sums(&sc, &x, &dirs).unwrap();
        let b = cosine_sums(&sc, &x, &scaled).unwrap();
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() <= 1e-12);
        }
    }

    #[test]
    fn residual_and_cosine_sums_agree_on_affine_constraints(seed: u64) {
        let mut rng = rng(seed);
        let sc = random_affine_scenario(&mut rng);
        let omega = sc.constraint();
        let x = sample_member(&mut rng, omega);
        let basis = tangent_basis(omega, &x).unwrap();
        let sums = cosine_sums(&sc, &x, &basis).unwrap();
        let norm = sums.iter().map(|s| s * s).sum::<f64>().sqrt();
        prop_assert!((residual(&sc, &x) - norm).abs() <= 1e-12);

        // any spanning set of L: no sum exceeds the residual, and the verdicts agree
        // up to the sqrt(dim L) norm equivalence
        let best = best_after(&sc, x, 20_000, ConstraintProjection::Metric);
        for point in [&best, &sample_member(&mut rng, omega)] {
            let r = residual(&sc, point);
            let spanning: Vec<Vector> = basis
                .iter()
                .flat_map(|u| [u.scale(rng.gen_range(0.1..3.0)), u.scale(-1.0)])
                .chain(std::iter::once(basis.iter().fold(Vector::zeros(sc.dim()), |acc, u| acc.add(u))))
                .collect();
            let sums = cosine_sums(&sc, point, &spanning).unwrap();
            let worst = sums.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            prop_assert!(worst <= r + 1e-12);
            let tol = CERTIFICATE_TOL;
            if r <= tol {
                prop_assert!(worst <= tol);
            }
            if worst <= tol / (basis.len() as f64).sqrt() {
                prop_assert!(r <= tol);
            }
        }
    }
}

#[test]
fn certificates_refuse_out_of_scope_points() {
    let sc = squares_disk();
    assert!(stationarity_residual(&sc, &vector![10, 10], CERTIFICATE_TOL).is_err());
    // a target that reaches into the disk
    let overlapping = Scenario::new(
        ConvexSet::ball(vector![0, 0], 2.0).unwrap(),
        vec![
            ConvexSet::cube(vector![1, 0], 1.0).unwrap(),
            ConvexSet::singleton(vector![-5, 0]),
        ],
    )
    .unwrap();
    let cert = stationarity_residual(&overlapping, &vector![0.5, 0], CERTIFICATE_TOL).unwrap();
    assert!(matches!(cert.verdict, Verdict::Inapplicable { .. }));
}
