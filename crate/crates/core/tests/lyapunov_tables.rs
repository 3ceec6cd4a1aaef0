use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use switchstab_core::bounds::best_response_upper;
use switchstab_core::instances::{prop_different_3d, stanford_urbano};
use switchstab_core::linalg::vec_norm;
use switchstab_core::lyapunov::{
    bellman_operator, closed_loop_simulate, decrease_ratio, decrease_ratio_at, exceedance_fraction,
    extract_feedback, v_hat, v_lambda, AngularGrid, ValueKind,
};
use switchstab_core::{Enumerator, Matrix, MatrixSet, MatrixSet64, SwitchingRule};

fn su() -> MatrixSet64 {
    stanford_urbano::<f64>().set
}

type Rule = Box<dyn Fn(&[f64]) -> usize>;

#[test]
fn v_lambda_self_convergence() {
    let coarse = v_lambda(&su(), 0.95, 24, &AngularGrid::new(1024).unwrap()).unwrap();
    let fine = v_lambda(&su(), 0.95, 24, &AngularGrid::new(2048).unwrap()).unwrap();
    assert_eq!(coarse.kind, ValueKind::VLambda);
    assert!(coarse.min_value() >= 1.0);
    assert!((coarse.max_value() / fine.max_value() - 1.0).abs() < 0.01);
}

#[test]
fn v_lambda_above_certified_upper_bound_mostly_decreases() {
    let (ub, _) = best_response_upper(&su(), 9, 4096, None, &Enumerator::default()).unwrap();
    let lambda = 0.95;
    assert!(lambda > ub.certified);
    let grid = AngularGrid::new(1024).unwrap();
    let t = v_lambda(&su(), lambda, 24, &grid).unwrap();
    let r = decrease_ratio(&t, &su()).unwrap();
    assert!(exceedance_fraction(&r, lambda) <= 0.05);
}

#[test]
fn v_hat_fixed_point_equation() {
    let grid = AngularGrid::new(1024).unwrap();
    let tol = 1e-10;
    let t = v_hat(&su(), 0.9, &grid, 100_000, tol).unwrap();
    assert!(t.converged);
    let tw = bellman_operator(&su(), &grid, 0.9, &t.values).unwrap();
    for (w, x) in t.values.iter().zip(&tw) {
        assert!((w - x).abs() <= tol);
    }
    // sandwich m |x| ≤ V(x) ≤ M |x|
    assert!(t.min_value() >= 1.0);
    assert!(t.max_value().is_finite());
}

#[test]
fn v_hat_ratio_profile_at_088() {
    let grid = AngularGrid::new(4096).unwrap();
    let t = v_hat(&su(), 0.88, &grid, 100_000, 1e-6).unwrap();
    let nodes = decrease_ratio(&t, &su()).unwrap();
    let mids = decrease_ratio_at(&t, &su(), &grid.midpoints::<f64>()).unwrap();
    let max_mid = mids.iter().copied().fold(f64::MIN, f64::max);
    let min_node = nodes.iter().copied().fold(f64::MAX, f64::min);
    assert!(max_mid > 0.88 && max_mid < 0.89, "{max_mid}");
    assert!(min_node < 0.88);
}

#[test]
fn feedback_at_095_stabilizes() {
    let grid = AngularGrid::new(4096).unwrap();
    let mu = 0.95;
    let t = v_hat(&su(), mu, &grid, 100_000, 1e-13).unwrap();
    let p = extract_feedback(&t, &su(), mu).unwrap();
    assert!(!p.arcs.is_empty() && p.arcs.len() < 100);
    assert_eq!(p.arcs[0].start, 0.0);
    assert_eq!(p.arcs.last().unwrap().end, std::f64::consts::PI);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let xs = closed_loop_simulate(&p, &su(), &[s, s], 200).unwrap();
    for (k, x) in xs.iter().enumerate() {
        assert!(vec_norm(x) <= 1.1 * mu.powi(k as i32), "step {k}");
    }
}

#[test]
fn feedback_rule_reads_partition_by_angle() {
    let grid = AngularGrid::new(512).unwrap();
    let t = v_hat(&su(), 0.95, &grid, 100_000, 1e-13).unwrap();
    let p = extract_feedback(&t, &su(), 0.95).unwrap();
    for arc in &p.arcs {
        let mid = 0.5 * (arc.start + arc.end);
        assert_eq!(p.select(&[mid.cos(), mid.sin()]), arc.mode);
        // antipodal state chooses the same mode
        assert_eq!(p.select(&[-mid.cos(), -mid.sin()]), arc.mode);
    }
}

// x ↦ B when the chosen coordinate share exceeds a threshold, else A
fn threshold_rule(coord: usize, c: f64, flip: bool) -> impl Fn(&[f64]) -> usize {
    move |x: &[f64]| {
        let share = x[coord].abs() / vec_norm(x);
        usize::from((share > c) != flip)
    }
}

#[test]
fn three_dimensional_instance_resists_every_test_feedback() {
    let inst = prop_different_3d::<f64>();
    let e = inst.test_vector.clone().unwrap();
    let mut rules: Vec<Rule> = vec![Box::new(|_: &[f64]| 0), Box::new(|_: &[f64]| 1)];
    for coord in 0..3 {
        for k in 1..10 {
            for flip in [false, true] {
                rules.push(Box::new(threshold_rule(coord, k as f64 / 10.0, flip)));
            }
        }
    }
    for seed in 0..50u64 {
        // random mode per cell of a 16 × 8 angular partition of the sphere
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<usize> = (0..128).map(|_| rng.gen_range(0..2)).collect();
        rules.push(Box::new(move |x: &[f64]| {
            let r = vec_norm(x);
            let az = x[1].atan2(x[0]).rem_euclid(std::f64::consts::TAU);
            let pol = (x[2] / r).clamp(-1.0, 1.0).acos();
            let i = ((az / std::f64::consts::TAU * 16.0) as usize).min(15);
            let j = ((pol / std::f64::consts::PI * 8.0) as usize).min(7);
            table[i * 8 + j]
        }));
    }
    for rule in &rules {
        let xs = closed_loop_simulate(rule.as_ref(), &inst.set, &e, 100).unwrap();
        let growth = vec_norm(&xs[100]).powf(1.0 / 100.0);
        assert!(growth > 1.0);
        // the second component never decreases
        for w in xs.windows(2) {
            assert!(w[1][1] >= w[0][1]);
        }
    }
}

#[test]
fn scaled_identity_tables() {
    let half = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(2).scale(0.5)]).unwrap();
    let grid = AngularGrid::new(128).unwrap();
    let t = v_lambda(&half, 0.9, 20, &grid).unwrap();
    assert!(t.values.iter().all(|&v| v == 1.0));
    let t = v_hat(&half, 0.9, &grid, 10, 1e-12).unwrap();
    let r = decrease_ratio(&t, &half).unwrap();
    assert!(r.iter().all(|&x| (x - 0.5).abs() < 1e-15));
}
