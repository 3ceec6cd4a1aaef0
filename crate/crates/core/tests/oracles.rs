//! Independent reference computations checked against the library.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use switchstab_core::bounds::{best_response_profile, cone_lower_bound, subradius_norm_upper};
use switchstab_core::ct_sim::{
    average_matrix, matrix_exponential, Choice, CtSystem, Schedule, Segment,
};
use switchstab_core::instances::{stanford_urbano, stanford_urbano_products};
use switchstab_core::linalg::{singular_values, spectral_norm, word_matrix};
use switchstab_core::lyapunov::{min_product_profile, AngularGrid};
use switchstab_core::{Enumerator, Matrix, Matrix64, MatrixSet};

fn random_matrix(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Matrix64 {
    Matrix::new(
        d,
        (0..d * d).map(|_| rng.gen_range(-scale..scale)).collect(),
    )
    .unwrap()
}

fn to_na(m: &Matrix64) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

#[test]
fn singular_values_match_symmetric_eigen() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3, 4] {
        for _ in 0..50 {
            let a = random_matrix(&mut rng, d, 2.0);
            let na = to_na(&a);
            let eig = SymmetricEigen::new(na.transpose() * &na);
            let mut expected: Vec<f64> =
                eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
            expected.sort_by(|x, y| y.total_cmp(x));
            let got = singular_values(&a);
            for (g, e) in got.iter().zip(&expected) {
                assert!(
                    (g - e).abs() < 1e-10 * expected[0].max(1.0),
                    "{got:?} vs {expected:?}"
                );
            }
        }
    }
}

#[test]
fn determinant_and_solve_match_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 4, 1.0);
        let b = random_matrix(&mut rng, 4, 1.0);
        let na = to_na(&a);
        assert!((a.determinant() - na.determinant()).abs() < 1e-12);
        let x = a.solve(&b).unwrap();
        let nx = na.lu().solve(&to_na(&b)).unwrap();
        assert!((to_na(&x) - nx).amax() < 1e-9);
    }
}

fn taylor_exp(a: &Matrix64, t: f64) -> Matrix64 {
    // scale by 2^s, sum 60 terms, square back
    let x = a.scale(t);
    let s = (x.norm_1().max(1.0).log2().ceil() as i32 + 1).max(0);
    let x = x.scale(2f64.powi(-s));
    let mut term = Matrix::identity(a.dim());
    let mut sum = term.clone();
    for k in 1..=60 {
        term = term.mul(&x).unwrap().scale(1.0 / k as f64);
        sum = sum.add(&term).unwrap();
    }
    for _ in 0..s {
        sum = sum.mul(&sum).unwrap();
    }
    sum
}

#[test]
fn exponential_matches_taylor_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let a = random_matrix(&mut rng, 3, 1.5);
        let e = matrix_exponential(&a, 0.7).unwrap();
        let o = taylor_exp(&a, 0.7);
        assert!(e.max_abs_diff(&o) < 1e-10 * spectral_norm(&o).max(1.0));
    }
}

#[test]
fn exponential_relative_accuracy_up_to_norm_ten() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 3, 1.0);
        let t = 10.0 / a.norm_1();
        let e = matrix_exponential(&a, t).unwrap();
        let o = taylor_exp(&a, t);
        let diff = e.add(&o.scale(-1.0)).unwrap();
        assert!(
            spectral_norm(&diff) <= 1e-12 * spectral_norm(&o),
            "{}",
            spectral_norm(&diff) / spectral_norm(&o)
        );
    }
}

#[test]
fn average_matrix_matches_riemann_sum() {
    let a = Matrix::from_rows([[1.0, -2.0], [0.5, 3.0]]);
    let b = Matrix::from_rows([[-1.0, 0.0], [4.0, 2.0]]);
    let sys = CtSystem::new(MatrixSet::from_matrices(vec![a.clone(), b.clone()]).unwrap());
    let sched = Schedule::new(vec![
        Segment {
            choice: Choice::Mode(0),
            duration: 1.0,
        },
        Segment {
            choice: Choice::Mode(1),
            duration: 3.0,
        },
    ])
    .unwrap();
    let n = 10_000;
    let h = 4.0 / n as f64;
    let mut sum = Matrix::zeros(2);
    for k in 0..n {
        let s = (k as f64 + 0.5) * h;
        sum = sum
            .add(&if s < 1.0 { a.clone() } else { b.clone() })
            .unwrap();
    }
    let riemann = sum.scale(1.0 / n as f64);
    let avg = average_matrix(&sys, &sched).unwrap();
    assert!(avg.max_abs_diff(&riemann) < 1e-9);
    assert!(avg.approx_eq(&a.add(&b.scale(3.0)).unwrap().scale(0.25), 1e-15));
}

#[test]
fn cone_bound_of_single_positive_matrix_is_perron_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..10 {
        let m = Matrix::<f64>::new(2, (0..4).map(|_| rng.gen_range(0.1..3.0)).collect()).unwrap();
        let (tr, det) = (m.trace(), m.determinant());
        let perron = (tr + (tr * tr - 4.0 * det).sqrt()) / 2.0;
        let set = MatrixSet::from_matrices(vec![m]).unwrap();
        let (r, cert) = cone_lower_bound(&set, 1, &Enumerator::default()).unwrap();
        assert!((r.best - perron).abs() < 1e-7, "{} vs {perron}", r.best);
        assert!(cert.residual >= -1e-9);
    }
}

#[test]
fn min_product_profile_matches_brute_force() {
    let su = stanford_urbano::<f64>().set;
    let grid = AngularGrid::new(512).unwrap();
    for t in 0..=5 {
        let profile = min_product_profile(&su, t, &grid).unwrap();
        let products = Enumerator::exact().enumerate(&su, t).unwrap();
        for (k, &p) in profile.iter().enumerate() {
            let a: f64 = grid.angle(k);
            let z = [a.cos(), a.sin()];
            let brute = products
                .iter()
                .map(|e| {
                    let y = e.matrix.mul_vec(&z).unwrap();
                    y[0].hypot(y[1])
                })
                .fold(f64::INFINITY, f64::min);
            assert!((p - brute).abs() < 2e-3, "t={t} node {k}: {p} vs {brute}");
        }
    }
}

#[test]
fn best_response_profile_matches_direct_evaluation() {
    let su = stanford_urbano::<f64>().set;
    let words = stanford_urbano_products();
    let angles: Vec<f64> = (0..64).map(|k| k as f64 * 0.049).collect();
    let f = best_response_profile(&su, &words, &angles).unwrap();
    for (a, v) in angles.iter().zip(f) {
        let direct = words
            .iter()
            .map(|w| {
                let y = word_matrix(&su, w)
                    .unwrap()
                    .mul_vec(&[a.cos(), a.sin()])
                    .unwrap();
                y[0].hypot(y[1]).powf(1.0 / w.len() as f64)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((v - direct).abs() < 1e-12);
    }
}

#[test]
fn subradius_bound_matches_exhaustive_norms() {
    let su = stanford_urbano::<f64>().set;
    let b = subradius_norm_upper(&su, 6, &Enumerator::exact()).unwrap();
    for (t, v) in b.per_horizon {
        let brute = Enumerator::exact()
            .enumerate(&su, t)
            .unwrap()
            .iter()
            .map(|e| {
                to_na(&e.matrix)
                    .singular_values()
                    .max()
                    .powf(1.0 / t as f64)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((v - brute).abs() < 1e-12, "t={t}: {v} vs {brute}");
    }
}
