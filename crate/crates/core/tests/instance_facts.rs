use num_rational::Rational64;
use switchstab_core::instances::{
    blockdiag_reduction, by_name, mortality_reduction, prop_different_3d, stanford_urbano_bar,
    stanford_urbano_bar_exact, INSTANCE_NAMES,
};
use switchstab_core::linalg::{vec_norm, word_matrix};
use switchstab_core::{Enumerator, Matrix, MatrixSet, Word};

#[test]
fn every_named_fact_holds() {
    for name in INSTANCE_NAMES {
        let inst = by_name::<f64>(name).unwrap();
        assert!(!inst.facts.is_empty());
        for (fact, ok) in inst.verify_facts().unwrap() {
            assert!(ok, "{name}: {}", fact.description);
        }
    }
    assert!(by_name::<f64>("nope").is_none());
}

#[test]
fn bar_pair_exact_relations() {
    let [a1, a2] = stanford_urbano_bar_exact();
    let id = Matrix::<Rational64>::identity(2);
    assert_eq!(a1.pow(4), id);
    assert_eq!(a2.mul(&a1).unwrap().mul(&a2).unwrap(), a1);
}

#[test]
fn bar_pair_has_no_off_axis_decay() {
    let set = stanford_urbano_bar::<f64>().set;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = f64::INFINITY;
    for t in 1..=14 {
        for e in Enumerator::exact().enumerate(&set, t).unwrap() {
            worst = worst.min(vec_norm(&e.matrix.mul_vec(&[s, s]).unwrap()));
        }
    }
    assert!(worst >= 0.5, "{worst}");
    for t in 1..=20 {
        let y = set.mode(1).pow(t).mul_vec(&[1.0, 0.0]).unwrap();
        assert_eq!(vec_norm(&y), 0.5f64.powi(t as i32));
    }
}

#[test]
fn three_dimensional_pair_never_decays_from_test_vector() {
    let inst = prop_different_3d::<f64>();
    let e = inst.test_vector.clone().unwrap();
    let (a, b) = (inst.set.mode(0), inst.set.mode(1));
    assert_eq!(b.mul_vec(&e).unwrap(), vec![2.0; 3]);
    for t in 1..=50 {
        assert_eq!(&b.mul(&a.pow(t)).unwrap(), b);
    }
    let mut worst = f64::INFINITY;
    for t in 1..=12 {
        for p in Enumerator::exact().enumerate(&inst.set, t).unwrap() {
            worst = worst.min(vec_norm(&p.matrix.mul_vec(&e).unwrap()).powf(1.0 / t as f64));
        }
    }
    assert!(worst >= 1.0 - 1e-9);
}

fn mortal_pair() -> MatrixSet<f64> {
    MatrixSet::from_matrices(vec![
        Matrix::from_rows([[0.0, 1.0], [0.0, 0.0]]),
        Matrix::from_rows([[0.0, 0.0], [1.0, 0.0]]),
    ])
    .unwrap()
}

fn unipotent_pair() -> MatrixSet<f64> {
    MatrixSet::from_matrices(vec![
        Matrix::from_rows([[1.0, 1.0], [0.0, 1.0]]),
        Matrix::from_rows([[1.0, 0.0], [1.0, 1.0]]),
    ])
    .unwrap()
}

#[test]
fn mortality_reduction_examples() {
    let w = Word::new(vec![0, 0]);
    let inst = mortality_reduction(&mortal_pair(), Some(&w)).unwrap();
    assert!(inst.verify_facts().unwrap().iter().all(|(_, ok)| *ok));
    let zero = Enumerator::exact()
        .enumerate(&inst.set, 2)
        .unwrap()
        .into_iter()
        .find(|e| e.matrix.as_slice().iter().all(|&x| x == 0.0))
        .unwrap();
    assert_eq!(zero.word, w);

    let id = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(2)]).unwrap();
    let inst = mortality_reduction(&id, None).unwrap();
    let e = inst.test_vector.clone().unwrap();
    for t in 1..=8 {
        for p in Enumerator::exact().enumerate(&inst.set, t).unwrap() {
            let n = vec_norm(&p.matrix.mul_vec(&e).unwrap());
            assert!((n - 2f64.powi(t as i32) * 2f64.sqrt()).abs() < 1e-12 * n);
        }
    }

    let inst = mortality_reduction(&unipotent_pair(), None).unwrap();
    assert!(inst.verify_facts().unwrap().iter().all(|(_, ok)| *ok));

    let bad = MatrixSet::from_matrices(vec![Matrix::from_rows([[0.5, 0.0], [0.0, 1.0]])]).unwrap();
    assert!(mortality_reduction(&bad, None).is_err());
    let neg = MatrixSet::from_matrices(vec![Matrix::from_rows([[-1.0, 0.0], [0.0, 1.0]])]).unwrap();
    assert!(mortality_reduction(&neg, None).is_err());
}

#[test]
fn blockdiag_reduction_examples() {
    let id = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(2)]).unwrap();
    let inst = blockdiag_reduction(&id, None).unwrap();
    assert_eq!(inst.set.mode(0), &Matrix::identity(4).scale(2.0));
    let v = inst.test_vector.clone().unwrap();
    assert_eq!(v, vec![1.0, 0.0, 0.0, 1.0]);
    for t in 1..=6usize {
        let p = inst.set.mode(0).pow(t as u32);
        assert_eq!(
            vec_norm(&p.mul_vec(&v).unwrap()),
            2f64.powi(t as i32) * 2f64.sqrt()
        );
    }

    let w = Word::new(vec![1, 1]);
    let inst = blockdiag_reduction(&mortal_pair(), Some(&w)).unwrap();
    assert!(word_matrix(&inst.set, &w)
        .unwrap()
        .as_slice()
        .iter()
        .all(|&x| x == 0.0));

    let signed = MatrixSet::from_matrices(vec![
        Matrix::from_rows([[1.0, -1.0], [0.0, 1.0]]),
        Matrix::from_rows([[1.0, 0.0], [1.0, 1.0]]),
    ])
    .unwrap();
    let inst = blockdiag_reduction(&signed, None).unwrap();
    assert!(inst.verify_facts().unwrap().iter().all(|(_, ok)| *ok));
}
