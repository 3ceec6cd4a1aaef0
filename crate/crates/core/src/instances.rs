//! Built-in systems and reduction-based instance generators.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::linalg::{
    smallest_singular_value, spectral_norm, vec_norm, word_matrix, Enumerator, Matrix, MatrixSet,
    Word,
};
use crate::scalar::Scalar;

/// Checkable property attached to a [`NamedInstance`].
#[derive(Clone, Debug, PartialEq)]
pub enum FactId {
    /// Every mode has determinant ±1.
    UnitDeterminant,
    /// `‖A_i‖ = value`.
    ModeNorm { mode: usize, value: f64 },
    /// `σ_m(A_i) = value`.
    ModeMinSingularValue { mode: usize, value: f64 },
    /// `word_matrix(lhs) = word_matrix(rhs)`.
    WordIdentity { lhs: Word, rhs: Word },
    /// `word_matrix(lhs) = -word_matrix(rhs)`.
    WordNegatedIdentity { lhs: Word, rhs: Word },
    /// `A_i^t z = rate^t z`-style decay: `|A_i^t z| = rate^t |z|` for `t ≤ t_max`.
    AxisDecay {
        mode: usize,
        direction: Vec<f64>,
        rate: f64,
        t_max: usize,
    },
    /// `A_i v = factor · v` for the test vector.
    TestVectorEigen { mode: usize, factor: f64 },
    /// `A_b · A_a^t = A_b` for `1 ≤ t ≤ t_max`.
    AbsorbsPowers {
        absorber: usize,
        power_of: usize,
        t_max: usize,
    },
    /// The second state component never decreases along words from the test vector.
    SecondComponentMonotone { depth: usize },
    /// `word_matrix(word) = 0`.
    ZeroProduct { word: Word },
    /// `|A v| ≥ 2^t` for every product `A` of length `t ≤ t_max`, `v` the test vector.
    TestVectorGrowth { t_max: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub id: FactId,
    pub description: String,
}

impl Fact {
    fn new(id: FactId, description: &str) -> Self {
        Self {
            id,
            description: description.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedInstance<T> {
    pub name: String,
    pub set: MatrixSet<T>,
    pub facts: Vec<Fact>,
    pub test_vector: Option<Vec<T>>,
}

/// Absolute tolerance for identities involving √2/2.
pub const FACT_TOL: f64 = 1e-12;

impl<T: Scalar> NamedInstance<T> {
    /// Evaluates one fact against the instance.
    pub fn check(&self, fact: &Fact) -> Result<bool> {
        let tol = T::lit(FACT_TOL);
        let set = &self.set;
        Ok(match &fact.id {
            FactId::UnitDeterminant => set
                .modes()
                .iter()
                .all(|m| (m.determinant().abs() - T::one()).abs() <= tol),
            FactId::ModeNorm { mode, value } => {
                (spectral_norm(self.mode(*mode)?) - T::lit(*value)).abs() <= tol
            }
            FactId::ModeMinSingularValue { mode, value } => {
                (smallest_singular_value(self.mode(*mode)?) - T::lit(*value)).abs() <= tol
            }
            FactId::WordIdentity { lhs, rhs } => {
                word_matrix(set, lhs)?.approx_eq(&word_matrix(set, rhs)?, tol)
            }
            FactId::WordNegatedIdentity { lhs, rhs } => {
                word_matrix(set, lhs)?.approx_eq(&word_matrix(set, rhs)?.scale(-T::one()), tol)
            }
            FactId::AxisDecay {
                mode,
                direction,
                rate,
                t_max,
            } => {
                let a = self.mode(*mode)?;
                let mut z: Vec<T> = direction.iter().map(|&x| T::lit(x)).collect();
                let z0 = vec_norm(&z);
                (1..=*t_max).all(|t| {
                    z = a.mul_vec_unchecked(&z);
                    let expected = z0 * T::lit(rate.powi(t as i32));
                    (vec_norm(&z) - expected).abs() <= tol * expected.max(T::one())
                })
            }
            FactId::TestVectorEigen { mode, factor } => {
                let v = self.test_vector()?;
                let image = self.mode(*mode)?.mul_vec_unchecked(v);
                image
                    .iter()
                    .zip(v)
                    .all(|(&y, &x)| (y - T::lit(*factor) * x).abs() <= tol)
            }
            FactId::AbsorbsPowers {
                absorber,
                power_of,
                t_max,
            } => {
                let b = self.mode(*absorber)?;
                let a = self.mode(*power_of)?;
                let mut p = a.clone();
                (1..=*t_max).all(|_| {
                    let ok = b.mul_unchecked(&p) == *b;
                    p = p.mul_unchecked(a);
                    ok
                })
            }
            FactId::SecondComponentMonotone { depth } => {
                let v = self.test_vector()?;
                second_component_monotone(set, v.clone(), *depth)
            }
            FactId::ZeroProduct { word } => word_matrix(set, word)?
                .as_slice()
                .iter()
                .all(|&x| x == T::zero()),
            FactId::TestVectorGrowth { t_max } => {
                let v = self.test_vector()?;
                let levels = Enumerator::exact().enumerate_levels(set, *t_max)?;
                levels.iter().enumerate().all(|(i, level)| {
                    let bound = T::lit(2f64.powi(i as i32 + 1));
                    level
                        .iter()
                        .all(|e| vec_norm(&e.matrix.mul_vec_unchecked(v)) >= bound)
                })
            }
        })
    }

    /// Checks every attached fact.
    pub fn verify_facts(&self) -> Result<Vec<(Fact, bool)>> {
        self.facts
            .iter()
            .map(|f| Ok((f.clone(), self.check(f)?)))
            .collect()
    }

    fn mode(&self, i: usize) -> Result<&Matrix<T>> {
        self.set.modes().get(i).ok_or(Error::InvalidIndex {
            index: i,
            modes: self.set.len(),
        })
    }

    fn test_vector(&self) -> Result<&Vec<T>> {
        self.test_vector
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no test vector", self.name)))
    }
}

fn second_component_monotone<T: Scalar>(set: &MatrixSet<T>, x: Vec<T>, depth: usize) -> bool {
    if depth == 0 {
        return true;
    }
    set.modes().iter().all(|a| {
        let y = a.mul_vec_unchecked(&x);
        y[1] >= x[1] && second_component_monotone(set, y, depth - 1)
    })
}

/// `A1` is the rotation by π/4, `A2 = diag(1/2, 2)`.
pub fn stanford_urbano<T: Scalar>() -> NamedInstance<T> {
    let c = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let a1 = Matrix::from_rows([[c, c], [-c, c]]);
    let a2 = Matrix::diagonal(&[T::lit(0.5), T::lit(2.0)]);
    let set = MatrixSet::from_matrices(vec![a1, a2]).expect("valid built-in set");
    let facts = vec![
        Fact::new(FactId::UnitDeterminant, "det A1 = det A2 = 1"),
        Fact::new(
            FactId::ModeNorm {
                mode: 0,
                value: 1.0,
            },
            "‖A1‖ = 1",
        ),
        Fact::new(
            FactId::ModeMinSingularValue {
                mode: 1,
                value: 0.5,
            },
            "σ_m(A2) = 1/2",
        ),
        Fact::new(
            FactId::WordNegatedIdentity {
                lhs: Word::from_powers(&[(0, 4)]),
                rhs: Word::empty(),
            },
            "A1^4 = -Id",
        ),
        Fact::new(
            FactId::WordIdentity {
                lhs: Word::from_powers(&[(1, 1), (0, 2), (1, 1)]),
                rhs: Word::from_powers(&[(0, 2)]),
            },
            "A2 A1^2 A2 = A1^2",
        ),
    ];
    NamedInstance {
        name: "stanford-urbano".into(),
        set,
        facts,
        test_vector: None,
    }
}

/// The thirteen candidate products `A[1]..A[13]` used for the best-response
/// bound of the Stanford–Urbano system (mode 0 is `A1`, mode 1 is `A2`).
pub fn stanford_urbano_products() -> Vec<Word> {
    let (a1, a2) = (0, 1);
    [
        vec![(a2, 1)],
        vec![(a2, 1), (a1, 1)],
        vec![(a2, 1), (a1, 2)],
        vec![(a2, 1), (a1, 3)],
        vec![(a2, 1), (a1, 1), (a2, 1), (a1, 2)],
        vec![(a2, 1), (a1, 1), (a2, 1), (a1, 1), (a2, 1)],
        vec![(a2, 1), (a1, 1), (a2, 1), (a1, 1), (a2, 1), (a1, 1)],
        vec![(a2, 1), (a1, 1), (a2, 1), (a1, 3)],
        vec![(a2, 1), (a1, 3), (a2, 1), (a1, 2)],
        vec![(a2, 1), (a1, 1), (a2, 1), (a1, 1), (a2, 1), (a1, 2)],
        vec![(a2, 1), (a1, 3), (a2, 1), (a1, 3)],
        vec![(a2, 1), (a1, 1), (a2, 1), (a1, 1), (a2, 1), (a1, 3)],
        vec![
            (a2, 1),
            (a1, 1),
            (a2, 1),
            (a1, 1),
            (a2, 1),
            (a1, 1),
            (a2, 1),
            (a1, 2),
        ],
    ]
    .iter()
    .map(|f| Word::from_powers(f))
    .collect()
}

/// `Ā1 = A1²` (rotation by π/2) and `Ā2 = A2`.
pub fn stanford_urbano_bar<T: Scalar>() -> NamedInstance<T> {
    let [b1, b2] = stanford_urbano_bar_exact();
    let to_t = |m: &Matrix<Rational64>| m.map(|r| T::lit(*r.numer() as f64 / *r.denom() as f64));
    let set = MatrixSet::from_matrices(vec![to_t(&b1), to_t(&b2)]).expect("valid built-in set");
    let facts = vec![
        Fact::new(
            FactId::WordIdentity {
                lhs: Word::from_powers(&[(0, 4)]),
                rhs: Word::empty(),
            },
            "Ā1^4 = Id",
        ),
        Fact::new(
            FactId::WordIdentity {
                lhs: Word::new(vec![1, 0, 1]),
                rhs: Word::new(vec![0]),
            },
            "Ā2 Ā1 Ā2 = Ā1",
        ),
        Fact::new(
            FactId::AxisDecay {
                mode: 1,
                direction: vec![1.0, 0.0],
                rate: 0.5,
                t_max: 40,
            },
            "|Ā2^t e1| = 2^-t",
        ),
    ];
    NamedInstance {
        name: "stanford-urbano-bar".into(),
        set,
        facts,
        test_vector: None,
    }
}

/// Exact rational form of `{Ā1, Ā2}`.
pub fn stanford_urbano_bar_exact() -> [Matrix<Rational64>; 2] {
    let r = |n: i64, d: i64| Rational64::new(n, d);
    [
        Matrix::from_rows([[r(0, 1), r(1, 1)], [r(-1, 1), r(0, 1)]]),
        Matrix::from_rows([[r(1, 2), r(0, 1)], [r(0, 1), r(2, 1)]]),
    ]
}

/// `A = diag(2, 1, 1)` and `B` with every row `(0, 1, 1)`; test vector `e = (1, 1, 1)`.
pub fn prop_different_3d<T: Scalar>() -> NamedInstance<T> {
    let (z, o, t) = (T::zero(), T::one(), T::lit(2.0));
    let a = Matrix::diagonal(&[t, o, o]);
    let b = Matrix::from_rows([[z, o, o], [z, o, o], [z, o, o]]);
    let set = MatrixSet::new(vec![a, b], vec!["A".into(), "B".into()]).expect("valid built-in set");
    let facts = vec![
        Fact::new(
            FactId::TestVectorEigen {
                mode: 1,
                factor: 2.0,
            },
            "B e = 2e",
        ),
        Fact::new(
            FactId::AbsorbsPowers {
                absorber: 1,
                power_of: 0,
                t_max: 50,
            },
            "B A^t = B",
        ),
        Fact::new(
            FactId::SecondComponentMonotone { depth: 10 },
            "second component nondecreasing along trajectories from e",
        ),
    ];
    NamedInstance {
        name: "prop-different-3d".into(),
        set,
        facts,
        test_vector: Some(vec![o, o, o]),
    }
}

fn require_integer_entries<T: Scalar>(base: &MatrixSet<T>, nonnegative: bool) -> Result<()> {
    for (label, m) in base.labels().iter().zip(base.modes()) {
        for &x in m.as_slice() {
            if x.fract() != T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "{label} has non-integer entry {x}"
                )));
            }
            if nonnegative && x < T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "{label} has negative entry {x}"
                )));
            }
        }
    }
    Ok(())
}

/// `M' = {2A : A ∈ M}` for a nonnegative integer base set, with test vector
/// `e = (1, …, 1)`.
///
/// When `known_mortal` is given the instance records that its product
/// vanishes; otherwise the caller asserts the base is not mortal and the
/// growth inequality `|A'e| ≥ 2^t` is recorded.
pub fn mortality_reduction<T: Scalar>(
    base: &MatrixSet<T>,
    known_mortal: Option<&Word>,
) -> Result<NamedInstance<T>> {
    require_integer_entries(base, true)?;
    let set = base.scaled(T::lit(2.0));
    let fact = match known_mortal {
        Some(w) => Fact::new(
            FactId::ZeroProduct { word: w.clone() },
            "mortal word gives 0",
        ),
        None => Fact::new(FactId::TestVectorGrowth { t_max: 8 }, "|A'e| ≥ 2^t"),
    };
    Ok(NamedInstance {
        name: "mortality-reduction".into(),
        test_vector: Some(vec![T::one(); set.dim()]),
        set,
        facts: vec![fact],
    })
}

/// `M' = {diag(2A, …, 2A)}` (n copies for an n×n base) with test vector
/// `v = (e1, …, en)`.
pub fn blockdiag_reduction<T: Scalar>(
    base: &MatrixSet<T>,
    known_mortal: Option<&Word>,
) -> Result<NamedInstance<T>> {
    require_integer_entries(base, false)?;
    let n = base.dim();
    let big = n * n;
    let modes = base
        .modes()
        .iter()
        .map(|a| {
            let mut m = Matrix::zeros(big);
            for block in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        m[(block * n + i, block * n + j)] = T::lit(2.0) * a[(i, j)];
                    }
                }
            }
            m
        })
        .collect();
    let set = MatrixSet::new(modes, base.labels().to_vec())?;
    let mut v = vec![T::zero(); big];
    for block in 0..n {
        v[block * n + block] = T::one();
    }
    let fact = match known_mortal {
        Some(w) => Fact::new(
            FactId::ZeroProduct { word: w.clone() },
            "mortal word gives 0",
        ),
        None => Fact::new(FactId::TestVectorGrowth { t_max: 6 }, "|A'v| ≥ 2^t"),
    };
    Ok(NamedInstance {
        name: "blockdiag-reduction".into(),
        set,
        facts: vec![fact],
        test_vector: Some(v),
    })
}

/// Looks up a built-in instance by its CLI name.
pub fn by_name<T: Scalar>(name: &str) -> Option<NamedInstance<T>> {
    match name {
        "stanford-urbano" => Some(stanford_urbano()),
        "stanford-urbano-bar" => Some(stanford_urbano_bar()),
        "prop-different-3d" => Some(prop_different_3d()),
        _ => None,
    }
}

pub const INSTANCE_NAMES: [&str; 3] = [
    "stanford-urbano",
    "stanford-urbano-bar",
    "prop-different-3d",
];
