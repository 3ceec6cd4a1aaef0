//! Small dense matrices, singular values and product enumeration.
//!
//! Matrices are stored row-major. Ring operations (products, powers) only need
//! `Copy + Num`, so the same type carries exact integer matrices; numerical
//! routines (singular values, solves) require [`Scalar`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Entrywise tolerance used when merging coinciding products.
pub const DEFAULT_DEDUP_TOL: f64 = 1e-10;

/// Maximum number of undeduplicated products an enumeration may touch.
pub const DEFAULT_PRODUCT_CAP: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Copy + Num> Matrix<T> {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {dim}x{dim} matrix, found {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[T; N]; N]) -> Self {
        assert!(N > 0, "empty matrix");
        Self {
            dim: N,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be at least 1");
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let d = self.dim;
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] = out[i * d + j] + a * rhs.data[k * d + j];
                }
            }
        }
        Self { dim: d, data: out }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j];
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.mul_vec_unchecked(x))
    }

    pub(crate) fn mul_vec_unchecked(&self, x: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn map<U: Copy + Num>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl<T: Copy + Num + Signed + PartialOrd> Matrix<T> {
    /// Maximal entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }
}

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix and rejects non-finite entries.
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        let m = Self::from_vec(dim, data)?;
        if let Some(pos) = m.data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                pos / dim,
                pos % dim
            )));
        }
        Ok(m)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= T::zero())
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn determinant(&self) -> T {
        match self.dim {
            1 => self.data[0],
            2 => self.data[0] * self.data[3] - self.data[1] * self.data[2],
            _ => match lu_decompose(self) {
                Some((lu, _, sign)) => (0..self.dim).fold(sign, |acc, i| acc * lu[(i, i)]),
                None => T::zero(),
            },
        }
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let d = self.dim;
        let (lu, perm, _) = lu_decompose(self).ok_or(Error::Singular)?;
        let mut out = Self::zeros(d);
        for col in 0..d {
            let mut y: Vec<T> = (0..d).map(|i| rhs[(perm[i], col)]).collect();
            for i in 0..d {
                for k in 0..i {
                    let l = lu[(i, k)];
                    let yk = y[k];
                    y[i] -= l * yk;
                }
            }
            for i in (0..d).rev() {
                for k in i + 1..d {
                    let u = lu[(i, k)];
                    let yk = y[k];
                    y[i] -= u * yk;
                }
                y[i] /= lu[(i, i)];
            }
            for i in 0..d {
                out[(i, col)] = y[i];
            }
        }
        Ok(out)
    }
}

fn lu_decompose<T: Scalar>(a: &Matrix<T>) -> Option<(Matrix<T>, Vec<usize>, T)> {
    let d = a.dim;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut sign = T::one();
    for k in 0..d {
        let pivot = (k..d)
            .max_by(|&i, &j| lu[(i, k)].abs().partial_cmp(&lu[(j, k)].abs()).unwrap())
            .unwrap();
        if lu[(pivot, k)] == T::zero() {
            return None;
        }
        if pivot != k {
            for j in 0..d {
                lu.data.swap(k * d + j, pivot * d + j);
            }
            perm.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..d {
            let f = lu[(i, k)] / lu[(k, k)];
            lu[(i, k)] = f;
            for j in k + 1..d {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
        }
    }
    Some((lu, perm, sign))
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.dim).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Checked product `a · b`.
pub fn multiply<T: Copy + Num>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.mul(b)
}

/// Euclidean norm of a vector.
pub fn vec_norm<T: Scalar>(x: &[T]) -> T {
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    scale
        * x.iter()
            .map(|&v| (v / scale) * (v / scale))
            .sum::<T>()
            .sqrt()
}

/// `|a x|` for a unit direction `(cos θ, sin θ)` in the plane.
#[inline]
pub(crate) fn image_2d<T: Scalar>(a: &Matrix<T>, c: T, s: T) -> (T, T) {
    let d = a.as_slice();
    (d[0] * c + d[1] * s, d[2] * c + d[3] * s)
}

/// Singular values in decreasing order.
///
/// The 2×2 case is closed form; larger matrices use one-sided Jacobi
/// rotations, which diagonalise `aᵀa` implicitly.
pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    match a.dim {
        1 => vec![a.data[0].abs()],
        2 => {
            let [p, q, r, s] = [a.data[0], a.data[1], a.data[2], a.data[3]];
            let s1 = (p + s).hypot(r - q);
            let s2 = (p - s).hypot(r + q);
            let max = (s1 + s2) / T::lit(2.0);
            // |det| / σ_max keeps relative accuracy when σ_min is tiny
            let min = if max > T::zero() {
                (p * s - q * r).abs() / max
            } else {
                T::zero()
            };
            vec![max, min.min(max)]
        }
        _ => jacobi_singular_values(a),
    }
}

fn jacobi_singular_values<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    let d = a.dim;
    // columns of a, rotated in place until mutually orthogonal
    let mut cols: Vec<Vec<T>> = (0..d)
        .map(|j| (0..d).map(|i| a[(i, j)]).collect())
        .collect();
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let alpha: T = cols[p].iter().map(|&x| x * x).sum();
                let beta: T = cols[q].iter().map(|&x| x * x).sum();
                let gamma: T = cols[p].iter().zip(&cols[q]).map(|(&x, &y)| x * y).sum();
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (head, tail) = cols.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (u, v) = (*x, *y);
                    *x = c * u - s * v;
                    *y = s * u + c * v;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = cols.iter().map(|c| vec_norm(c)).collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// `σ_m(a) = min_{|x|=1} |a x|`.
pub fn smallest_singular_value<T: Scalar>(a: &Matrix<T>) -> T {
    *singular_values(a).last().unwrap()
}

/// Operator 2-norm.
pub fn spectral_norm<T: Scalar>(a: &Matrix<T>) -> T {
    singular_values(a)[0]
}

/// A finite switching sequence. `word[0]` is applied last, so the word
/// `[i, j]` denotes the product `A_i · A_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(modes: Vec<usize>) -> Self {
        Word(modes)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from `(mode, power)` factors written left to right, so
    /// `[(1, 1), (0, 2)]` is `A_1 · A_0²`.
    pub fn from_powers(factors: &[(usize, usize)]) -> Self {
        Word(
            factors
                .iter()
                .flat_map(|&(m, p)| std::iter::repeat_n(m, p))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn modes(&self) -> &[usize] {
        &self.0
    }

    /// Shortest first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }

    /// Renders the word with the set's labels, grouping repeated factors.
    pub fn display_with(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "Id".into();
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let m = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == m {
                j += 1;
            }
            let label = labels.get(m).cloned().unwrap_or_else(|| format!("#{m}"));
            if j - i > 1 {
                out.push(format!("{label}^{}", j - i));
            } else {
                out.push(label);
            }
            i = j;
        }
        out.join("·")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| (m + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Finite set of labelled square matrices sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet<T> {
    dim: usize,
    modes: Vec<Matrix<T>>,
    labels: Vec<String>,
}

impl<T: Scalar> MatrixSet<T> {
    pub fn new(modes: Vec<Matrix<T>>, labels: Vec<String>) -> Result<Self> {
        let first = modes
            .first()
            .ok_or_else(|| Error::InvalidSet("a matrix set needs at least one mode".into()))?;
        let dim = first.dim();
        if let Some(m) = modes.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
        if let Some(m) = modes.iter().find(|m| m.data.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidMatrix(format!("non-finite entry in {m:?}")));
        }
        if labels.len() != modes.len() {
            return Err(Error::InvalidSet(format!(
                "{} labels for {} matrices",
                labels.len(),
                modes.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidSet(format!("duplicate label {l:?}")));
            }
        }
        Ok(Self { dim, modes, labels })
    }

    /// Labels the modes `A1, A2, …`.
    pub fn from_matrices(modes: Vec<Matrix<T>>) -> Result<Self> {
        let labels = (1..=modes.len()).map(|i| format!("A{i}")).collect();
        Self::new(modes, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Matrix<T>] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> &Matrix<T> {
        &self.modes[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The set `{γ A : A ∈ M}`.
    pub fn scaled(&self, gamma: T) -> Self {
        Self {
            dim: self.dim,
            modes: self.modes.iter().map(|m| m.scale(gamma)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.modes.iter().all(Matrix::is_nonnegative)
    }

    pub(crate) fn require_dim(&self, d: usize) -> Result<()> {
        if self.dim == d {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension(self.dim))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductEntry<T> {
    pub word: Word,
    pub matrix: Matrix<T>,
}

impl<T> ProductEntry<T> {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Ordered product of the word's modes; the empty word gives the identity.
///
/// Accumulates from the right, matching [`Enumerator`] bit for bit.
pub fn word_matrix<T: Scalar>(set: &MatrixSet<T>, w: &Word) -> Result<Matrix<T>> {
    let mut acc = Matrix::identity(set.dim);
    for &m in w.modes().iter().rev() {
        let a = set.modes.get(m).ok_or(Error::InvalidIndex {
            index: m,
            modes: set.len(),
        })?;
        acc = a.mul_unchecked(&acc);
    }
    Ok(acc)
}

/// Enumeration policy for `M^t`: deduplication tolerance and a guard on the
/// number of undeduplicated products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enumerator {
    pub dedup_tol: f64,
    pub cap: u64,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self {
            dedup_tol: DEFAULT_DEDUP_TOL,
            cap: DEFAULT_PRODUCT_CAP,
        }
    }
}

impl Enumerator {
    pub fn exact() -> Self {
        Self {
            dedup_tol: 0.0,
            ..Self::default()
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    fn check_cap(&self, modes: usize, t: usize) -> Result<()> {
        let count = (modes as u128)
            .checked_pow(t.try_into().unwrap_or(u32::MAX))
            .unwrap_or(u128::MAX);
        if count > self.cap as u128 {
            return Err(Error::HorizonTooLarge {
                horizon: t,
                count,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// All products of length `t` in lexicographic word order.
    pub fn enumerate<T: Scalar>(
        &self,
        set: &MatrixSet<T>,
        t: usize,
    ) -> Result<Vec<ProductEntry<T>>> {
        self.check_cap(set.len(), t)?;
        let mut level = vec![ProductEntry {
            word: Word::empty(),
            matrix: Matrix::identity(set.dim),
        }];
        for _ in 0..t {
            level = self.extend(set, &level);
        }
        Ok(level)
    }

    /// Levels `M^1, …, M^t_max`.
    pub fn enumerate_levels<T: Scalar>(
        &self,
        set: &MatrixSet<T>,
        t_max: usize,
    ) -> Result<Vec<Vec<ProductEntry<T>>>> {
        self.check_cap(set.len(), t_max)?;
        let mut levels = Vec::with_capacity(t_max);
        let mut level = vec![ProductEntry {
            word: Word::empty(),
            matrix: Matrix::identity(set.dim),
        }];
        for _ in 0..t_max {
            level = self.extend(set, &level);
            levels.push(level.clone());
        }
        Ok(levels)
    }

    // Prepending a mode keeps lexicographic order when the outer loop runs
    // over modes; dropping a duplicate at level t-1 never loses a
    // lexicographically smaller representative at level t.
    fn extend<T: Scalar>(
        &self,
        set: &MatrixSet<T>,
        prev: &[ProductEntry<T>],
    ) -> Vec<ProductEntry<T>> {
        let mut next = Vec::with_capacity(prev.len() * set.len());
        for (i, a) in set.modes.iter().enumerate() {
            for e in prev {
                let mut w = Vec::with_capacity(e.word.len() + 1);
                w.push(i);
                w.extend_from_slice(e.word.modes());
                next.push(ProductEntry {
                    word: Word(w),
                    matrix: a.mul_unchecked(&e.matrix),
                });
            }
        }
        if self.dedup_tol > 0.0 {
            dedup(next, self.dedup_tol)
        } else {
            next
        }
    }
}

fn dedup<T: Scalar>(entries: Vec<ProductEntry<T>>, tol: f64) -> Vec<ProductEntry<T>> {
    let mut buckets: HashMap<i64, Vec<usize>> = HashMap::new();
    let mut kept: Vec<ProductEntry<T>> = Vec::with_capacity(entries.len());
    let tol_t = T::lit(tol);
    for e in entries {
        let key = (e.matrix.data[0].as_f64() / tol).floor().clamp(-9e18, 9e18) as i64;
        let dup = (key.saturating_sub(1)..=key.saturating_add(1)).any(|k| {
            buckets.get(&k).is_some_and(|idx| {
                idx.iter()
                    .any(|&j| kept[j].matrix.max_abs_diff(&e.matrix) <= tol_t)
            })
        });
        if !dup {
            buckets.entry(key).or_default().push(kept.len());
            kept.push(e);
        }
    }
    kept
}

/// All length-`t` products, merged within `dedup_tol` (0 disables merging),
/// guarded by [`DEFAULT_PRODUCT_CAP`].
pub fn enumerate_products<T: Scalar>(
    set: &MatrixSet<T>,
    t: usize,
    dedup_tol: f64,
) -> Result<Vec<ProductEntry<T>>> {
    Enumerator {
        dedup_tol,
        cap: DEFAULT_PRODUCT_CAP,
    }
    .enumerate(set, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::stanford_urbano;

    fn su() -> MatrixSet<f64> {
        stanford_urbano::<f64>().set
    }

    #[test]
    fn identity_is_neutral() {
        let a = su().mode(0).clone();
        assert_eq!(multiply(&Matrix::identity(2), &a).unwrap(), a);
    }

    #[test]
    fn a2_squared_is_diagonal() {
        let a2 = su().mode(1).clone();
        let p = multiply(&a2, &a2).unwrap();
        assert_eq!(p, Matrix::diagonal(&[0.25, 4.0]));
    }

    #[test]
    fn a1_eighth_power_is_identity() {
        let a1 = su().mode(0).clone();
        assert!(a1.pow(8).approx_eq(&Matrix::identity(2), 1e-12));
    }

    #[test]
    fn multiply_rejects_mismatched_dims() {
        let a = Matrix::<f64>::identity(2);
        let b = Matrix::<f64>::identity(3);
        assert_eq!(
            multiply(&a, &b),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(Matrix::<f64>::new(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(Matrix::<f64>::new(2, vec![1.0, f64::NAN, 0.0, 1.0]).is_err());
        assert!(Matrix::<f64>::new(0, vec![]).is_err());
        let a = Matrix::<f64>::identity(2);
        let labels = vec!["x".to_string(), "x".to_string()];
        assert!(MatrixSet::new(vec![a.clone(), a.clone()], labels).is_err());
        assert!(
            MatrixSet::new(vec![a, Matrix::identity(3)], vec!["a".into(), "b".into()]).is_err()
        );
        assert!(MatrixSet::<f64>::from_matrices(vec![]).is_err());
    }

    #[test]
    fn singular_values_of_simple_matrices() {
        let a2 = Matrix::diagonal(&[0.5, 2.0]);
        assert_eq!(smallest_singular_value(&a2), 0.5);
        assert_eq!(spectral_norm(&a2), 2.0);
        for d in 1..5 {
            let id = Matrix::<f64>::identity(d);
            assert!((smallest_singular_value(&id) - 1.0).abs() < 1e-14);
        }
        assert_eq!(spectral_norm(&Matrix::<f64>::zeros(2)), 0.0);
        assert_eq!(spectral_norm(&Matrix::<f64>::zeros(3)), 0.0);
        assert!((spectral_norm(su().mode(0)) - 1.0).abs() < 1e-15);
        let singular = Matrix::from_rows([[1.0, 2.0], [2.0, 4.0]]);
        assert!(smallest_singular_value(&singular).abs() < 1e-15);
    }

    #[test]
    fn three_by_three_diagonal_singular_values() {
        let a = Matrix::diagonal(&[-3.0, 0.25, 2.0]);
        let sv = singular_values(&a);
        assert!((sv[0] - 3.0).abs() < 1e-14);
        assert!((sv[1] - 2.0).abs() < 1e-14);
        assert!((sv[2] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn enumeration_counts() {
        let set = su();
        assert_eq!(enumerate_products(&set, 3, 0.0).unwrap().len(), 8);
        assert_eq!(enumerate_products(&set, 0, 0.0).unwrap().len(), 1);
        let single = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(2)]).unwrap();
        assert_eq!(enumerate_products(&single, 5, 0.0).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let words: Vec<Word> = enumerate_products(&su(), 4, 0.0)
            .unwrap()
            .into_iter()
            .map(|e| e.word)
            .collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
    }

    #[test]
    fn dedup_keeps_smallest_word() {
        let set = su();
        let entries = enumerate_products(&set, 8, 1e-10).unwrap();
        assert!(entries.len() < 256);
        // A2 A1^2 A2 = A1^2 collapses; the representative of each class must
        // be the first word in lexicographic order producing that matrix
        let full = enumerate_products(&set, 8, 0.0).unwrap();
        for e in &entries {
            let first = full
                .iter()
                .find(|f| f.matrix.approx_eq(&e.matrix, 1e-10))
                .unwrap();
            assert_eq!(first.word, e.word);
        }
    }

    #[test]
    fn cap_guard() {
        let set = su();
        let e = Enumerator::exact().with_cap(100);
        assert!(matches!(
            e.enumerate(&set, 7),
            Err(Error::HorizonTooLarge {
                horizon: 7,
                count: 128,
                cap: 100
            })
        ));
        assert!(e.enumerate(&set, 6).is_ok());
        assert!(Enumerator::default().enumerate(&set, 200).is_err());
    }

    #[test]
    fn word_matrix_cases() {
        let set = su();
        assert_eq!(
            word_matrix(&set, &Word::empty()).unwrap(),
            Matrix::identity(2)
        );
        assert_eq!(
            &word_matrix(&set, &Word::new(vec![1])).unwrap(),
            set.mode(1)
        );
        assert!(matches!(
            word_matrix(&set, &Word::new(vec![2])),
            Err(Error::InvalidIndex { index: 2, modes: 2 })
        ));
        // A[13] = A2 A1 A2 A1 A2 A1 A2 A1^2, checked against step-by-step products
        let w = Word::from_powers(&[
            (1, 1),
            (0, 1),
            (1, 1),
            (0, 1),
            (1, 1),
            (0, 1),
            (1, 1),
            (0, 2),
        ]);
        assert_eq!(w.len(), 9);
        let (a1, a2) = (set.mode(0), set.mode(1));
        let mut oracle = a1.clone();
        for m in [a1, a2, a1, a2, a1, a2, a1, a2] {
            oracle = m.mul(&oracle).unwrap();
        }
        assert!(word_matrix(&set, &w).unwrap().approx_eq(&oracle, 1e-12));
    }

    #[test]
    fn word_rendering() {
        let set = su();
        let w = Word::from_powers(&[(1, 1), (0, 3)]);
        assert_eq!(w.display_with(set.labels()), "A2·A1^3");
        assert_eq!(w.to_string(), "[2,1,1,1]");
        assert_eq!(Word::empty().display_with(set.labels()), "Id");
    }

    #[test]
    fn solve_and_determinant() {
        let a = Matrix::from_rows([[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]]);
        let inv = a.solve(&Matrix::identity(3)).unwrap();
        assert!(a.mul(&inv).unwrap().approx_eq(&Matrix::identity(3), 1e-14));
        assert!((a.determinant() - 18.0).abs() < 1e-12);
        let s = Matrix::from_rows([[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(s.solve(&Matrix::identity(2)), Err(Error::Singular));
    }

    #[test]
    fn unit_determinant_of_stanford_urbano_products() {
        let set = su();
        for t in 0..=10 {
            for e in enumerate_products(&set, t, 0.0).unwrap() {
                assert!((e.matrix.determinant().abs() - 1.0).abs() < 1e-9);
            }
        }
    }
}
