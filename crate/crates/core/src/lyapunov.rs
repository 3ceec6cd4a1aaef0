//! Control-Lyapunov functions on an angular grid (planar systems only).
//!
//! A positively homogeneous function is stored by its values on the lines
//! `θ_k = πk/n`, `k < n`, and read back by piecewise-linear interpolation
//! in angle with `θ + π ≡ θ`. For a mode `A` the value at `A z` is
//! `|A z| · W(angle(A z))`.
//!
//! * `V_λ(x) = sup_t inf_σ |x_σ(t)| / λ^t` is built from the profiles
//!   `g_t(θ) = min_{A ∈ M^t} |A z_θ|` computed by dynamic programming.
//! * `V̂_λ(x) = inf_σ sup_t |x_σ(t)| / λ^t` is the fixed point of
//!   `(TW)(θ) = max(1, min_A |A z_θ| W(angle(A z_θ)) / λ)` iterated from
//!   `W ≡ 1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{image_2d, vec_norm, MatrixSet};
use crate::scalar::{from_usize, Scalar};
use crate::switching::SwitchingRule;

/// Values above this are treated as divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Relative slack below which a decrease ratio is not counted as exceeding λ.
pub const RATIO_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngularGrid {
    n: usize,
}

impl AngularGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidArgument(format!(
                "angular grid needs at least 8 nodes, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing<T: Scalar>(&self) -> T {
        T::PI() / from_usize(self.n)
    }

    pub fn angle<T: Scalar>(&self, k: usize) -> T {
        T::PI() * from_usize(k) / from_usize(self.n)
    }

    pub fn angles<T: Scalar>(&self) -> Vec<T> {
        (0..self.n).map(|k| self.angle(k)).collect()
    }

    /// Midpoints between consecutive nodes.
    pub fn midpoints<T: Scalar>(&self) -> Vec<T> {
        let half = self.spacing::<T>() / T::lit(2.0);
        (0..self.n).map(|k| self.angle::<T>(k) + half).collect()
    }

    /// Lower node index and interpolation weight of an angle.
    pub fn locate<T: Scalar>(&self, angle: T) -> (usize, T) {
        let pos = Scalar::rem_euclid(angle, T::PI()) / self.spacing::<T>();
        let floor = pos.floor();
        let k = floor.to_usize().unwrap_or(0) % self.n;
        (k, pos - floor)
    }

    fn interpolate<T: Scalar>(&self, values: &[T], (k, f): (usize, T)) -> T {
        let next = values[(k + 1) % self.n];
        values[k] + f * (next - values[k])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    VLambda,
    VHat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable<T> {
    pub grid: AngularGrid,
    pub values: Vec<T>,
    pub lambda: T,
    pub kind: ValueKind,
    /// Last sup-norm increment (`v_hat`) or truncation increment (`v_lambda`).
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> ValueTable<T> {
    /// Interpolated value on the unit direction at `angle`.
    pub fn at_angle(&self, angle: T) -> T {
        self.grid.interpolate(&self.values, self.grid.locate(angle))
    }

    /// Homogeneous extension `V(x) = |x| · W(angle(x))`.
    pub fn eval(&self, x: [T; 2]) -> T {
        let r = x[0].hypot(x[1]);
        if r == T::zero() {
            return T::zero();
        }
        r * self.at_angle(x[1].atan2(x[0]))
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

#[derive(Clone, Copy)]
struct Image<T> {
    norm: T,
    node: usize,
    frac: T,
}

// image of every node under every mode
fn node_images<T: Scalar>(set: &MatrixSet<T>, grid: &AngularGrid) -> Vec<Vec<Image<T>>> {
    set.modes()
        .iter()
        .map(|a| {
            (0..grid.len())
                .into_par_iter()
                .map(|k| image_of(a, grid, grid.angle(k)))
                .collect()
        })
        .collect()
}

fn image_of<T: Scalar>(a: &crate::linalg::Matrix<T>, grid: &AngularGrid, angle: T) -> Image<T> {
    let (x, y) = image_2d(a, angle.cos(), angle.sin());
    let (node, frac) = grid.locate(y.atan2(x));
    Image {
        norm: x.hypot(y),
        node,
        frac,
    }
}

fn lookup<T: Scalar>(grid: &AngularGrid, values: &[T], img: &Image<T>) -> T {
    if img.norm == T::zero() {
        return T::zero();
    }
    img.norm * grid.interpolate(values, (img.node, img.frac))
}

// min over modes of |A z| W(angle(A z)) at node k, with the minimizing mode
fn best_mode<T: Scalar>(
    grid: &AngularGrid,
    images: &[Vec<Image<T>>],
    values: &[T],
    k: usize,
) -> (T, usize) {
    let mut best = (T::infinity(), 0);
    for (i, imgs) in images.iter().enumerate() {
        let v = lookup(grid, values, &imgs[k]);
        if v < best.0 {
            best = (v, i);
        }
    }
    best
}

fn one_step<T: Scalar>(grid: &AngularGrid, images: &[Vec<Image<T>>], values: &[T]) -> Vec<T> {
    (0..grid.len())
        .into_par_iter()
        .map(|k| best_mode(grid, images, values, k).0)
        .collect()
}

/// `g_t(θ) ≈ min_{A ∈ M^t} |A z_θ|` via `g_{t+1}(θ) = min_A |A z_θ| ĝ_t(angle(A z_θ))`.
pub fn min_product_profile<T: Scalar>(
    set: &MatrixSet<T>,
    t: usize,
    grid: &AngularGrid,
) -> Result<Vec<T>> {
    set.require_dim(2)?;
    let images = node_images(set, grid);
    let mut g = vec![T::one(); grid.len()];
    for _ in 0..t {
        g = one_step(grid, &images, &g);
    }
    Ok(g)
}

/// Truncated `V_λ`: `max_{0 ≤ t ≤ horizon} g_t / λ^t` at every node.
pub fn v_lambda<T: Scalar>(
    set: &MatrixSet<T>,
    lambda: T,
    horizon: usize,
    grid: &AngularGrid,
) -> Result<ValueTable<T>> {
    set.require_dim(2)?;
    check_lambda(lambda)?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let images = node_images(set, grid);
    let threshold = T::lit(DIVERGENCE_THRESHOLD);
    let mut g = vec![T::one(); grid.len()];
    let mut values = g.clone();
    let mut residual = T::zero();
    let mut discount = T::one();
    for t in 1..=horizon {
        g = one_step(grid, &images, &g);
        discount *= lambda;
        let term: Vec<T> = g.iter().map(|&x| x / discount).collect();
        if let Some(k) = term.iter().position(|&x| x > threshold) {
            return Err(Error::Overflow(format!(
                "g_{t}/λ^{t} exceeds {DIVERGENCE_THRESHOLD:e} at node {k}; λ = {lambda} is likely below the stabilization radius"
            )));
        }
        if t == horizon {
            residual = term
                .iter()
                .zip(&values)
                .map(|(&x, &v)| (x - v).max(T::zero()))
                .fold(T::zero(), T::max);
        }
        for (v, x) in values.iter_mut().zip(term) {
            *v = v.max(x);
        }
    }
    Ok(ValueTable {
        grid: *grid,
        values,
        lambda,
        kind: ValueKind::VLambda,
        residual,
        iterations: horizon,
        converged: true,
    })
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "lambda must be positive, got {lambda}"
        )))
    }
}

/// One synchronous sweep of `(TW)(θ) = max(1, min_A |A z_θ| W(angle(A z_θ)) / λ)`.
pub fn bellman_operator<T: Scalar>(
    set: &MatrixSet<T>,
    grid: &AngularGrid,
    lambda: T,
    values: &[T],
) -> Result<Vec<T>> {
    set.require_dim(2)?;
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: values.len(),
        });
    }
    let images = node_images(set, grid);
    Ok(bellman(grid, &images, lambda, values))
}

fn bellman<T: Scalar>(
    grid: &AngularGrid,
    images: &[Vec<Image<T>>],
    lambda: T,
    values: &[T],
) -> Vec<T> {
    one_step(grid, images, values)
        .into_iter()
        .map(|x| (x / lambda).max(T::one()))
        .collect()
}

/// Fixed point of the Bellman operator from `W ≡ 1`, stopped when the
/// sup-norm increment is at most `tol` or after `max_iter` sweeps.
pub fn v_hat<T: Scalar>(
    set: &MatrixSet<T>,
    lambda: T,
    grid: &AngularGrid,
    max_iter: usize,
    tol: T,
) -> Result<ValueTable<T>> {
    set.require_dim(2)?;
    check_lambda(lambda)?;
    let images = node_images(set, grid);
    let threshold = T::lit(DIVERGENCE_THRESHOLD);
    let mut values = vec![T::one(); grid.len()];
    let mut residual = T::infinity();
    let mut iterations = 0;
    while iterations < max_iter {
        let next = bellman(grid, &images, lambda, &values);
        iterations += 1;
        residual = next
            .iter()
            .zip(&values)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        values = next;
        if values.iter().any(|&v| v > threshold) {
            return Err(Error::NotCertifiable(format!(
                "value iteration at λ = {lambda} exceeded {DIVERGENCE_THRESHOLD:e} after {iterations} sweeps"
            )));
        }
        if residual <= tol {
            break;
        }
    }
    Ok(ValueTable {
        grid: *grid,
        values,
        lambda,
        kind: ValueKind::VHat,
        residual,
        iterations,
        converged: residual <= tol,
    })
}

/// `r(θ) = min_A V(A z_θ) / V(z_θ)` at every node.
pub fn decrease_ratio<T: Scalar>(table: &ValueTable<T>, set: &MatrixSet<T>) -> Result<Vec<T>> {
    set.require_dim(2)?;
    let grid = &table.grid;
    let images = node_images(set, grid);
    Ok((0..grid.len())
        .into_par_iter()
        .map(|k| best_mode(grid, &images, &table.values, k).0 / table.values[k])
        .collect())
}

/// Decrease ratio at arbitrary angles, with `V(z)` itself interpolated.
pub fn decrease_ratio_at<T: Scalar>(
    table: &ValueTable<T>,
    set: &MatrixSet<T>,
    angles: &[T],
) -> Result<Vec<T>> {
    set.require_dim(2)?;
    Ok(angles
        .par_iter()
        .map(|&a| {
            (0..set.len())
                .map(|i| mode_ratio(table, set, i, a))
                .fold(T::infinity(), T::min)
        })
        .collect())
}

fn mode_ratio<T: Scalar>(table: &ValueTable<T>, set: &MatrixSet<T>, mode: usize, angle: T) -> T {
    let img = image_of(set.mode(mode), &table.grid, angle);
    lookup(&table.grid, &table.values, &img) / table.at_angle(angle)
}

/// Fraction of ratios above `lambda · (1 + RATIO_SLACK)`.
pub fn exceedance_fraction<T: Scalar>(ratios: &[T], lambda: T) -> f64 {
    if ratios.is_empty() {
        return 0.0;
    }
    let limit = lambda * (T::one() + T::lit(RATIO_SLACK));
    ratios.iter().filter(|&&r| r > limit).count() as f64 / ratios.len() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackArc<T> {
    pub start: T,
    pub end: T,
    pub mode: usize,
    /// Largest `V(A z)/V(z)` for the arc's mode over its nodes, endpoints and midpoint.
    pub check_ratio: T,
}

/// Piecewise-constant 0-homogeneous feedback on the half circle.
#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackPartition<T> {
    pub arcs: Vec<FeedbackArc<T>>,
    /// Largest arc check ratio.
    pub mu: T,
    pub requested_mu: T,
}

impl<T: Scalar> FeedbackPartition<T> {
    /// A partition using one mode everywhere.
    pub fn constant(mode: usize) -> Self {
        Self {
            arcs: vec![FeedbackArc {
                start: T::zero(),
                end: T::PI(),
                mode,
                check_ratio: T::nan(),
            }],
            mu: T::nan(),
            requested_mu: T::nan(),
        }
    }

    pub fn mode_at(&self, angle: T) -> usize {
        let a = Scalar::rem_euclid(angle, T::PI());
        let i = self.arcs.partition_point(|arc| arc.end < a);
        self.arcs[i.min(self.arcs.len() - 1)].mode
    }
}

impl<T: Scalar> SwitchingRule<T> for FeedbackPartition<T> {
    fn select(&self, x: &[T]) -> usize {
        self.mode_at(x[1].atan2(x[0]))
    }
}

/// Assigns each node its minimizing mode (ties to the smallest index),
/// merges equal neighbours into arcs and checks each arc.
pub fn extract_feedback<T: Scalar>(
    table: &ValueTable<T>,
    set: &MatrixSet<T>,
    mu: T,
) -> Result<FeedbackPartition<T>> {
    set.require_dim(2)?;
    let grid = &table.grid;
    let n = grid.len();
    let images = node_images(set, grid);
    let limit = mu * (T::one() + T::lit(RATIO_SLACK));
    let mut modes = Vec::with_capacity(n);
    for k in 0..n {
        let (v, i) = best_mode(grid, &images, &table.values, k);
        let ratio = v / table.values[k];
        if ratio > limit {
            return Err(Error::NotCertifiable(format!(
                "decrease ratio {ratio} at angle {} exceeds mu = {mu}",
                grid.angle::<T>(k)
            )));
        }
        modes.push(i);
    }

    let half = grid.spacing::<T>() / T::lit(2.0);
    let mut arcs: Vec<FeedbackArc<T>> = Vec::new();
    let mut pieces = vec![(T::zero(), half, modes[0])];
    pieces.extend((1..n).map(|k| {
        (
            grid.angle::<T>(k) - half,
            grid.angle::<T>(k) + half,
            modes[k],
        )
    }));
    pieces.push((T::PI() - half, T::PI(), modes[0]));
    for (start, end, mode) in pieces {
        let start = arcs.last().map_or(start, |a| a.end);
        match arcs.last_mut() {
            Some(arc) if arc.mode == mode => arc.end = end,
            _ => arcs.push(FeedbackArc {
                start,
                end,
                mode,
                check_ratio: T::zero(),
            }),
        }
    }
    for arc in &mut arcs {
        let mut probes = vec![arc.start, arc.end, (arc.start + arc.end) / T::lit(2.0)];
        probes.extend(
            (0..=n)
                .map(|k| grid.angle::<T>(k))
                .filter(|&a| a >= arc.start && a <= arc.end),
        );
        arc.check_ratio = probes
            .into_iter()
            .map(|a| mode_ratio(table, set, arc.mode, a))
            .fold(T::zero(), T::max);
    }
    let achieved = arcs.iter().map(|a| a.check_ratio).fold(T::zero(), T::max);
    Ok(FeedbackPartition {
        arcs,
        mu: achieved,
        requested_mu: mu,
    })
}

/// `x_{k+1} = A_{σ(x_k)} x_k` for `steps` steps; returns all states.
pub fn closed_loop_simulate<T: Scalar, R: SwitchingRule<T> + ?Sized>(
    rule: &R,
    set: &MatrixSet<T>,
    x0: &[T],
    steps: usize,
) -> Result<Vec<Vec<T>>> {
    if x0.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: x0.len(),
        });
    }
    if vec_norm(x0) == T::zero() {
        return Err(Error::InvalidArgument(
            "initial state must be nonzero".into(),
        ));
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0.to_vec());
    for _ in 0..steps {
        let x = states.last().unwrap();
        let mode = rule.select(x);
        let a = set.modes().get(mode).ok_or(Error::InvalidIndex {
            index: mode,
            modes: set.len(),
        })?;
        states.push(a.mul_vec_unchecked(x));
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::stanford_urbano;
    use crate::linalg::Matrix;

    fn su() -> MatrixSet<f64> {
        stanford_urbano::<f64>().set
    }

    fn half() -> MatrixSet<f64> {
        MatrixSet::from_matrices(vec![Matrix::identity(2).scale(0.5)]).unwrap()
    }

    #[test]
    fn grid_validation_and_location() {
        assert!(AngularGrid::new(4).is_err());
        let g = AngularGrid::new(8).unwrap();
        let (k, f) = g.locate(std::f64::consts::PI * 1.25 / 8.0);
        assert_eq!(k, 1);
        assert!((f - 0.25).abs() < 1e-12);
        // antipodal identification
        let (k, _) = g.locate(std::f64::consts::PI + 0.01);
        assert_eq!(k, 0);
        let (k, _) = g.locate(-0.01);
        assert_eq!(k, 7);
    }

    #[test]
    fn profile_base_cases() {
        let g = AngularGrid::new(64).unwrap();
        assert!(min_product_profile(&su(), 0, &g)
            .unwrap()
            .iter()
            .all(|&x| x == 1.0));
        let g1 = min_product_profile(&su(), 1, &g).unwrap();
        assert!((g1[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn v_lambda_fast_decay_is_flat() {
        let g = AngularGrid::new(64).unwrap();
        let t = v_lambda(&half(), 0.9, 20, &g).unwrap();
        assert!(t.values.iter().all(|&v| v == 1.0));
        assert_eq!(t.residual, 0.0);
    }

    #[test]
    fn v_lambda_overflow_guard() {
        let id = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(2)]).unwrap();
        let g = AngularGrid::new(16).unwrap();
        // 2^40 > 1e12
        assert!(matches!(
            v_lambda(&id, 0.5, 40, &g),
            Err(Error::Overflow(_))
        ));
        // 2^10 stays below the threshold: the table is returned with a large residual
        let t = v_lambda(&id, 0.5, 10, &g).unwrap();
        assert_eq!(t.max_value(), 1024.0);
        assert_eq!(t.residual, 512.0);
    }

    #[test]
    fn v_hat_trivial_fixed_point() {
        let g = AngularGrid::new(64).unwrap();
        let t = v_hat(&half(), 0.9, &g, 100, 1e-12).unwrap();
        assert_eq!(t.iterations, 1);
        assert!(t.converged);
        assert!(t.values.iter().all(|&v| v == 1.0));
        let r = decrease_ratio(&t, &half()).unwrap();
        assert!(r.iter().all(|&x| (x - 0.5f64).abs() < 1e-15));
    }

    #[test]
    fn v_hat_divergence_below_radius() {
        let id = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(2)]).unwrap();
        let g = AngularGrid::new(16).unwrap();
        assert!(matches!(
            v_hat(&id, 0.5, &g, 1000, 1e-9),
            Err(Error::NotCertifiable(_))
        ));
    }

    #[test]
    fn rejects_non_planar_sets() {
        let s = MatrixSet::from_matrices(vec![Matrix::<f64>::identity(3)]).unwrap();
        let g = AngularGrid::new(16).unwrap();
        assert_eq!(
            v_hat(&s, 0.9, &g, 10, 1e-9).unwrap_err(),
            Error::UnsupportedDimension(3)
        );
        assert!(v_hat(&half(), -1.0, &g, 10, 1e-9).is_err());
    }

    #[test]
    fn dominant_mode_feedback() {
        let s = MatrixSet::from_matrices(vec![
            Matrix::identity(2).scale(0.5),
            Matrix::identity(2).scale(2.0),
        ])
        .unwrap();
        let g = AngularGrid::new(32).unwrap();
        let t = v_hat(&s, 0.6, &g, 100, 1e-12).unwrap();
        let p = extract_feedback(&t, &s, 0.6).unwrap();
        assert_eq!(p.arcs.len(), 1);
        assert_eq!(p.arcs[0].mode, 0);
        assert!((p.mu - 0.5f64).abs() < 1e-15);
    }

    #[test]
    fn feedback_not_certifiable_at_lower_bound() {
        let g = AngularGrid::new(512).unwrap();
        let t = v_hat(&su(), 0.95, &g, 10_000, 1e-9).unwrap();
        assert!(matches!(
            extract_feedback(&t, &su(), 0.5),
            Err(Error::NotCertifiable(_))
        ));
    }

    #[test]
    fn constant_partition_simulation() {
        let p = FeedbackPartition::<f64>::constant(0);
        let states = closed_loop_simulate(&p, &half(), &[1.0, 0.0], 10).unwrap();
        assert_eq!(states.len(), 11);
        assert_eq!(vec_norm(&states[10]), 2f64.powi(-10));
        assert!(closed_loop_simulate(&p, &half(), &[0.0, 0.0], 3).is_err());
        assert!(closed_loop_simulate(&p, &half(), &[1.0], 3).is_err());
    }

    #[test]
    fn homogeneous_evaluation_matches_table_on_grid_images() {
        // A1 rotates by -π/4, which maps node k to node k - n/4 (mod n)
        let n = 256;
        let g = AngularGrid::new(n).unwrap();
        let t = v_hat(&su(), 0.9, &g, 10_000, 1e-9).unwrap();
        let a1 = su().mode(0).clone();
        for k in 0..n {
            let a: f64 = g.angle(k);
            let y = a1.mul_vec(&[a.cos(), a.sin()]).unwrap();
            let direct = t.values[(k + n - n / 4) % n];
            assert!((t.eval([y[0], y[1]]) - direct).abs() < 1e-9);
        }
    }
}
