//! Lower and upper bounds on the stabilization radius `ρ̃(M)` and the joint
//! spectral subradius `ρ̌(M)`.
//!
//! Lower bounds come from smallest singular values of products and from a
//! common invariant orthant. Upper bounds evaluate `min_A |A z|` on a uniform
//! direction grid and pad the grid maximum with a Lipschitz term so the
//! result holds for every unit direction, not only the sampled ones.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    image_2d, smallest_singular_value, spectral_norm, vec_norm, word_matrix, Enumerator, Matrix,
    MatrixSet, ProductEntry, Word,
};
use crate::scalar::{from_usize, Scalar};

/// Seed of the sphere sampler used for uncertified bounds in `d > 2`.
pub const SPHERE_SEED: u64 = 0x5eed_2024;

/// Width of the λ bisection in [`cone_lower_bound`].
pub const CONE_BISECTION_WIDTH: f64 = 1e-9;

/// Residual tolerance accepted for a cone witness.
pub const CONE_RESIDUAL_TOL: f64 = 1e-9;

/// How a reported number may be used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// A rigorous bound (up to floating-point rounding).
    Certified,
    /// A sampled value with no guarantee.
    Empirical,
    /// A convergence or consistency indicator.
    Diagnostic,
}

impl Certification {
    pub fn as_str(self) -> &'static str {
        match self {
            Certification::Certified => "certified",
            Certification::Empirical => "empirical",
            Certification::Diagnostic => "diagnostic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerMethod {
    SingularValue,
    Cone,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundReport<T> {
    pub method: LowerMethod,
    /// `(t, bound obtained from M^t)`.
    pub per_horizon: Vec<(usize, T)>,
    pub best: T,
}

impl<T: Scalar> LowerBoundReport<T> {
    fn from_horizons(method: LowerMethod, per_horizon: Vec<(usize, T)>) -> Self {
        let best = per_horizon.iter().fold(T::zero(), |m, &(_, v)| m.max(v));
        Self {
            method,
            per_horizon,
            best,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperMethod {
    Algorithm1,
    BestResponse,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperBoundReport<T> {
    pub method: UpperMethod,
    /// `t` for the fixed-horizon bound, `t̄` for best response.
    pub horizon: usize,
    /// Grid maximum as a per-step rate.
    pub empirical: T,
    /// Lipschitz-padded per-step rate; `+∞` when no certificate exists.
    pub certified: T,
    /// Unnormalised grid maximum `γ_t` (equals `empirical` for best response).
    pub raw_empirical: T,
    /// Unnormalised padded value `γ_t + L h`.
    pub raw_certified: T,
    pub grid_size: usize,
    pub lipschitz_pad: T,
    pub certification: Certification,
    /// Direction (angle in radians) attaining the grid maximum, in the plane.
    pub argmax_angle: Option<T>,
}

impl<T: Scalar> UpperBoundReport<T> {
    /// `false` when the bound is vacuous (`≥ 1`).
    pub fn is_contracting(&self) -> bool {
        self.certified < T::one()
    }
}

/// Witness `v ≥ 0`, `Σ v = 1`, with `A v ≥ λ v` for all `A ∈ M^t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeCertificate<T> {
    pub lambda: T,
    pub v: Vec<T>,
    pub horizon: usize,
    /// `min_{A, i} (A v - λ v)_i`, negative only by rounding.
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestResponseArc<T> {
    pub start: T,
    pub end: T,
    pub word: Word,
    /// `|A_w z| ≤ rate^{|w|}` for every unit `z` with angle in `[start, end]`.
    pub rate: T,
}

impl<T> BestResponseArc<T> {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Partition of the half circle `[0, π]` into arcs, each with a product
/// that contracts every direction of the arc.
#[derive(Clone, Debug, PartialEq)]
pub struct BestResponseMap<T> {
    pub arcs: Vec<BestResponseArc<T>>,
}

impl<T: Scalar> BestResponseMap<T> {
    /// Arc containing the line at `angle` (taken modulo π).
    pub fn arc_at(&self, angle: T) -> &BestResponseArc<T> {
        let a = Scalar::rem_euclid(angle, T::PI());
        let i = self.arcs.partition_point(|arc| arc.end < a);
        &self.arcs[i.min(self.arcs.len() - 1)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubradiusBound<T> {
    /// `min_{t ≤ t_max, A ∈ M^t} ‖A‖^{1/t}`.
    pub value: T,
    pub word: Word,
    pub horizon: usize,
    /// Best value at each length.
    pub per_horizon: Vec<(usize, T)>,
}

/// Uniform grid of `grid_n` unit directions on `[0, 2π)`. Only the
/// `grid_n / 2` nodes of `[0, π)` are evaluated since `|A(-z)| = |A z|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectionGrid {
    grid_n: usize,
}

impl DirectionGrid {
    pub fn new(grid_n: usize) -> Result<Self> {
        if grid_n < 8 || !grid_n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and at least 8, got {grid_n}"
            )));
        }
        Ok(Self { grid_n })
    }

    pub fn size(&self) -> usize {
        self.grid_n
    }

    pub fn half_nodes(&self) -> usize {
        self.grid_n / 2
    }

    pub fn angle<T: Scalar>(&self, k: usize) -> T {
        T::lit(2.0 * std::f64::consts::PI * k as f64 / self.grid_n as f64)
    }

    /// Largest distance from a unit vector to the nearest grid direction,
    /// `2 sin(π / (2 grid_n))`.
    pub fn chord<T: Scalar>(&self) -> T {
        T::lit(2.0 * (std::f64::consts::PI / (2.0 * self.grid_n as f64)).sin())
    }

    /// Half-width in angle of the cell around each node.
    pub fn half_cell<T: Scalar>(&self) -> T {
        T::lit(std::f64::consts::PI / self.grid_n as f64)
    }

    fn directions<T: Scalar>(&self) -> Vec<(T, T, T)> {
        (0..self.half_nodes())
            .map(|k| {
                let a: T = self.angle(k);
                (a, a.cos(), a.sin())
            })
            .collect()
    }
}

/// Singular-value lower bound: at each `t`, `(min_{A ∈ M^t} σ_m(A))^{1/t}`.
pub fn sv_lower_bound<T: Scalar>(
    set: &MatrixSet<T>,
    t_max: usize,
    enumerator: &Enumerator,
) -> Result<LowerBoundReport<T>> {
    if t_max == 0 {
        return Err(Error::InvalidArgument("t_max must be at least 1".into()));
    }
    let levels = enumerator.enumerate_levels(set, t_max)?;
    let per_horizon = levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let t = i + 1;
            let m = level
                .iter()
                .map(|e| smallest_singular_value(&e.matrix))
                .fold(T::infinity(), T::min);
            (t, root(m, t))
        })
        .collect();
    Ok(LowerBoundReport::from_horizons(
        LowerMethod::SingularValue,
        per_horizon,
    ))
}

fn root<T: Scalar>(x: T, t: usize) -> T {
    if t == 1 {
        x
    } else {
        x.powf(T::one() / from_usize(t))
    }
}

/// Orthant lower bound `σ̌_K(M^t)^{1/t}` for nonnegative products, by
/// bisection on `λ` over LP feasibility of `{v ≥ 0, Σv = 1, A v ≥ λ v}`.
pub fn cone_lower_bound<T: Scalar>(
    set: &MatrixSet<T>,
    horizon: usize,
    enumerator: &Enumerator,
) -> Result<(LowerBoundReport<T>, ConeCertificate<T>)> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let products = enumerator.enumerate(set, horizon)?;
    if let Some(bad) = products.iter().find(|e| !e.matrix.is_nonnegative()) {
        return Err(Error::ConeInapplicable(format!(
            "product {} has a negative entry",
            bad.word.display_with(set.labels())
        )));
    }
    let d = set.dim();
    let mats: Vec<Vec<f64>> = products
        .iter()
        .map(|e| e.matrix.as_slice().iter().map(|x| x.as_f64()).collect())
        .collect();

    let mut lo = 0.0;
    let mut hi = products
        .iter()
        .map(|e| e.matrix.norm_1().as_f64())
        .fold(f64::INFINITY, f64::min);
    if orthant_slack(&mats, d, hi)? >= -lp_tol(hi) {
        lo = hi;
    }
    while hi - lo > CONE_BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if orthant_slack(&mats, d, mid)? >= -lp_tol(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = central_witness(&mats, d, lo)?;
    let residual = mats
        .iter()
        .flat_map(|m| (0..d).map(move |i| (i, m)))
        .map(|(i, m)| (0..d).map(|j| m[i * d + j] * v[j]).sum::<f64>() - lo * v[i])
        .fold(f64::INFINITY, f64::min);
    if residual < -CONE_RESIDUAL_TOL {
        return Err(Error::Lp(format!(
            "witness residual {residual:e} too large"
        )));
    }
    let lambda = T::lit(lo);
    let report =
        LowerBoundReport::from_horizons(LowerMethod::Cone, vec![(horizon, root(lambda, horizon))]);
    Ok((
        report,
        ConeCertificate {
            lambda,
            v: v.iter().map(|&x| T::lit(x)).collect(),
            horizon,
            residual: T::lit(residual),
        },
    ))
}

fn lp_tol(lambda: f64) -> f64 {
    1e-12 * lambda.max(1.0)
}

// max s subject to (A - λI) v ≥ s·1 for every A, v ≥ 0, Σ v = 1
fn orthant_slack(mats: &[Vec<f64>], d: usize, lambda: f64) -> Result<f64> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let v: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let s = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    lp.add_constraint(
        v.iter().map(|&x| (x, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for m in mats {
        for i in 0..d {
            let mut row: Vec<_> = (0..d)
                .map(|j| (v[j], m[i * d + j] - if i == j { lambda } else { 0.0 }))
                .collect();
            row.push((s, -1.0));
            lp.add_constraint(row, ComparisonOp::Ge, 0.0);
        }
    }
    let sol = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    Ok(sol[s])
}

// most interior feasible v: max τ subject to v_i ≥ τ, (A - λI) v ≥ 0, Σ v = 1
fn central_witness(mats: &[Vec<f64>], d: usize, lambda: f64) -> Result<Vec<f64>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let v: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let tau = lp.add_var(1.0, (0.0, 1.0));
    lp.add_constraint(
        v.iter().map(|&x| (x, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for &x in &v {
        lp.add_constraint([(x, 1.0), (tau, -1.0)], ComparisonOp::Ge, 0.0);
    }
    for m in mats {
        for i in 0..d {
            let row: Vec<_> = (0..d)
                .map(|j| (v[j], m[i * d + j] - if i == j { lambda } else { 0.0 }))
                .collect();
            lp.add_constraint(row, ComparisonOp::Ge, -lp_tol(lambda));
        }
    }
    let sol = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    Ok(v.iter().map(|&x| sol[x].max(0.0)).collect())
}

/// Fixed-horizon grid bound: for each `t ≤ t_max`,
/// `γ_t = max_θ min_{A ∈ M^t} |A z_θ|` on the grid, padded to
/// `γ̄_t = γ_t + L h` with `L = max ‖A‖` and `h` the grid chord, and reported
/// as the rates `γ_t^{1/t}`, `γ̄_t^{1/t}`.
///
/// For `d > 2` the directions are sampled uniformly on the sphere and only
/// the empirical value is produced (`certified = +∞`).
pub fn algorithm1_upper<T: Scalar>(
    set: &MatrixSet<T>,
    t_max: usize,
    grid_n: usize,
    enumerator: &Enumerator,
) -> Result<Vec<UpperBoundReport<T>>> {
    if t_max == 0 {
        return Err(Error::InvalidArgument("t_max must be at least 1".into()));
    }
    let grid = DirectionGrid::new(grid_n)?;
    let levels = enumerator.enumerate_levels(set, t_max)?;
    let samples = match set.dim() {
        1 | 2 => None,
        d => Some(sphere_samples::<T>(d, grid_n)),
    };
    Ok(levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let t = i + 1;
            match (set.dim(), &samples) {
                (1, _) => scalar_level(level, t, grid_n),
                (2, _) => planar_level(level, t, &grid),
                (_, Some(dirs)) => sampled_level(level, t, grid_n, dirs),
                _ => unreachable!(),
            }
        })
        .collect())
}

fn planar_level<T: Scalar>(
    level: &[ProductEntry<T>],
    t: usize,
    grid: &DirectionGrid,
) -> UpperBoundReport<T> {
    let lipschitz = level
        .iter()
        .map(|e| spectral_norm(&e.matrix))
        .fold(T::zero(), T::max);
    let (gamma, argmax) = grid
        .directions::<T>()
        .into_par_iter()
        .map(|(a, c, s)| {
            let v = level
                .iter()
                .map(|e| {
                    let (x, y) = image_2d(&e.matrix, c, s);
                    x.hypot(y)
                })
                .fold(T::infinity(), T::min);
            (v, a)
        })
        .reduce(|| (T::neg_infinity(), T::zero()), max_with_angle);
    let pad = lipschitz * grid.chord();
    let padded = gamma + pad;
    UpperBoundReport {
        method: UpperMethod::Algorithm1,
        horizon: t,
        empirical: root(gamma, t),
        certified: root(padded, t),
        raw_empirical: gamma,
        raw_certified: padded,
        grid_size: grid.size(),
        lipschitz_pad: pad,
        certification: Certification::Certified,
        argmax_angle: Some(argmax),
    }
}

// ties resolved toward the smaller angle so the reduction is order independent
fn max_with_angle<T: Scalar>(a: (T, T), b: (T, T)) -> (T, T) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn scalar_level<T: Scalar>(
    level: &[ProductEntry<T>],
    t: usize,
    grid_n: usize,
) -> UpperBoundReport<T> {
    let gamma = level
        .iter()
        .map(|e| e.matrix.as_slice()[0].abs())
        .fold(T::infinity(), T::min);
    UpperBoundReport {
        method: UpperMethod::Algorithm1,
        horizon: t,
        empirical: root(gamma, t),
        certified: root(gamma, t),
        raw_empirical: gamma,
        raw_certified: gamma,
        grid_size: grid_n,
        lipschitz_pad: T::zero(),
        certification: Certification::Certified,
        argmax_angle: None,
    }
}

fn sampled_level<T: Scalar>(
    level: &[ProductEntry<T>],
    t: usize,
    grid_n: usize,
    dirs: &[Vec<T>],
) -> UpperBoundReport<T> {
    let gamma = dirs
        .par_iter()
        .map(|z| {
            level
                .iter()
                .map(|e| vec_norm(&e.matrix.mul_vec_unchecked(z)))
                .fold(T::infinity(), T::min)
        })
        .reduce(T::neg_infinity, T::max);
    UpperBoundReport {
        method: UpperMethod::Algorithm1,
        horizon: t,
        empirical: root(gamma, t),
        certified: T::infinity(),
        raw_empirical: gamma,
        raw_certified: T::infinity(),
        grid_size: grid_n,
        lipschitz_pad: T::infinity(),
        certification: Certification::Empirical,
        argmax_angle: None,
    }
}

/// `n` unit vectors drawn uniformly from the sphere with a fixed seed.
pub fn sphere_samples<T: Scalar>(d: usize, n: usize) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPHERE_SEED);
    (0..n)
        .map(|_| loop {
            let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break g.iter().map(|x| T::lit(x / norm)).collect();
            }
        })
        .collect()
}

struct Candidate<T> {
    word: Word,
    matrix: Matrix<T>,
    norm: T,
    inv_len: T,
}

fn candidates<T: Scalar>(
    set: &MatrixSet<T>,
    t_bar: usize,
    words: Option<&[Word]>,
    enumerator: &Enumerator,
) -> Result<Vec<Candidate<T>>> {
    let mut entries: Vec<ProductEntry<T>> = match words {
        Some(ws) => {
            let mut ws: Vec<Word> = ws.to_vec();
            ws.sort_by(Word::shortlex_cmp);
            ws.dedup();
            ws.into_iter()
                .map(|w| {
                    if w.is_empty() {
                        return Err(Error::InvalidArgument(
                            "candidate words must be nonempty".into(),
                        ));
                    }
                    Ok(ProductEntry {
                        matrix: word_matrix(set, &w)?,
                        word: w,
                    })
                })
                .collect::<Result<_>>()?
        }
        None => enumerator
            .enumerate_levels(set, t_bar)?
            .into_iter()
            .flatten()
            .collect(),
    };
    entries.sort_by(|a, b| a.word.shortlex_cmp(&b.word));
    Ok(entries
        .into_iter()
        .map(|e| Candidate {
            norm: spectral_norm(&e.matrix),
            inv_len: T::one() / from_usize(e.word.len()),
            word: e.word,
            matrix: e.matrix,
        })
        .collect())
}

// (F(θ), index of the minimizing candidate); ties keep the earlier candidate
fn best_response_at<T: Scalar>(cands: &[Candidate<T>], c: T, s: T) -> (T, usize, T) {
    let mut best = (T::infinity(), 0, T::zero());
    for (i, cand) in cands.iter().enumerate() {
        let (x, y) = image_2d(&cand.matrix, c, s);
        let image = x.hypot(y);
        let rate = image.powf(cand.inv_len);
        if rate < best.0 {
            best = (rate, i, image);
        }
    }
    best
}

/// `F(α) = min_w |A_w z_α|^{1/|w|}` at the given angles.
pub fn best_response_profile<T: Scalar>(
    set: &MatrixSet<T>,
    words: &[Word],
    angles: &[T],
) -> Result<Vec<T>> {
    set.require_dim(2)?;
    let cands = candidates(set, 0, Some(words), &Enumerator::default())?;
    Ok(angles
        .par_iter()
        .map(|a| best_response_at(&cands, a.cos(), a.sin()).0)
        .collect())
}

/// Variable-horizon bound: each grid cell gets the product minimizing
/// `|A_w z|^{1/|w|}` at its node, and the cell is certified with
/// `(|A_w z_0| + ‖A_w‖ h)^{1/|w|}`. Candidates are `words` when given,
/// otherwise every (deduplicated) product of length `1..=t_bar`.
pub fn best_response_upper<T: Scalar>(
    set: &MatrixSet<T>,
    t_bar: usize,
    grid_n: usize,
    words: Option<&[Word]>,
    enumerator: &Enumerator,
) -> Result<(UpperBoundReport<T>, BestResponseMap<T>)> {
    set.require_dim(2)?;
    if t_bar == 0 && words.is_none() {
        return Err(Error::InvalidArgument("t_bar must be at least 1".into()));
    }
    let grid = DirectionGrid::new(grid_n)?;
    let cands = candidates(set, t_bar, words, enumerator)?;
    let h: T = grid.chord();

    // (angle, F, winner, padded rate) per half-circle node
    let cells: Vec<(T, T, usize, T)> = grid
        .directions::<T>()
        .into_par_iter()
        .map(|(a, c, s)| {
            let (rate, i, image) = best_response_at(&cands, c, s);
            let cand = &cands[i];
            (a, rate, i, (image + cand.norm * h).powf(cand.inv_len))
        })
        .collect();

    let (empirical, argmax) = cells
        .iter()
        .map(|&(a, f, _, _)| (f, a))
        .fold((T::neg_infinity(), T::zero()), max_with_angle);
    let certified = cells.iter().map(|c| c.3).fold(T::neg_infinity(), T::max);
    let pad = cells
        .iter()
        .map(|&(_, _, i, _)| cands[i].norm * h)
        .fold(T::zero(), T::max);

    // node 0's cell straddles 0 ≡ π and is split between both ends
    let half = grid.half_cell::<T>();
    let mut pieces: Vec<(T, T, usize, T)> = Vec::with_capacity(cells.len() + 1);
    pieces.push((T::zero(), half, cells[0].2, cells[0].3));
    for &(a, _, i, r) in &cells[1..] {
        pieces.push((a - half, a + half, i, r));
    }
    pieces.push((T::PI() - half, T::PI(), cells[0].2, cells[0].3));
    let mut arcs: Vec<BestResponseArc<T>> = Vec::new();
    let mut last: Option<usize> = None;
    for (start, end, i, r) in pieces {
        // adjacent arcs share the exact endpoint value
        let start = arcs.last().map_or(start, |a| a.end);
        match (last, arcs.last_mut()) {
            (Some(j), Some(arc)) if j == i => {
                arc.end = end;
                arc.rate = arc.rate.max(r);
            }
            _ => arcs.push(BestResponseArc {
                start,
                end,
                word: cands[i].word.clone(),
                rate: r,
            }),
        }
        last = Some(i);
    }

    let report = UpperBoundReport {
        method: UpperMethod::BestResponse,
        horizon: cands.iter().map(|c| c.word.len()).max().unwrap_or(0),
        empirical,
        certified,
        raw_empirical: empirical,
        raw_certified: certified,
        grid_size: grid_n,
        lipschitz_pad: pad,
        certification: Certification::Certified,
        argmax_angle: Some(argmax),
    };
    Ok((report, BestResponseMap { arcs }))
}

/// `min_{t ≤ t_max, A ∈ M^t} ‖A‖^{1/t}`, an upper bound on `ρ̌(M)` by
/// submultiplicativity.
pub fn subradius_norm_upper<T: Scalar>(
    set: &MatrixSet<T>,
    t_max: usize,
    enumerator: &Enumerator,
) -> Result<SubradiusBound<T>> {
    if t_max == 0 {
        return Err(Error::InvalidArgument("t_max must be at least 1".into()));
    }
    let levels = enumerator.enumerate_levels(set, t_max)?;
    let mut best = (T::infinity(), Word::empty(), 0);
    let mut per_horizon = Vec::with_capacity(t_max);
    for (i, level) in levels.iter().enumerate() {
        let t = i + 1;
        let (v, w) = level
            .iter()
            .map(|e| (root(spectral_norm(&e.matrix), t), &e.word))
            .fold((T::infinity(), None), |acc, (v, w)| {
                if v < acc.0 {
                    (v, Some(w))
                } else {
                    acc
                }
            });
        per_horizon.push((t, v));
        if v < best.0 {
            best = (v, w.cloned().unwrap_or_default(), t);
        }
    }
    Ok(SubradiusBound {
        value: best.0,
        word: best.1,
        horizon: best.2,
        per_horizon,
    })
}
