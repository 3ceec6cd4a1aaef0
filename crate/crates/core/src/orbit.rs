//! Exact orbit of rational lines under the Stanford–Urbano pair.
//!
//! A line through the origin with tangent `p/q` is stored as the coprime
//! nonnegative pair `(p, q)`; `(1, 0)` is the vertical axis. Lines are
//! unsigned and the orbit is symmetric about the first axis, so `±p/q`
//! are the same node.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instances::stanford_urbano;
use crate::linalg::Matrix;

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalDirection {
    p: BigUint,
    q: BigUint,
}

impl RationalDirection {
    /// Reduces `(p, q)` to coprime form.
    pub fn new(p: impl Into<BigUint>, q: impl Into<BigUint>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(Error::InvalidArgument(
                "direction (0, 0) is not a line".into(),
            ));
        }
        Ok(Self::reduced(p, q))
    }

    fn reduced(p: BigUint, q: BigUint) -> Self {
        let g = p.gcd(&q);
        Self {
            p: p / &g,
            q: q / g,
        }
    }

    /// The first axis, `(0, 1)`.
    pub fn axis() -> Self {
        Self {
            p: BigUint::zero(),
            q: BigUint::one(),
        }
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// Angle in `[0, π/2]`.
    pub fn angle(&self) -> f64 {
        big_to_f64(&self.p).atan2(big_to_f64(&self.q))
    }
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

impl fmt::Display for RationalDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for RationalDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidArgument(format!("expected p/q with nonnegative integers, got {s:?}"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let p: BigUint = p.trim().parse().map_err(|_| bad())?;
        let q: BigUint = q.trim().parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

/// Image under a rotation by `π/4`: `{p+q, |p−q|}`, halved when both are odd.
pub fn step_a1(d: &RationalDirection) -> RationalDirection {
    let sum = &d.p + &d.q;
    let diff = if d.p >= d.q { &d.p - &d.q } else { &d.q - &d.p };
    RationalDirection::reduced(sum, diff)
}

/// Image under `A₂^k`: the tangent is multiplied by `4^k`.
pub fn step_a2(d: &RationalDirection, k: i64) -> RationalDirection {
    let factor = BigUint::one() << (2 * k.unsigned_abs());
    if k >= 0 {
        RationalDirection::reduced(&d.p * factor, d.q.clone())
    } else {
        RationalDirection::reduced(d.p.clone(), &d.q * factor)
    }
}

/// `p mod 4 ≠ 2` and `q mod 4 ≠ 2`.
pub fn mod4_invariant(d: &RationalDirection) -> bool {
    let two = BigUint::from(2u8);
    let four = BigUint::from(4u8);
    &d.p % &four != two && &d.q % &four != two
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A1,
    A2,
    A2Inv,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::A1, Generator::A2, Generator::A2Inv];

    pub fn apply(self, d: &RationalDirection) -> RationalDirection {
        match self {
            Generator::A1 => step_a1(d),
            Generator::A2 => step_a2(d, 1),
            Generator::A2Inv => step_a2(d, -1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Generator::A1 => "A1",
            Generator::A2 => "A2",
            Generator::A2Inv => "A2^-1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEdge {
    pub from: usize,
    pub generator: Generator,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGraph {
    /// Ordered by BFS layer, then lexicographically by `(p, q)`.
    pub nodes: Vec<RationalDirection>,
    /// BFS layer of each node.
    pub layers: Vec<usize>,
    /// Every generator image of every node below the last layer.
    pub edges: Vec<OrbitEdge>,
    pub depth: usize,
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, d: &RationalDirection) -> bool {
        self.position(d).is_some()
    }

    pub fn position(&self, d: &RationalDirection) -> Option<usize> {
        self.nodes.iter().position(|n| n == d)
    }

    pub fn invariant_violations(&self) -> Vec<&RationalDirection> {
        self.nodes.iter().filter(|d| !mod4_invariant(d)).collect()
    }

    /// One edge per line: `p/q --gen--> p'/q'`.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!(
                "{} --{}--> {}\n",
                self.nodes[e.from],
                e.generator.as_str(),
                self.nodes[e.to]
            ));
        }
        out
    }
}

/// Breadth-first closure of the first axis under `step_a1` and `step_a2(±1)`.
pub fn explore_orbit(depth: usize, node_cap: usize) -> Result<OrbitGraph> {
    let mut nodes = vec![RationalDirection::axis()];
    let mut layers = vec![0];
    let mut seen: HashSet<RationalDirection> = nodes.iter().cloned().collect();
    let mut frontier = 0..1;
    for layer in 1..=depth {
        let images: Vec<[RationalDirection; 3]> = nodes[frontier.clone()]
            .par_iter()
            .map(|d| Generator::ALL.map(|g| g.apply(d)))
            .collect();
        let mut fresh: Vec<RationalDirection> = images
            .into_iter()
            .flatten()
            .filter(|d| !seen.contains(d))
            .collect();
        fresh.sort();
        fresh.dedup();
        if nodes.len() + fresh.len() > node_cap {
            return Err(Error::NodeCapExceeded(node_cap));
        }
        let start = nodes.len();
        for d in fresh {
            seen.insert(d.clone());
            nodes.push(d);
            layers.push(layer);
        }
        frontier = start..nodes.len();
    }

    let index: std::collections::HashMap<&RationalDirection, usize> =
        nodes.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut edges = Vec::new();
    for (from, d) in nodes.iter().enumerate() {
        if layers[from] == depth {
            continue;
        }
        for g in Generator::ALL {
            let to = index[&g.apply(d)];
            edges.push(OrbitEdge {
                from,
                generator: g,
                to,
            });
        }
    }
    Ok(OrbitGraph {
        nodes,
        layers,
        edges,
        depth,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotationReport {
    pub trace: f64,
    pub determinant: f64,
    /// Whether the eigenvalues form a nonreal conjugate pair.
    pub nonreal: bool,
    pub eigen_moduli: (f64, f64),
    /// Argument of the eigenvalue in the upper half plane.
    pub theta: f64,
    pub cos_2theta: f64,
    /// `cos 2θ` from exact rational arithmetic on `√2·A₂A₁`.
    pub cos_2theta_exact: Rational64,
    /// `|trace − 2·modulus·cos θ|`.
    pub trace_identity_residual: f64,
}

/// Spectral data of `A₂A₁`.
pub fn rotation_check() -> RotationReport {
    let su = stanford_urbano::<f64>();
    let p = su.set.mode(1).mul_unchecked(su.set.mode(0));
    let trace = p.trace();
    let determinant = p.determinant();
    let disc = trace * trace - 4.0 * determinant;
    let nonreal = disc < 0.0;
    let (re, im) = if nonreal {
        (trace / 2.0, (-disc).sqrt() / 2.0)
    } else {
        (trace / 2.0, 0.0)
    };
    let modulus = re.hypot(im);
    let eigen_moduli = if nonreal {
        (modulus, modulus)
    } else {
        let r = disc.sqrt() / 2.0;
        ((re + r).abs(), (re - r).abs())
    };
    let theta = im.atan2(re);

    // √2·A₂A₁ = [[1/2, 1/2], [-2, 2]] is rational, and cos²θ = tr²/(4 det)
    let half = Rational64::new(1, 2);
    let m = Matrix::from_rows([[half, half], [Rational64::from(-2), Rational64::from(2)]]);
    let tr = m.trace();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let cos_sq = tr * tr / (Rational64::from(4) * det);
    let cos_2theta_exact = Rational64::from(2) * cos_sq - Rational64::one();

    RotationReport {
        trace,
        determinant,
        nonreal,
        eigen_moduli,
        theta,
        cos_2theta: (2.0 * theta).cos(),
        cos_2theta_exact,
        trace_identity_residual: (trace - 2.0 * modulus * theta.cos()).abs(),
    }
}

/// Largest circular gap of `{kθ mod 2π : k < n}`.
pub fn density_gap_for(theta: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "density gap needs N >= 2, got {n}"
        )));
    }
    let tau = std::f64::consts::TAU;
    let mut pts: Vec<f64> = (0..n).map(|k| (k as f64 * theta).rem_euclid(tau)).collect();
    pts.sort_by(f64::total_cmp);
    let wrap = pts[0] + tau - pts[n - 1];
    Ok(pts.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max))
}

/// [`density_gap_for`] with the rotation angle of `A₂A₁`.
pub fn density_gap(n: usize) -> Result<f64> {
    density_gap_for(rotation_check().theta, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: u64, q: u64) -> RationalDirection {
        RationalDirection::new(p, q).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(d(4, 6), d(2, 3));
        assert_eq!(d(0, 7), RationalDirection::axis());
        assert_eq!(d(5, 0), d(1, 0));
        assert!(RationalDirection::new(0u32, 0u32).is_err());
        assert_eq!("10/4".parse::<RationalDirection>().unwrap(), d(5, 2));
        assert!("1/".parse::<RationalDirection>().is_err());
        assert!("-1/2".parse::<RationalDirection>().is_err());
    }

    #[test]
    fn a2_steps() {
        assert_eq!(step_a2(&d(0, 1), 3), d(0, 1));
        assert_eq!(step_a2(&d(1, 1), 1), d(4, 1));
        assert_eq!(step_a2(&d(1, 2), 1), d(2, 1));
        assert_eq!(step_a2(&d(4, 1), -1), d(1, 1));
        assert_eq!(step_a2(&d(1, 1), -2), d(1, 16));
    }

    #[test]
    fn a2_steps_need_big_integers() {
        let big = step_a2(&d(1, 1), 100);
        assert_eq!(big.p(), &(BigUint::one() << 200u32));
    }

    #[test]
    fn a1_steps() {
        assert_eq!(step_a1(&d(0, 1)), d(1, 1));
        assert_eq!(step_a1(&d(1, 1)), d(1, 0));
        assert_eq!(step_a1(&d(4, 1)), d(5, 3));
        assert_eq!(step_a1(&d(1, 0)), d(1, 1));
    }

    #[test]
    fn invariant_examples() {
        assert!(mod4_invariant(&d(0, 1)));
        assert!(!mod4_invariant(&d(1, 2)));
        assert!(mod4_invariant(&d(5, 3)));
    }

    #[test]
    fn small_depths() {
        let g0 = explore_orbit(0, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(g0.nodes, vec![d(0, 1)]);
        assert!(g0.edges.is_empty());
        let g1 = explore_orbit(1, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(g1.nodes, vec![d(0, 1), d(1, 1)]);
        assert_eq!(g1.edges.len(), 3);
        assert_eq!(
            g1.edge_list(),
            "0/1 --A1--> 1/1\n0/1 --A2--> 0/1\n0/1 --A2^-1--> 0/1\n"
        );
    }

    #[test]
    fn node_cap() {
        assert_eq!(
            explore_orbit(12, 100).unwrap_err(),
            Error::NodeCapExceeded(100)
        );
    }

    #[test]
    fn layers_are_sorted() {
        let g = explore_orbit(8, DEFAULT_NODE_CAP).unwrap();
        for w in g.nodes.windows(2).zip(g.layers.windows(2)) {
            let (n, l) = w;
            assert!(l[0] < l[1] || (l[0] == l[1] && n[0] < n[1]));
        }
    }

    #[test]
    fn rotation_spectrum() {
        let r = rotation_check();
        assert!(r.nonreal);
        assert!((r.determinant - 1.0).abs() < 1e-12);
        assert!((r.eigen_moduli.0 - 1.0).abs() < 1e-12);
        assert!((r.eigen_moduli.1 - 1.0).abs() < 1e-12);
        assert!(r.trace_identity_residual < 1e-12);
        assert_eq!(r.cos_2theta_exact, Rational64::new(9, 16));
        assert!((r.cos_2theta - 0.5625).abs() < 1e-12);
    }

    #[test]
    fn density_gap_two_points() {
        let r = rotation_check();
        let t = r.theta.rem_euclid(std::f64::consts::TAU);
        let gap = density_gap(2).unwrap();
        assert!((gap - t.max(std::f64::consts::TAU - t)).abs() < 1e-12);
        assert!(density_gap(1).is_err());
    }
}
