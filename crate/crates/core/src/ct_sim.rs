//! Continuous-time systems `ẋ = A x`, `A ∈ conv{A_1, …, A_m}`, under
//! sample-and-hold feedback.

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, Matrix, MatrixSet};
use crate::scalar::{from_usize, Scalar};
use crate::switching::SwitchingRule;

/// States above this norm stop a simulation.
pub const STATE_GUARD: f64 = 1e100;

const PADE_ORDER: usize = 6;

/// `exp(t·a)` by a diagonal Padé approximant of degree 6 with scaling and
/// squaring; the scaled argument has 1-norm at most 1/2.
pub fn matrix_exponential<T: Scalar>(a: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    if !t.is_finite() || a.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidMatrix(
            "matrix exponential needs finite input".into(),
        ));
    }
    let x = a.scale(t);
    let norm = x.norm_1();
    let mut squarings = 0u32;
    let mut scaled = norm;
    while scaled > T::lit(0.5) {
        scaled /= T::lit(2.0);
        squarings += 1;
    }
    let x = x.scale(T::lit(2.0).powi(-(squarings as i32)));

    let d = a.dim();
    let mut c = T::one();
    let mut num = Matrix::identity(d);
    let mut den = Matrix::identity(d);
    let mut power = Matrix::identity(d);
    for k in 1..=PADE_ORDER {
        c = c * from_usize::<T>(PADE_ORDER + 1 - k) / from_usize::<T>(k * (2 * PADE_ORDER + 1 - k));
        power = power.mul_unchecked(&x);
        let term = power.scale(c);
        num = num.add(&term)?;
        den = den.add(&term.scale(if k % 2 == 1 { -T::one() } else { T::one() }))?;
    }
    let mut r = den.solve(&num)?;
    for _ in 0..squarings {
        r = r.mul_unchecked(&r);
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CtSystem<T> {
    pub generators: MatrixSet<T>,
}

impl<T: Scalar> CtSystem<T> {
    pub fn new(generators: MatrixSet<T>) -> Self {
        Self { generators }
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    /// Matrix held during a segment.
    pub fn held_matrix(&self, choice: &Choice<T>) -> Result<Matrix<T>> {
        match choice {
            Choice::Mode(i) => {
                self.generators
                    .modes()
                    .get(*i)
                    .cloned()
                    .ok_or(Error::InvalidIndex {
                        index: *i,
                        modes: self.generators.len(),
                    })
            }
            Choice::Weights(w) => {
                check_weights(w, self.generators.len())?;
                let mut m = Matrix::zeros(self.dim());
                for (a, &wi) in self.generators.modes().iter().zip(w) {
                    m = m.add(&a.scale(wi))?;
                }
                Ok(m)
            }
        }
    }

    /// Same system with every generator shifted by `gamma·Id`.
    pub fn shifted(&self, gamma: T) -> Self {
        let id = Matrix::identity(self.dim()).scale(gamma);
        let modes = self
            .generators
            .modes()
            .iter()
            .map(|a| a.add(&id).expect("same dimension"))
            .collect();
        Self::new(MatrixSet::new(modes, self.generators.labels().to_vec()).expect("valid set"))
    }
}

fn check_weights<T: Scalar>(w: &[T], modes: usize) -> Result<()> {
    if w.len() != modes {
        return Err(Error::DimensionMismatch {
            expected: modes,
            found: w.len(),
        });
    }
    let sum: T = w.iter().copied().sum();
    if w.iter().any(|&x| x.is_nan() || x < T::zero()) || (sum - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidArgument(
            "weights must be nonnegative and sum to 1".into(),
        ));
    }
    Ok(())
}

/// A generator index or a convex combination of generators.
#[derive(Clone, Debug, PartialEq)]
pub enum Choice<T> {
    Mode(usize),
    Weights(Vec<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment<T> {
    pub choice: Choice<T>,
    pub duration: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule<T> {
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> Schedule<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("schedule has no segments".into()));
        }
        for s in &segments {
            if !(s.duration > T::zero() && s.duration.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "segment duration must be positive and finite, got {}",
                    s.duration
                )));
            }
            if let Choice::Weights(w) = &s.choice {
                check_weights(w, w.len())?;
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// `(1/δ) ∫₀^δ A_σ(s) ds` for the piecewise-constant schedule `σ`.
pub fn average_matrix<T: Scalar>(sys: &CtSystem<T>, sched: &Schedule<T>) -> Result<Matrix<T>> {
    let total = sched.total_duration();
    let mut m = Matrix::zeros(sys.dim());
    for s in sched.segments() {
        m = m.add(&sys.held_matrix(&s.choice)?.scale(s.duration / total))?;
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CtTrajectory<T> {
    pub delta: T,
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    /// Generator held on `[times[k], times[k+1])`.
    pub modes: Vec<usize>,
    /// Set when the state norm passed [`STATE_GUARD`]; the run stops there.
    pub diverged: bool,
}

impl<T: Scalar> CtTrajectory<T> {
    pub fn final_state(&self) -> &[T] {
        self.states.last().expect("trajectory has an initial state")
    }

    pub fn final_norm(&self) -> T {
        vec_norm(self.final_state())
    }

    pub fn max_norm(&self) -> T {
        self.states
            .iter()
            .map(|x| vec_norm(x))
            .fold(T::zero(), T::max)
    }

    /// Geometric mean of `|x_{k+1}| / |x_k|` over full sampling periods.
    pub fn decay_per_step(&self) -> T {
        let n = self.states.len() - 1;
        if n == 0 {
            return T::one();
        }
        let steps = (self.times[n] - self.times[0]) / self.delta;
        (self.final_norm() / vec_norm(&self.states[0])).powf(T::one() / steps)
    }

    /// `time,x1,...,xd,mode` with the mode held from that sample on.
    pub fn to_csv(&self) -> String {
        let d = self.states[0].len();
        let mut out = String::from("time");
        for i in 1..=d {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",mode\n");
        for (k, (t, x)) in self.times.iter().zip(&self.states).enumerate() {
            out.push_str(&format!("{:.16e}", t.as_f64()));
            for v in x {
                out.push_str(&format!(",{:.16e}", v.as_f64()));
            }
            match self.modes.get(k) {
                Some(m) => out.push_str(&format!(",{}\n", m + 1)),
                None => out.push_str(",\n"),
            }
        }
        out
    }
}

fn check_state<T: Scalar>(sys: &CtSystem<T>, x0: &[T]) -> Result<()> {
    if x0.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: x0.len(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "initial state must be finite".into(),
        ));
    }
    Ok(())
}

/// Holds `feedback(x(δk))` on `[δk, δ(k+1))` up to `t_final`; the last
/// interval is shortened when `t_final` is not a multiple of `δ`.
pub fn sample_hold_simulate<T: Scalar, R: SwitchingRule<T> + ?Sized>(
    sys: &CtSystem<T>,
    feedback: &R,
    delta: T,
    x0: &[T],
    t_final: T,
) -> Result<CtTrajectory<T>> {
    check_state(sys, x0)?;
    if !(delta > T::zero() && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !(t_final >= delta && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "horizon {t_final} must be finite and at least delta = {delta}"
        )));
    }
    let full: Vec<Matrix<T>> = sys
        .generators
        .modes()
        .iter()
        .map(|a| matrix_exponential(a, delta))
        .collect::<Result<_>>()?;
    // tolerate rounding in t_final / delta
    let ratio = t_final / delta;
    let mut steps = ratio.round();
    if (ratio - steps).abs() > T::lit(1e-9) * ratio {
        steps = ratio.ceil();
    }
    let steps = steps.to_usize().unwrap_or(0);

    let guard = T::lit(STATE_GUARD);
    let mut traj = CtTrajectory {
        delta,
        times: vec![T::zero()],
        states: vec![x0.to_vec()],
        modes: Vec::with_capacity(steps),
        diverged: false,
    };
    for k in 0..steps {
        let x = traj.states.last().unwrap();
        let t0 = from_usize::<T>(k) * delta;
        let t1 = if k + 1 == steps { t_final } else { t0 + delta };
        let mode = if vec_norm(x) == T::zero() {
            0
        } else {
            feedback.select(x)
        };
        let a = sys
            .generators
            .modes()
            .get(mode)
            .ok_or(Error::InvalidIndex {
                index: mode,
                modes: sys.generators.len(),
            })?;
        let next = if t1 - t0 == delta {
            full[mode].mul_vec_unchecked(x)
        } else {
            matrix_exponential(a, t1 - t0)?.mul_vec_unchecked(x)
        };
        traj.modes.push(mode);
        traj.times.push(t1);
        let n = vec_norm(&next);
        traj.states.push(next);
        if n.is_nan() || n > guard {
            traj.diverged = true;
            break;
        }
    }
    Ok(traj)
}

/// States at every segment boundary of an open-loop schedule.
pub fn schedule_simulate<T: Scalar>(
    sys: &CtSystem<T>,
    sched: &Schedule<T>,
    x0: &[T],
) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    check_state(sys, x0)?;
    let mut times = vec![T::zero()];
    let mut states = vec![x0.to_vec()];
    for s in sched.segments() {
        let e = matrix_exponential(&sys.held_matrix(&s.choice)?, s.duration)?;
        let x = e.mul_vec_unchecked(states.last().unwrap());
        times.push(*times.last().unwrap() + s.duration);
        states.push(x);
    }
    Ok((times, states))
}

/// One-step norm descent: `x ↦ argmin_i |exp(δA_i) x/|x||`, ties to the smallest index.
#[derive(Clone, Debug)]
pub struct GreedyFeedback<T> {
    flows: Vec<Matrix<T>>,
}

impl<T: Scalar> GreedyFeedback<T> {
    pub fn new(sys: &CtSystem<T>, delta: T) -> Result<Self> {
        if delta.is_nan() || delta <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive, got {delta}"
            )));
        }
        let flows = sys
            .generators
            .modes()
            .iter()
            .map(|a| matrix_exponential(a, delta))
            .collect::<Result<_>>()?;
        Ok(Self { flows })
    }
}

impl<T: Scalar> SwitchingRule<T> for GreedyFeedback<T> {
    fn select(&self, x: &[T]) -> usize {
        let n = vec_norm(x);
        let z: Vec<T> = x.iter().map(|&v| v / n).collect();
        let mut best = (T::infinity(), 0);
        for (i, e) in self.flows.iter().enumerate() {
            let v = vec_norm(&e.mul_vec_unchecked(&z));
            if v < best.0 {
                best = (v, i);
            }
        }
        best.1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftScalingReport<T> {
    pub gamma: T,
    pub times: Vec<T>,
    /// `|x_γ(t)| / |x(t)|` at every sample time.
    pub norm_ratios: Vec<T>,
    /// Largest `|x_γ(t) − e^{γt} x(t)| / |e^{γt} x(t)|`.
    pub max_relative_error: T,
}

/// Runs `sched` on the generators and on the generators shifted by `γ·Id`
/// and compares `x_γ(t)` with `e^{γt} x(t)` at each segment boundary.
pub fn shift_scaling_check<T: Scalar>(
    sys: &CtSystem<T>,
    gamma: T,
    sched: &Schedule<T>,
    x0: &[T],
) -> Result<ShiftScalingReport<T>> {
    let (times, base) = schedule_simulate(sys, sched, x0)?;
    let (_, shifted) = schedule_simulate(&sys.shifted(gamma), sched, x0)?;
    let mut norm_ratios = Vec::with_capacity(times.len());
    let mut max_relative_error = T::zero();
    for ((t, x), y) in times.iter().zip(&base).zip(&shifted) {
        let g = (gamma * *t).exp();
        let expected: Vec<T> = x.iter().map(|&v| v * g).collect();
        let diff: Vec<T> = y.iter().zip(&expected).map(|(&a, &b)| a - b).collect();
        let scale = vec_norm(&expected);
        if scale > T::zero() {
            max_relative_error = max_relative_error.max(vec_norm(&diff) / scale);
            norm_ratios.push(vec_norm(y) / vec_norm(x));
        } else {
            max_relative_error = max_relative_error.max(vec_norm(&diff));
            norm_ratios.push(T::nan());
        }
    }
    Ok(ShiftScalingReport {
        gamma,
        times,
        norm_ratios,
        max_relative_error,
    })
}
