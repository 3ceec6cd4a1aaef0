//! Certified bounds on the feedback stabilization radius of discrete-time
//! switched linear systems `x(t+1) = A_σ(t) x(t)`, together with grid
//! control-Lyapunov functions, an exact orbit analysis of the
//! Stanford–Urbano pair and a continuous-time sample-and-hold simulator.
//!
//! Numerical code is generic over [`Scalar`] (`f32`/`f64`); the aliases at
//! the crate root fix the usual `f64` instantiation.

pub mod bounds;
pub mod ct_sim;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod lyapunov;
pub mod orbit;
pub mod scalar;
pub mod switching;

pub use error::{Error, Result};
pub use linalg::{Enumerator, Matrix, MatrixSet, ProductEntry, Word};
pub use scalar::Scalar;
pub use switching::SwitchingRule;

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type MatrixSet64 = MatrixSet<f64>;
pub type MatrixSet32 = MatrixSet<f32>;
pub type RationalMatrix = Matrix<num_rational::Rational64>;
