use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Floating-point element type of matrices and value tables: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + Signed
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Remainder in `[0, period)`.
    fn rem_euclid(self, period: Self) -> Self {
        let r = self % period;
        if r < Self::zero() {
            r + period
        } else {
            r
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("usize representable")
}
