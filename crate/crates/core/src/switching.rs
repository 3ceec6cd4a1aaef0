use crate::scalar::Scalar;

/// A state-feedback switching law `x ↦ mode index`.
///
/// Rules used for stabilization are 0-homogeneous: they depend on `x / |x|`
/// only.
pub trait SwitchingRule<T> {
    fn select(&self, x: &[T]) -> usize;
}

impl<T: Scalar, F: Fn(&[T]) -> usize + ?Sized> SwitchingRule<T> for F {
    fn select(&self, x: &[T]) -> usize {
        self(x)
    }
}
