use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating-point type the estimators are generic over.
///
/// Implemented for `f32` and `f64`. Statistics whose reference
/// distributions are only available in double precision (p-values,
/// response-surface critical values) are evaluated in `f64` and converted
/// back.
pub trait Scalar:
    'static
    + Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Least representable value greater than `self`.
    fn step_up(self) -> Self;

    /// Greatest representable value less than `self`.
    fn step_down(self) -> Self;
}

impl Scalar for f32 {
    fn step_up(self) -> Self {
        self.next_up()
    }
    fn step_down(self) -> Self {
        self.next_down()
    }
}

impl Scalar for f64 {
    fn step_up(self) -> Self {
        self.next_up()
    }
    fn step_down(self) -> Self {
        self.next_down()
    }
}

pub(crate) fn mean<T: Scalar>(xs: &[T]) -> T {
    if xs.is_empty() {
        return T::nan();
    }
    xs.iter().copied().sum::<T>() / T::from_count(xs.len())
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn sum_sq<T: Scalar>(xs: &[T]) -> T {
    xs.iter().map(|&x| x * x).sum()
}
