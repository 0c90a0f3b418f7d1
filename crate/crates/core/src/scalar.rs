use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used throughout the estimators: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + rustfft::FftNum
    + 'static
{
    /// Lossless for every `f64` that is representable, rounding otherwise.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to Scalar")
    }

    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize converts to Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
