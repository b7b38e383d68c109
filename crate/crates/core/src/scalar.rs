//! Floating-point scalar abstraction shared by every engine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the models are evaluated in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for analytic identities such as "table entries sum to one".
    fn identity_tolerance() -> Self;

    /// Lossy conversion from an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn identity_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn identity_tolerance() -> Self {
        1e-5
    }
}
