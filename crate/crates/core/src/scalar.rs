//! Scalar abstraction shared by every numerical kernel in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar usable by the grids, correctors, solvers and norms.
///
/// Implemented for `f32` and `f64`. Everything numerically delicate (slope
/// fits over many decades, tiny viscosities) is exercised with `f64`; `f32`
/// is supported for the pointwise kernels and the geometry.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + FftNum + Default + Debug + Display + LowerExp + crate::linalg::Elem
{
    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which never happens for finite literals on `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
