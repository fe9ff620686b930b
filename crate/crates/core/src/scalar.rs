//! Scalar abstraction for the linear-algebra layer.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the matrix and Lip-norm layers are generic over.
///
/// Implemented for `f32` and `f64`. The optimizers work in `f64` only.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Machine epsilon of the type.
    const EPSILON: f64;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion to `f64`.
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// A check tolerance: `base`, loosened to the precision floor of the type.
    fn tolerance(base: f64) -> Self {
        let floor = Self::EPSILON * 4096.0;
        Self::lit(base.max(floor))
    }
}

impl Real for f32 {
    const EPSILON: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;
}
