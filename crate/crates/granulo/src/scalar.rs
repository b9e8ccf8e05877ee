//! Scalar abstraction for the geometric and gradation math.
//!
//! Point-set geometry and gradation curves are plain real arithmetic, so they
//! are written against [`Real`] and instantiated for `f32`/`f64`. The raster
//! pipeline itself works on 8-bit intensities and pins `f64` for its
//! parameters; see the type aliases at the crate root.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable by the generic geometry/gradation code.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Debug + Default + Copy + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant")
    }

    /// Lossy conversion to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}
