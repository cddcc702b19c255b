//! Scalar abstraction shared by every numerical routine.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

mod wide;

pub use wide::Wide;

const EULER_DIGITS: &str =
    "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467";

/// Floating-point scalar accepted by the analytical routines.
///
/// Implemented for `f32`, `f64` and [`Wide`].
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (exact for every implementor).
    fn lit(x: f64) -> Self;

    /// Parses a decimal constant to full working precision.
    fn parse_lit(s: &str) -> Self;

    /// Nearest `f64`.
    fn to_f64_lossy(self) -> f64;

    /// Euler's constant.
    fn euler() -> Self {
        Self::parse_lit(EULER_DIGITS)
    }

    fn from_i(n: i64) -> Self {
        Self::lit(n as f64)
    }

    fn from_u(n: usize) -> Self {
        Self::lit(n as f64)
    }

    /// True when the working precision is well beyond double.
    fn is_extended() -> bool {
        Self::epsilon().to_f64_lossy() < 1e-20
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    fn parse_lit(s: &str) -> Self {
        s.parse().expect("valid constant literal")
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    fn parse_lit(s: &str) -> Self {
        s.parse().expect("valid constant literal")
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for Wide {
    #[inline]
    fn lit(x: f64) -> Self {
        Wide(f256::f256::from(x))
    }
    fn parse_lit(s: &str) -> Self {
        wide::parse_wide(s)
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64_nearest()
    }
    fn from_i(n: i64) -> Self {
        Wide(f256::f256::from(n))
    }
}

/// Converts between scalar types through the nearest `f64`.
#[inline]
pub fn cast<S: Real, T: Real>(x: S) -> T {
    T::lit(x.to_f64_lossy())
}
