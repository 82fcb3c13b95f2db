//! Scalar abstraction used throughout the crate.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable by every numerical routine.
///
/// Implemented for `f32`, `f64` and [`crate::DoubleDouble`]. Tabulated
/// coefficients (quadrature nodes, Lanczos weights) are stored as `f64`, so
/// those pieces never exceed double accuracy even for wider types.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self;

    /// Converts a count.
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f32 {
    fn lit(v: f64) -> Self {
        v as f32
    }
}

impl Real for f64 {
    fn lit(v: f64) -> Self {
        v
    }
}

/// Magnitude that may be infinite, such as a total Lévy mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn value(&self) -> T {
        match *self {
            Extended::Finite(v) => v,
            Extended::Infinite => T::infinity(),
        }
    }

    pub fn from_value(v: T) -> Self {
        if v.is_finite() {
            Extended::Finite(v)
        } else {
            Extended::Infinite
        }
    }
}
