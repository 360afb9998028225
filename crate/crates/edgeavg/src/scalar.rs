//! Scalar abstraction: the whole engine is generic over the floating-point
//! type. `f64` is the default everywhere and the only type the CLI uses;
//! `f32` works for quick low-precision experiments.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the simulation core.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Display
    + Debug
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; exact when `Self = f64`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Conversion to `f64` for reporting and serialization.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// Tolerance for "sums to a fixed constant" validations over `n` entries:
    /// the contract value 1e-9, widened to a few ulps at scale for types
    /// whose epsilon exceeds it (f32).
    #[inline]
    fn sum_tolerance(n: usize) -> Self {
        let ulps = Self::epsilon() * Self::of(8.0 * n as f64);
        Self::of(1e-9).max(ulps)
    }
}

impl Real for f32 {}
impl Real for f64 {}
