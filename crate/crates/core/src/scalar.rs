//! Scalar abstractions shared by every module.
//!
//! [`Scalar`] is the minimal ring structure needed to build the Pauli and
//! Dirac matrices, so the Clifford relations can be checked over `i64`
//! without rounding. [`Real`] adds what the spectral and symbol code needs
//! (square roots, comparisons, constants) and is implemented for `f32` and
//! `f64`.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Copy + Num + Neg<Output = Self> + PartialOrd + ToPrimitive + Debug {}

impl<T> Scalar for T where T: Copy + Num + Neg<Output = T> + PartialOrd + ToPrimitive + Debug {}

pub trait Real: Scalar + Float + FloatConst + FromPrimitive + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
