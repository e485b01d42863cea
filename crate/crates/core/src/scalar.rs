//! Scalar abstraction.
//!
//! Every numerical routine in the crate is written against [`Real`], so the
//! same code runs in single or double precision. Complex entries are
//! [`num_complex::Complex<T>`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

use crate::tolerance::Tolerances;

/// Real floating point type usable as the base field of an operator.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance set appropriate for this precision.
    fn default_tolerances() -> Tolerances;

    /// Lossy conversion from an `f64` literal or configuration value.
    fn of(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("f64 is representable in every Real")
    }

    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tolerances() -> Tolerances {
        Tolerances::default()
    }
}

impl Real for f32 {
    fn default_tolerances() -> Tolerances {
        Tolerances::single_precision()
    }
}

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}
