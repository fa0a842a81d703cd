//! Scalar abstractions.
//!
//! The symbolic side of the crate is written against [`Exact`], a field of
//! exact numbers (arbitrary-precision rationals in practice). The numerical
//! side is written against [`Real`], implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignRef, Signed, ToPrimitive};

/// Exact field used for series coefficients.
pub trait Exact: NumAssignRef + Signed + Clone + Debug + Display + Send + Sync + 'static {
    fn from_int(value: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Nearest double; used only when a series is evaluated numerically.
    fn to_f64(&self) -> f64;

    /// Parses `p` or `p/q` with integer `p`, `q`.
    fn parse(text: &str) -> Option<Self>;

    /// True when the value is an integer (denominator one).
    fn is_integer(&self) -> bool;
}

impl Exact for BigRational {
    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d == BigInt::from(0) {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => Some(BigRational::from_integer(text.parse().ok()?)),
        }
    }

    fn is_integer(&self) -> bool {
        BigRational::is_integer(self)
    }
}

/// Floating-point scalar used by evaluation, integration and error analysis.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64` constants.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
