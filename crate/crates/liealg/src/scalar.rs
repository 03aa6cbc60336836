use std::fmt::Debug;
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

/// Coefficient field for forms. Needs only field operations, so exact
/// rationals work as well as floats.
pub trait Scalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
