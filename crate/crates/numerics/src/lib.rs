//! Numerical kernels shared by the geometry and gauge-theory crates.
//!
//! Everything is generic over `num_traits::Float`, so the same code runs in f32 or f64.

pub mod fit;
pub mod ode;
pub mod quad;
pub mod series;

pub use fit::{bisect, linear_fit, LineFit};
pub use ode::{Dopri5, OdeOptions, OdeStatus, Solution};
pub use quad::{gauss_kronrod, QuadError, Quadrature};
pub use series::Series;

use num_traits::{Float, FromPrimitive};

/// Float constant from an f64 literal.
#[inline]
pub fn lit<F: FromPrimitive>(x: f64) -> F {
    F::from_f64(x).expect("representable constant")
}

pub trait Num: Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static {}
impl<F: Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static> Num for F {}
