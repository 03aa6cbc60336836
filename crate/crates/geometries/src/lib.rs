//! Closed-form cohomogeneity-one G2 metrics.
//!
//! Profiles live on S³×S³ (Bryant–Salamon and BGGG on ℝ⁴×S³) and on the twistor
//! spaces of S⁴ and CP² (the Λ²₋ metrics). Each closed form is also written in
//! σ = √(ρ − ρ₀), the natural smooth coordinate at the singular orbit, which is
//! what the instanton integrators use.

mod lambda2;
mod profiles;
mod sasaki;
mod su3;

pub use lambda2::{lambda2_structure, lambda2s4_profile, Lambda2Base, Lambda2Point};
pub use profiles::{
    bggg_asymptotic, bggg_canonical, bggg_profile, bs_canonical, bs_spinor_profile, cone_state, t_of_r, Bggg,
    BryantSalamon, Family, MetricSeries, Profile, ProfileSample, Rescaled,
};
pub use sasaki::{sasaki_einstein_s2s3, AlcData, SasakiEinstein};
pub use su3::{g2_from_su3, su3_forms, G2Structure, SU3StructureState, Su3Forms, Symmetry};

use g2_liealg::{FormError, Scalar};
use g2_numerics::QuadError;
use num_traits::FloatConst;

/// Real scalar usable both for forms and for numerics.
pub trait Real: g2_numerics::Num + FloatConst + Scalar {}
impl<T: g2_numerics::Num + FloatConst + Scalar> Real for T {}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("coordinate {value} below the domain start {start}")]
    Domain { value: f64, start: f64 },
    #[error("metric coefficient not positive: {0}")]
    Degenerate(String),
    #[error("no regular expansion at the singular orbit for this profile")]
    NoSeries,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub type State = SU3StructureState<f64>;
pub type BsProfile = Rescaled<f64, BryantSalamon<f64>>;
pub type BgggProfile = Rescaled<f64, Bggg<f64>>;

pub fn f64_of<T: Real>(x: T) -> f64 {
    num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN)
}
