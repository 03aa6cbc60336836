//! SU(2)²×U(1)-invariant G2-instantons on ℝ⁴×S³ and the Λ²₋ examples.
//!
//! The connection ansatz on S³×S³ is
//! A = A₁f⁺T₁η₁⁺ + A₂g⁺(T₂η₂⁺ + T₃η₃⁺) + B₁f⁻T₁η₁⁻ + B₂g⁻(T₂η₂⁻ + T₃η₃⁻);
//! the SU(2)³-invariant case f⁺ = g⁺ = x, f⁻ = g⁻ = y is Clarke's system.

mod boundary;
mod closed;
mod connection;
mod lambda2;
mod residual;
mod rhs;
mod series;
mod trajectory;

pub use boundary::{BoundaryData, Bundle};
pub use closed::{
    abelian_bggg, abelian_bs, alim_closed_form, alim_coefficient, bggg_abelian_profiles, clarke_closed_form,
    clarke_coefficient, Jet,
};
pub use connection::{curvature_norm_sq, InvariantConnection};
pub use lambda2::{lambda2_instanton, spin_connection, su3_family_u, Lambda2Instanton, UcValue};
pub use residual::{cone_forms, cy_monopole_residual, instanton_residual, ConeForms, Residual};
pub use rhs::{bggg_field, bggg_rhs, clarke_field, clarke_rhs, Arith, Val};
pub use series::{bggg_pid_b2p, series_start, SeriesStart, DEFAULT_ORDER};
pub use trajectory::{launch, launch_with, Ansatz, InstantonSample, InstantonTrajectory, LaunchOptions};

use g2_geometries::GeomError;
use g2_liealg::FormError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum InstantonError {
    #[error("metric coefficient vanishes at t = {0}; use a series start")]
    Singular(f64),
    #[error("closed form has a pole at r = {0}")]
    Pole(f64),
    #[error("series recurrence has an unfixed free coefficient at order {0}")]
    FreeCoefficient(i32),
    #[error("boundary data inconsistent with the ODE at order {order} (defect {defect:e})")]
    Inconsistent { order: i32, defect: f64 },
    #[error("bundle {0:?} not available for this family")]
    Unsupported(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Form(#[from] FormError),
}

pub type Trajectory = InstantonTrajectory<f64>;
pub type Boundary = BoundaryData<f64>;
