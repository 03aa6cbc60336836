//! Quantitative behaviour of Clarke's instantons as x₁ → ∞ and asymptotic
//! decay rates of the ℝ⁴×S³ metrics.
//!
//! Everything here is f64: the inputs are closed forms evaluated at extreme
//! parameters, and the outputs feed fits and CSV files.

mod alc;
mod bubble;
mod energy;

pub use alc::{alc_deviation, alc_rate_fit, AlcFit, AsymptoticModel};
pub use bubble::{
    asd_reference, delta_power_law, pulled_back_coefficient, rescale_bubble, BubbleProfile,
};
pub use energy::{
    energy_current, energy_current_in, energy_target, monte_carlo_s3_volume, orbit_volume_density,
    s3_volume, Radial, Window, ETA_VOLUME,
};

use g2_geometries::GeomError;
use g2_instantons::InstantonError;
use g2_numerics::QuadError;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("x1 = {0} is outside the asymptotic regime (need x1 >= 100)")]
    NotAsymptotic(f64),
    #[error("matching rule does not bracket: {0}")]
    Bracket(String),
    #[error("integrand not integrable at infinity (fitted slope {slope:.3})")]
    NonIntegrable { slope: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Instanton(#[from] InstantonError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// One row of the x₁ → ∞ convergence series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub x1: f64,
    pub sup_distance: f64,
    pub delta: f64,
    pub energy: f64,
}

/// Bubble and energy data for each x₁, computed in parallel, in input order.
pub fn convergence_series(
    x1s: &[f64],
    lambda: f64,
    window: Window,
) -> Result<Vec<ConvergenceRow>, AnalysisError> {
    x1s.par_iter()
        .map(|&x1| {
            let b = rescale_bubble(x1, lambda)?;
            let energy = energy_current(x1, window)?;
            Ok(ConvergenceRow {
                x1,
                sup_distance: b.sup_distance,
                delta: b.delta,
                energy,
            })
        })
        .collect()
}
