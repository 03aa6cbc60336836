//! Shooting from the singular orbit of ℝ⁴×S³.
//!
//! A launch is classified by what happens before `t_max` and again before
//! `2 t_max`: blow-up of the curvature or of a coefficient, or convergence of the
//! connection coefficients to a limit with decaying curvature. Scans run cells in
//! parallel and report them in grid order.

mod classify;
mod fit;
mod scan;

pub use classify::{shoot, singular_orbit_scale, Classification, ShootOptions, Verdict};
pub use fit::{coefficient_rates, connection_distance, curvature_decay_fit, decay_fit, holonomy_at_infinity, A_INFINITY, KAPPA};
pub use scan::{boundary_for, scan, Axis, Region, RegionSummary, ScanCell, ScanReport, ScanSpec};

use g2_instantons::InstantonError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ShootError {
    #[error(transparent)]
    Instanton(#[from] InstantonError),
    #[error("trajectory ends at t = {t_end}, the fit needs t >= {need}")]
    InsufficientTail { t_end: f64, need: f64 },
    #[error("holonomy needs a GlobalBounded limit, got {0}")]
    NotBounded(String),
    #[error("fit failed: {0}")]
    Fit(String),
}
