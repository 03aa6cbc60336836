//! Decay of a metric profile toward its conical or ALC model.

use g2_geometries::{bggg_asymptotic, cone_state, Profile, State};
use g2_numerics::{linear_fit, LineFit};

use crate::AnalysisError;

/// The model end; points are identified by matching B₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoticModel {
    /// The G2 cone over the nearly Kähler S³×S³ (AC).
    Cone,
    /// dt² + (2η₁⁺)² + the cone over the base (ALC, m = 1).
    Bggg,
}

impl AsymptoticModel {
    /// Model radius and state with the same B₁.
    fn matched(self, b1: f64) -> (f64, State) {
        match self {
            AsymptoticModel::Cone => {
                let t = 3f64.sqrt() * b1;
                (t, cone_state(t))
            }
            AsymptoticModel::Bggg => {
                let t = 1.5 * b1;
                (t, bggg_asymptotic(t))
            }
        }
    }
}

/// |φ − φ∞| in the model metric at profile coordinate ρ, and the model radius.
///
/// In the model's orthonormal coframe the components of φ = dt∧ω + γ₁ are
/// products of the ratios Aᵢ/aᵢ, Bᵢ/bᵢ and 1/(dt_model/dt); φ∞ has them all 1.
pub fn alc_deviation(
    profile: &dyn Profile<f64>,
    model: AsymptoticModel,
    rho: f64,
) -> Result<(f64, f64), AnalysisError> {
    let p = profile.at(rho)?;
    let (t, h) = model.matched(p.state.b[0]);
    // dt_model/dt = d(B₁ scale)/dt
    let speed = p.rate.b[0] / h_rate_b1(model);
    let ra: Vec<f64> = (0..3).map(|i| p.state.a[i] / h.a[i]).collect();
    let rb: Vec<f64> = (0..3).map(|i| p.state.b[i] / h.b[i]).collect();
    let mut sq = 0.0;
    for i in 0..3 {
        sq += (ra[i] * rb[i] / speed - 1.0).powi(2);
    }
    sq += (rb[0] * rb[1] * rb[2] - 1.0).powi(2);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        sq += (ra[i] * ra[j] * rb[k] - 1.0).powi(2);
    }
    Ok((sq.sqrt(), t))
}

/// dB₁/dt of the model.
fn h_rate_b1(model: AsymptoticModel) -> f64 {
    match model {
        AsymptoticModel::Cone => 1.0 / 3f64.sqrt(),
        AsymptoticModel::Bggg => 2.0 / 3.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlcFit {
    /// Fitted rate; −∞ when the deviation vanishes to rounding.
    pub nu: f64,
    pub fit: Option<LineFit<f64>>,
    pub radii: Vec<f64>,
    pub deviations: Vec<f64>,
}

/// Log-log slope of |φ − φ∞| against the model radius over [ρ_lo, ρ_hi].
pub fn alc_rate_fit(
    profile: &dyn Profile<f64>,
    model: AsymptoticModel,
    rho_lo: f64,
    rho_hi: f64,
) -> Result<AlcFit, AnalysisError> {
    let n = 40;
    let mut radii = Vec::with_capacity(n);
    let mut deviations = Vec::with_capacity(n);
    for k in 0..n {
        let rho = rho_lo * (rho_hi / rho_lo).powf(k as f64 / (n - 1) as f64);
        let (dev, t) = alc_deviation(profile, model, rho)?;
        radii.push(t);
        deviations.push(dev);
    }
    // a profile compared with itself only differs by rounding in the ratios
    if deviations.iter().all(|d| *d <= 64.0 * f64::EPSILON) {
        return Ok(AlcFit {
            nu: f64::NEG_INFINITY,
            fit: None,
            radii,
            deviations,
        });
    }
    if deviations.iter().any(|d| !(*d > 0.0)) {
        return Err(AnalysisError::NoConvergence(
            "deviation vanishes at isolated radii".into(),
        ));
    }
    let xs: Vec<f64> = radii.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = deviations.iter().map(|d| d.ln()).collect();
    let fit = linear_fit(&xs, &ys)
        .ok_or_else(|| AnalysisError::NoConvergence("degenerate fit".into()))?;
    if fit.slope >= 0.0 {
        return Err(AnalysisError::NoConvergence(format!(
            "deviation does not decay (slope {:.3})",
            fit.slope
        )));
    }
    Ok(AlcFit {
        nu: fit.slope,
        fit: Some(fit),
        radii,
        deviations,
    })
}
