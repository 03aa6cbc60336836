//! Rescaling Clarke's instantons at the associative S³.

use g2_geometries::{bs_canonical, Profile};
use g2_instantons::clarke_coefficient;
use g2_numerics::{linear_fit, LineFit};

use crate::AnalysisError;

const SAMPLES: usize = 200;

/// A^{x₁} pulled back to the unit ball of a normal fibre, as the coefficient of
/// ΣTᵢ⊗ηᵢ⁺ against unit-ball radius τ.
#[derive(Clone, Debug, PartialEq)]
pub struct BubbleProfile {
    pub x1: f64,
    pub lambda: f64,
    pub delta: f64,
    pub radii: Vec<f64>,
    pub samples: Vec<f64>,
    pub reference: Vec<f64>,
    pub sup_distance: f64,
    /// Same for d/dτ.
    pub derivative_distance: f64,
}

/// λτ²/(1 + λτ²) and its τ-derivative.
pub fn asd_reference(lambda: f64, tau: f64) -> (f64, f64) {
    let q = lambda * tau * tau;
    (q / (1.0 + q), 2.0 * lambda * tau / (1.0 + q).powi(2))
}

/// Coefficient of (s^p_δ)*A^{x₁} at unit-ball radius τ, with its τ-derivative.
/// The fibre radius is arc length t from the S³.
pub fn pulled_back_coefficient(x1: f64, delta: f64, tau: f64) -> Result<(f64, f64), AnalysisError> {
    let t = delta * tau;
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    let r = bs_canonical::<f64>().rho_of_t(t)?;
    let c = clarke_coefficient(x1, r)?;
    Ok((c.value, delta * c.rate))
}

impl BubbleProfile {
    /// su(2)-valued Cartesian components A_μ^a of the pulled-back connection at
    /// x ∈ B₁ in the fibre over p ∈ S³, in the gauge rotated by p.
    pub fn components(&self, p: [f64; 4], x: [f64; 4]) -> Result<[[f64; 4]; 3], AnalysisError> {
        let n2: f64 = x.iter().map(|v| v * v).sum();
        let (c, _) = pulled_back_coefficient(self.x1, self.delta, n2.sqrt())?;
        // Im(x̄ dx)/|x|²
        let mut a = [[0.0; 4]; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            a[i][0] = -x[1 + i];
            a[i][1 + i] = x[0];
            a[i][1 + j] = x[1 + k];
            a[i][1 + k] = -x[1 + j];
        }
        let rot = rotation(p);
        let mut out = [[0.0; 4]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (mu, v) in row.iter_mut().enumerate() {
                *v = c / n2 * (0..3).map(|j| rot[i][j] * a[j][mu]).sum::<f64>();
            }
        }
        Ok(out)
    }

    /// The coefficient read off from the gauge-invariant |A|, |A|² = 3c²/|x|².
    pub fn coefficient_at(&self, p: [f64; 4], x: [f64; 4]) -> Result<f64, AnalysisError> {
        let a = self.components(p, x)?;
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let norm = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        Ok(n * norm / 3f64.sqrt())
    }
}

/// Ad of a unit quaternion on Im ℍ.
fn rotation(p: [f64; 4]) -> [[f64; 3]; 3] {
    let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [w, x, y, z] = p.map(|v| v / n);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// δ is fixed by matching the pulled-back coefficient at τ = ½ to the reference
/// value λ/4/(1 + λ/4), on the rising part of the profile.
pub fn rescale_bubble(x1: f64, lambda: f64) -> Result<BubbleProfile, AnalysisError> {
    if !(x1 >= 100.0) {
        return Err(AnalysisError::NotAsymptotic(x1));
    }
    if !(lambda > 0.0) {
        return Err(AnalysisError::Bracket(format!(
            "scale lambda = {lambda} must be positive"
        )));
    }
    let target = asd_reference(lambda, 0.5).0;
    let at_half = |d: f64| pulled_back_coefficient(x1, d, 0.5).map(|c| c.0 - target);

    // walk δ up from far inside the bubble until the coefficient first passes the target
    let mut lo = 1e-3 / x1.sqrt();
    if at_half(lo)? >= 0.0 {
        return Err(AnalysisError::Bracket(format!(
            "coefficient already above {target} at delta = {lo:e}"
        )));
    }
    let mut hi = lo;
    loop {
        hi *= 2.0;
        if at_half(hi)? >= 0.0 {
            break;
        }
        if pulled_back_coefficient(x1, hi, 0.5)?.1 <= 0.0 || hi > 1e3 {
            return Err(AnalysisError::Bracket(format!(
                "profile stops rising below {target}"
            )));
        }
        lo = hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at_half(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = 0.5 * (lo + hi);

    let mut profile = BubbleProfile {
        x1,
        lambda,
        delta,
        radii: Vec::with_capacity(SAMPLES),
        samples: Vec::with_capacity(SAMPLES),
        reference: Vec::with_capacity(SAMPLES),
        sup_distance: 0.0,
        derivative_distance: 0.0,
    };
    for k in 1..=SAMPLES {
        let tau = k as f64 / SAMPLES as f64;
        let (c, dc) = pulled_back_coefficient(x1, delta, tau)?;
        let (e, de) = asd_reference(lambda, tau);
        profile.radii.push(tau);
        profile.samples.push(c);
        profile.reference.push(e);
        profile.sup_distance = profile.sup_distance.max((c - e).abs());
        profile.derivative_distance = profile.derivative_distance.max((dc - de).abs());
    }
    Ok(profile)
}

/// Fit of log δ against log x₁.
pub fn delta_power_law(profiles: &[BubbleProfile]) -> Option<LineFit<f64>> {
    let xs: Vec<f64> = profiles.iter().map(|p| p.x1.ln()).collect();
    let ys: Vec<f64> = profiles.iter().map(|p| p.delta.ln()).collect();
    linear_fit(&xs, &ys)
}
