use g2_instantons::{Ansatz, InstantonSample, Trajectory};
use g2_numerics::{linear_fit, LineFit};

use crate::classify::{final_decade, singular_orbit_scale, Classification, Verdict};
use crate::ShootError;

/// Coefficient of ΣTᵢ⊗ηᵢ⁺ in the canonical pseudo-Hermitian–Yang–Mills limit.
pub const A_INFINITY: f64 = 2.0 / 3.0;

/// Period normalization of the holonomy map: exp(κ c∞ T₁), so an angle of 2π
/// corresponds to a unit shift of the limiting η₁⁺ coefficient.
pub const KAPPA: f64 = std::f64::consts::TAU;

/// Connection coefficients and their t-derivatives at a sample, in the layout of
/// `InstantonTrajectory::coefficients`.
pub fn coefficient_rates(s: &InstantonSample<f64>) -> (Vec<f64>, Vec<f64>) {
    let (p, r) = (s.profile.state, s.profile.rate);
    let (m, dm) = match s.ansatz {
        Ansatz::Clarke => (vec![p.a[0], p.b[0]], vec![r.a[0], r.b[0]]),
        Ansatz::Bggg => (vec![p.a[0], p.a[1], p.b[0], p.b[1]], vec![r.a[0], r.a[1], r.b[0], r.b[1]]),
    };
    let c = s.u.iter().zip(&m).map(|(u, m)| u * m).collect();
    let dc = (0..m.len()).map(|i| s.du[i] * m[i] + s.u[i] * dm[i]).collect();
    (c, dc)
}

/// Pointwise norm of A − L where L has constant coefficients `limit`, using
/// |T|² = 2 and coframe lengths 2A, 2B.
pub fn connection_distance(s: &InstantonSample<f64>, limit: &[f64]) -> f64 {
    let (c, _) = coefficient_rates(s);
    let p = s.profile.state;
    let lens: Vec<(f64, f64)> = match s.ansatz {
        Ansatz::Clarke => vec![(3.0, p.a[0]), (3.0, p.b[0])],
        Ansatz::Bggg => vec![(1.0, p.a[0]), (2.0, p.a[1]), (1.0, p.b[0]), (2.0, p.b[1])],
    };
    c.iter()
        .zip(limit)
        .zip(lens)
        .map(|((c, l), (mult, len))| mult * 2.0 * (c - l).powi(2) / (4.0 * len * len))
        .sum::<f64>()
        .sqrt()
}

fn tail_fit(traj: &Trajectory, mut y: impl FnMut(&InstantonSample<f64>) -> f64) -> Result<LineFit<f64>, ShootError> {
    let need = 50.0 * singular_orbit_scale(traj.profile.as_ref());
    let t_end = traj.t_end();
    if !traj.completed() || t_end < need {
        return Err(ShootError::InsufficientTail { t_end, need });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for t in final_decade(t_end, 60) {
        let s = traj.sample(t).ok_or_else(|| ShootError::Fit(format!("no sample at {t}")))?;
        let v = y(&s);
        if !(v > 0.0) {
            return Err(ShootError::Fit(format!("non-positive value {v:e} at t = {t}")));
        }
        xs.push(t.ln());
        ys.push(v.ln());
    }
    linear_fit(&xs, &ys).ok_or_else(|| ShootError::Fit("degenerate fit".into()))
}

/// Log-log slope of |A − L| over the final decade of the trajectory.
pub fn decay_fit(traj: &Trajectory, limit: &[f64]) -> Result<LineFit<f64>, ShootError> {
    tail_fit(traj, |s| connection_distance(s, limit))
}

/// Log-log slope of |F| over the final decade.
pub fn curvature_decay_fit(traj: &Trajectory) -> Result<LineFit<f64>, ShootError> {
    tail_fit(traj, |s| s.curvature_norm_sq().sqrt())
}

/// Angle of exp(κ c∞ T₁) in [0, 2π), with c∞ the limit of the η₁⁺ coefficient.
/// Abelian trajectories converge as well and are accepted.
pub fn holonomy_at_infinity(traj: &Trajectory, class: &Classification) -> Result<f64, ShootError> {
    if traj.ansatz != Ansatz::Bggg {
        return Err(ShootError::NotBounded("holonomy at infinity is defined on the ALC end only".into()));
    }
    let c_inf = match (&class.verdict, &class.asymptote) {
        (Verdict::GlobalBounded, Some(lim)) => lim[0],
        (Verdict::Abelian, _) => {
            let s = traj.sample(traj.t_end()).ok_or_else(|| ShootError::Fit("empty trajectory".into()))?;
            let (c, dc) = coefficient_rates(&s);
            c[0] + 0.5 * s.t * dc[0]
        }
        (v, _) => return Err(ShootError::NotBounded(v.to_string())),
    };
    Ok((KAPPA * c_inf).rem_euclid(std::f64::consts::TAU))
}
