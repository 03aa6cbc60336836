use std::sync::Arc;

use g2_geometries::Profile;
use g2_instantons::{launch, launch_with, Ansatz, Boundary, LaunchOptions, Trajectory};
use g2_numerics::OdeStatus;

use crate::fit::coefficient_rates;
use crate::ShootError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    GlobalBounded,
    CurvatureUnbounded,
    Abelian,
    Undetermined,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::GlobalBounded => "GlobalBounded",
            Verdict::CurvatureUnbounded => "CurvatureUnbounded",
            Verdict::Abelian => "Abelian",
            Verdict::Undetermined => "Undetermined",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Time of blow-up, for CurvatureUnbounded.
    pub t_blow: Option<f64>,
    /// Limits of the connection coefficients, for GlobalBounded.
    pub asymptote: Option<Vec<f64>>,
    /// Largest |F| over the accepted steps.
    pub curvature_sup: f64,
    /// Why a cell is Undetermined.
    pub reason: Option<String>,
}

impl Classification {
    pub fn undetermined(reason: impl Into<String>, curvature_sup: f64) -> Self {
        Self { verdict: Verdict::Undetermined, t_blow: None, asymptote: None, curvature_sup, reason: Some(reason.into()) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootOptions {
    /// Integrator tolerance.
    pub tol: f64,
    /// Classification horizon; 200 × singular-orbit scale when `None`.
    pub t_max: Option<f64>,
    /// Integrate on to 2 t_max and demand the same verdict there.
    pub recheck: bool,
    /// Coefficient magnitude counted as blow-up.
    pub blow_coefficient: f64,
    /// |F| above this multiple of |F(1)| counts as blow-up.
    pub blow_curvature: f64,
    /// Allowed variation of the extrapolated limits over the final decade.
    pub tail_tol: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self { tol: 1e-10, t_max: None, recheck: true, blow_coefficient: 1e8, blow_curvature: 1e6, tail_tol: 1e-6 }
    }
}

/// Size of the singular orbit, B₁ there.
pub fn singular_orbit_scale(profile: &dyn Profile<f64>) -> f64 {
    profile.at_sigma(0.0).state.b[0]
}

/// Launch from `data` and classify the trajectory.
pub fn shoot(
    data: &Boundary,
    profile: Arc<dyn Profile<f64>>,
    opts: &ShootOptions,
) -> Result<(Trajectory, Classification), ShootError> {
    let horizon = opts.t_max.unwrap_or(200.0 * singular_orbit_scale(profile.as_ref()));
    let end = if opts.recheck { 2.0 * horizon } else { horizon };
    let launch_opts = LaunchOptions { tol: opts.tol, t_max: end, blow_up: opts.blow_coefficient, ..Default::default() };

    let early = launch(data, profile.clone(), &LaunchOptions { t_max: 1.0, ..launch_opts })?;
    let f_one = early.sample(1.0).map(|s| s.curvature_norm_sq().sqrt()).unwrap_or(0.0);
    let limit = opts.blow_curvature * f_one;
    let traj = launch_with(data, profile, &launch_opts, |s| {
        if s.t > 1.0 && f_one > 0.0 {
            let f = s.curvature_norm_sq().sqrt();
            if f > limit {
                return Some(format!("|F| = {f:e} exceeds {:e} x |F(1)|", opts.blow_curvature));
            }
        }
        None
    })?;
    let curvature_sup = (0..traj.grid.len())
        .filter_map(|i| traj.sample(traj.grid[i]))
        .map(|s| s.curvature_norm_sq().sqrt())
        .fold(0.0, f64::max);

    let class = match &traj.status {
        OdeStatus::Stopped { t, .. } if *t <= horizon => Classification {
            verdict: Verdict::CurvatureUnbounded,
            t_blow: Some(*t),
            asymptote: None,
            curvature_sup,
            reason: None,
        },
        OdeStatus::Stopped { t, reason } => Classification::undetermined(
            format!("bounded to t_max = {horizon} but blows up at t = {t} ({reason})"),
            curvature_sup,
        ),
        OdeStatus::Completed => {
            let first = bounded_verdict(&traj, horizon, opts.tail_tol);
            let second = if opts.recheck { bounded_verdict(&traj, end, opts.tail_tol) } else { first.clone() };
            match (first, second) {
                (Ok(a), Ok(b)) => {
                    let abelian = traj.ansatz == Ansatz::Bggg && is_abelian(&traj);
                    Classification {
                        verdict: if abelian { Verdict::Abelian } else { Verdict::GlobalBounded },
                        t_blow: None,
                        asymptote: if abelian { None } else { Some(if opts.recheck { b } else { a }) },
                        curvature_sup,
                        reason: None,
                    }
                }
                (Err(e), _) => Classification::undetermined(format!("at t_max = {horizon}: {e}"), curvature_sup),
                (Ok(_), Err(e)) => Classification::undetermined(format!("verdict flips at 2 t_max: {e}"), curvature_sup),
            }
        }
        other => Classification::undetermined(format!("integration failed: {other:?}"), curvature_sup),
    };
    Ok((traj, class))
}

/// g⁺ = f⁻ = g⁻ = 0 along the whole trajectory: the connection reduces to U(1).
fn is_abelian(traj: &Trajectory) -> bool {
    traj.values.iter().all(|v| v[1..].iter().all(|x| *x == 0.0))
}

/// Log-spaced times in [t/10, t].
pub(crate) fn final_decade(t: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t * 10f64.powf(-1.0 + i as f64 / (n - 1) as f64)).collect()
}

/// Raw coefficients and the limit estimate c + sċ + s²c̈/6 at time s, the latter
/// exact for c = L + a s⁻² + b s⁻³. c̈ is a central difference of the exact ċ.
pub(crate) fn tail_estimates(traj: &Trajectory, s: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let h = 1e-2 * s;
    let hi = (s + h).min(traj.t_end());
    let (c, dc) = coefficient_rates(&traj.sample(s)?);
    let (_, dc_hi) = coefficient_rates(&traj.sample(hi)?);
    let (_, dc_lo) = coefficient_rates(&traj.sample(s - h)?);
    let limit = (0..c.len()).map(|k| c[k] + s * dc[k] + s * s * (dc_hi[k] - dc_lo[k]) / (hi - s + h) / 6.0).collect();
    Some((c, limit))
}

fn spread(rows: &[Vec<f64>], k: usize) -> f64 {
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[k]), hi.max(r[k])));
    hi - lo
}

/// |F| non-increasing over the decade ending at `t`, and every coefficient settled
/// to `tail_tol` over [t/2, t]. A coefficient counts as settled when either its raw
/// values or its extrapolated limits are; the latter handles algebraic approach,
/// the former components that decay exponentially into integrator noise.
fn bounded_verdict(traj: &Trajectory, t: f64, tail_tol: f64) -> Result<Vec<f64>, String> {
    let mut prev = f64::INFINITY;
    for s in final_decade(t, 41) {
        let sample = traj.sample(s).ok_or_else(|| format!("no sample at t = {s}"))?;
        let f = sample.curvature_norm_sq().sqrt();
        if f > prev * (1.0 + 1e-9) + 1e-14 {
            return Err(format!("|F| increases near t = {s:.4}"));
        }
        prev = f;
    }
    let (raw, ext): (Vec<Vec<f64>>, Vec<Vec<f64>>) = (0..=20)
        .map(|i| tail_estimates(traj, t * (0.5 + 0.025 * i as f64)).ok_or_else(|| format!("no sample near t = {t}")))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .unzip();
    let mut limit = Vec::new();
    for k in 0..raw[0].len() {
        let (r, e) = (spread(&raw, k), spread(&ext, k));
        if r < tail_tol {
            limit.push(raw[20][k]);
        } else if e < tail_tol {
            limit.push(ext[20][k]);
        } else {
            return Err(format!("coefficient {k} tail variation {:e}", r.min(e)));
        }
    }
    Ok(limit)
}
