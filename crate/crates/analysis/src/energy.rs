//! The energy current (|F_{A^{x₁}}|² − |F_{A^lim}|²) dvol on Bryant–Salamon ℝ⁴×S³.

use std::f64::consts::PI;

use g2_geometries::{bs_canonical, BsProfile, Profile, ProfileSample, State};
use g2_instantons::{alim_coefficient, clarke_coefficient, Jet};
use g2_liealg::Coframe;
use g2_numerics::{gauss_kronrod, linear_fit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::AnalysisError;

/// ∫ η₁⁺η₂⁺η₃⁺η₁⁻η₂⁻η₃⁻ over S³×S³, where η± = (σ ± Σ)/2 for the left-invariant
/// forms of the two factors, dσᵢ = −2σⱼσₖ, each factor of volume 2π².
pub const ETA_VOLUME: f64 = PI * PI * PI * PI / 2.0;

/// Radial support of a window function f(t), with f ≡ 1 on the support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window {
    /// t ≤ radius.
    Ball {
        radius: f64,
    },
    /// inner ≤ t ≤ outer.
    Shell {
        inner: f64,
        outer: f64,
    },
    Everywhere,
}

impl Window {
    fn bounds(self) -> (f64, f64) {
        match self {
            Window::Ball { radius } => (0.0, radius),
            Window::Shell { inner, outer } => (inner, outer),
            Window::Everywhere => (0.0, f64::INFINITY),
        }
    }
}

/// Integration variable for the radial quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radial {
    /// σ = √(r − 1), smooth at the S³.
    Sigma,
    /// Arc length t.
    Arclength,
}

/// Orbit volume per unit t.
pub fn orbit_volume_density(s: &State) -> f64 {
    s.scales().iter().product::<f64>() * ETA_VOLUME
}

/// Vol(S³) of the singular orbit, 2π²B₁B₂B₃; round of radius B when the Bᵢ agree.
pub fn s3_volume(profile: &dyn Profile<f64>) -> f64 {
    let b = profile.at_sigma(0.0).state.b;
    2.0 * PI * PI * b[0] * b[1] * b[2]
}

/// 8π² Vol(S³) for the Bryant–Salamon metric.
pub fn energy_target() -> f64 {
    8.0 * PI * PI * s3_volume(&bs_canonical::<f64>())
}

/// Monte Carlo volume of Σ(2Bᵢηᵢ⁻)² on the singular S³, with
/// h = (cos θ e^{iξ₁}, sin θ e^{iξ₂}) and η⁻ = ½ Im(h̄ dh).
pub fn monte_carlo_s3_volume(b: [f64; 3], samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let box_volume = (PI / 2.0) * (2.0 * PI) * (2.0 * PI);
    let mut sum = 0.0;
    for _ in 0..samples {
        let th: f64 = rng.gen_range(0.0..PI / 2.0);
        let x1: f64 = rng.gen_range(0.0..2.0 * PI);
        let x2: f64 = rng.gen_range(0.0..2.0 * PI);
        let h = [
            th.cos() * x1.cos(),
            th.cos() * x1.sin(),
            th.sin() * x2.cos(),
            th.sin() * x2.sin(),
        ];
        let dh = [
            [
                -th.sin() * x1.cos(),
                -th.sin() * x1.sin(),
                th.cos() * x2.cos(),
                th.cos() * x2.sin(),
            ],
            [-th.cos() * x1.sin(), th.cos() * x1.cos(), 0.0, 0.0],
            [0.0, 0.0, -th.sin() * x2.sin(), th.sin() * x2.cos()],
        ];
        // rows: coordinate direction, columns: the three η⁻ lengths 2B·½ Im(h̄ ∂h)
        let m: Vec<[f64; 3]> = dh
            .iter()
            .map(|d| {
                let v = im_conj_mul(h, *d);
                [b[0] * v[0], b[1] * v[1], b[2] * v[2]]
            })
            .collect();
        sum += det3([m[0], m[1], m[2]]).abs();
    }
    box_volume * sum / samples as f64
}

fn im_conj_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 3] {
    // Im(ā b)
    [
        a[0] * b[1] - a[1] * b[0] - (a[2] * b[3] - a[3] * b[2]),
        a[0] * b[2] - a[2] * b[0] - (a[3] * b[1] - a[1] * b[3]),
        a[0] * b[3] - a[3] * b[0] - (a[1] * b[2] - a[2] * b[1]),
    ]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// c_x − c_lim = −2(r² + r + 1) / (r(r + 1)(3 + x₁(r² − 1))), free of cancellation.
fn clarke_minus_alim(x1: f64, r: f64) -> Jet<f64> {
    let n = r * r + r + 1.0;
    let q = 3.0 + x1 * (r * r - 1.0);
    let m = r * (r + 1.0) * q;
    let dn = 2.0 * r + 1.0;
    let dm = (2.0 * r + 1.0) * q + r * (r + 1.0) * 2.0 * x1 * r;
    let speed = (1.0 - r.powi(-3)).sqrt();
    Jet {
        value: -2.0 * n / m,
        rate: -2.0 * (dn * m - n * dm) / (m * m) * speed,
    }
}

/// |F_x|² − |F_l|² for c ΣTᵢηᵢ⁺ connections, componentwise as (F_x − F_l)·(F_x + F_l)
/// with F_x − F_l built from the exact difference `d`.
fn plus_curvature_difference(x: Jet<f64>, l: Jet<f64>, d: Jet<f64>, s: &State) -> f64 {
    let alg = Coframe::s3xs3();
    let len = s.scales();
    let vec = |c: f64, slot: usize| -> [f64; 3] {
        let mut v = [0.0; 3];
        if (1..=3).contains(&slot) {
            v[slot - 1] = c;
        }
        v
    };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut total = 0.0;
    for k in 1..=3 {
        total += d.rate * (x.rate + l.rate) / (len[k - 1] * len[k - 1]);
    }
    for i in 1..7 {
        for j in (i + 1)..7 {
            let f = |c: f64| {
                let mut v = cross(vec(c, i), vec(c, j)).map(|e| 2.0 * e);
                for k in 1..=3 {
                    let sc = *alg.structure(k, i, j);
                    for (a, e) in v.iter_mut().enumerate() {
                        *e -= vec(c, k)[a] * sc;
                    }
                }
                v
            };
            let mut diff = [0.0; 3];
            let dx = cross(vec(d.value, i), vec(x.value, j));
            let ld = cross(vec(l.value, i), vec(d.value, j));
            for a in 0..3 {
                diff[a] = 2.0 * (dx[a] + ld[a]);
            }
            for k in 1..=3 {
                let sc = *alg.structure(k, i, j);
                for (a, e) in diff.iter_mut().enumerate() {
                    *e -= vec(d.value, k)[a] * sc;
                }
            }
            let (fx, fl) = (f(x.value), f(l.value));
            let sum = [fx[0] + fl[0], fx[1] + fl[1], fx[2] + fl[2]];
            total += dot(diff, sum) / (len[i - 1] * len[i - 1] * len[j - 1] * len[j - 1]);
        }
    }
    2.0 * total
}

/// (|F_{A^{x₁}}|² − |F_{A^lim}|²)·(orbit volume density) at a profile sample.
fn density(x1: f64, p: &ProfileSample<f64>) -> Result<f64, AnalysisError> {
    let x = clarke_coefficient(x1, p.rho)?;
    let l = alim_coefficient(p.rho)?;
    let d = clarke_minus_alim(x1, p.rho);
    Ok(plus_curvature_difference(x, l, d, &p.state) * orbit_volume_density(&p.state))
}

/// Breakpoints from lo to hi, doubling; from 0 they start at 1e-7·hi.
fn geometric_pieces(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![hi];
    let floor = if lo > 0.0 { lo } else { 1e-7 * hi };
    while pts[pts.len() - 1] / 2.0 > floor {
        let next = pts[pts.len() - 1] / 2.0;
        pts.push(next);
    }
    pts.push(lo);
    pts.reverse();
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

struct Integrand {
    profile: BsProfile,
    x1: f64,
    radial: Radial,
}

impl Integrand {
    /// Density per unit of the integration variable u.
    fn at(&self, u: f64) -> Result<f64, AnalysisError> {
        match self.radial {
            Radial::Sigma => {
                let p = self.profile.at_sigma(u);
                Ok(density(self.x1, &p)? / p.dsigma_dt)
            }
            Radial::Arclength => {
                let p = self.profile.at(self.profile.rho_of_t(u)?)?;
                density(self.x1, &p)
            }
        }
    }

    /// Density per unit t.
    fn per_t(&self, t: f64) -> Result<f64, AnalysisError> {
        let p = self.profile.at(self.profile.rho_of_t(t)?)?;
        density(self.x1, &p)
    }

    fn variable(&self, t: f64) -> Result<f64, AnalysisError> {
        match self.radial {
            Radial::Sigma => Ok(self.profile.sigma_of(self.profile.rho_of_t(t)?)?),
            Radial::Arclength => Ok(t),
        }
    }

    fn integrate(&self, lo: f64, hi: f64) -> Result<f64, AnalysisError> {
        let (a, b) = (self.variable(lo)?, self.variable(hi)?);
        // far out the density is a difference of nearly equal curvature norms,
        // good to ~1e-10 relative, so tolerances are set against the bubble energy
        let abs_tol = 1e-9 * energy_target();
        let mut total = 0.0;
        for (p, q) in geometric_pieces(a, b) {
            let mut err = None;
            let v = gauss_kronrod(
                |u| match self.at(u) {
                    Ok(v) => v,
                    Err(e) => {
                        err.get_or_insert(e);
                        f64::NAN
                    }
                },
                p,
                q,
                abs_tol,
                1e-9,
            );
            if let Some(e) = err {
                return Err(e);
            }
            total += v?.value;
        }
        Ok(total)
    }
}

/// Cut-off for windows reaching infinity; the rest is a fitted power-law tail.
const TAIL_CUT: f64 = 1e3;

/// ∫ f (|F_{A^{x₁}}|² − |F_{A^lim}|²) dvol over ℝ⁴×S³ for a radial window f.
pub fn energy_current(x1: f64, window: Window) -> Result<f64, AnalysisError> {
    energy_current_in(x1, window, Radial::Sigma)
}

pub fn energy_current_in(x1: f64, window: Window, radial: Radial) -> Result<f64, AnalysisError> {
    let g = Integrand {
        profile: bs_canonical(),
        x1,
        radial,
    };
    let (lo, hi) = window.bounds();
    if hi.is_finite() {
        return g.integrate(lo, hi);
    }
    let body = g.integrate(lo, TAIL_CUT)?;
    let ts: Vec<f64> = (0..=20)
        .map(|k| TAIL_CUT * 10f64.powf(k as f64 / 20.0 - 1.0))
        .collect();
    let ws = ts
        .iter()
        .map(|&t| g.per_t(t))
        .collect::<Result<Vec<_>, _>>()?;
    let sign = ws[ws.len() - 1].signum();
    if ws.iter().any(|w| w.signum() != sign || *w == 0.0) {
        return Err(AnalysisError::NoConvergence(
            "tail integrand changes sign".into(),
        ));
    }
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = ws.iter().map(|w| w.abs().ln()).collect();
    let fit = linear_fit(&xs, &ys)
        .ok_or_else(|| AnalysisError::NoConvergence("degenerate tail fit".into()))?;
    if fit.slope > -1.05 {
        return Err(AnalysisError::NonIntegrable { slope: fit.slope });
    }
    let tail = ws[ws.len() - 1] * TAIL_CUT / (-fit.slope - 1.0);
    Ok(body + tail)
}
