//! Launching instanton trajectories from the singular orbit.

use std::sync::Arc;

use g2_geometries::{g2_from_su3, Profile, ProfileSample, Real, SU3StructureState};
use g2_liealg::CoframeAlgebra;
use g2_numerics::{lit, Dopri5, OdeOptions, OdeStatus, Solution};

use crate::boundary::BoundaryData;
use crate::connection::{curvature_norm_sq, InvariantConnection};
use crate::residual::{instanton_residual, Residual};
use crate::rhs::{bggg_rhs, clarke_rhs};
use crate::series::{series_start, SeriesStart, DEFAULT_ORDER};
use crate::InstantonError;

/// Which reduced system a trajectory solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ansatz {
    /// SU(2)³-invariant (x, y).
    Clarke,
    /// SU(2)²×U(1)-invariant (f⁺, g⁺, f⁻, g⁻).
    Bggg,
}

impl Ansatz {
    pub fn components(self) -> usize {
        match self {
            Ansatz::Clarke => 2,
            Ansatz::Bggg => 4,
        }
    }

    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Ansatz::Clarke => &["x", "y"],
            Ansatz::Bggg => &["fp", "gp", "fm", "gm"],
        }
    }

    /// Derivatives of the components.
    pub fn rhs<T: Real>(
        self,
        u: &[T],
        state: &SU3StructureState<T>,
        rate: &SU3StructureState<T>,
    ) -> Result<Vec<T>, InstantonError> {
        match self {
            Ansatz::Clarke => clarke_rhs(u[0], u[1], state, rate).map(|(a, b)| vec![a, b]),
            Ansatz::Bggg => bggg_rhs([u[0], u[1], u[2], u[3]], state).map(|v| v.to_vec()),
        }
    }

    pub fn connection<T: Real>(
        self,
        u: &[T],
        du: &[T],
        state: &SU3StructureState<T>,
        rate: &SU3StructureState<T>,
    ) -> InvariantConnection<T> {
        match self {
            Ansatz::Clarke => InvariantConnection::clarke([u[0], u[1]], [du[0], du[1]], state, rate),
            Ansatz::Bggg => InvariantConnection::bggg([u[0], u[1], u[2], u[3]], [du[0], du[1], du[2], du[3]], state, rate),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LaunchOptions<T> {
    /// Relative and absolute integrator tolerance.
    pub tol: T,
    pub t_max: T,
    pub order: usize,
    /// Launch time; adaptive when `None`.
    pub t0: Option<T>,
    /// Stop once a component exceeds this in magnitude.
    pub blow_up: T,
}

impl<T: Real> Default for LaunchOptions<T> {
    fn default() -> Self {
        Self { tol: lit(1e-10), t_max: lit(20.0), order: DEFAULT_ORDER, t0: None, blow_up: lit(1e8) }
    }
}

/// The connection and metric at one time.
#[derive(Clone, Debug)]
pub struct InstantonSample<T> {
    pub t: T,
    pub profile: ProfileSample<T>,
    pub ansatz: Ansatz,
    pub u: Vec<T>,
    pub du: Vec<T>,
}

impl<T: Real> InstantonSample<T> {
    pub fn connection(&self) -> InvariantConnection<T> {
        self.ansatz.connection(&self.u, &self.du, &self.profile.state, &self.profile.rate)
    }

    pub fn curvature_norm_sq(&self) -> T {
        curvature_norm_sq(&self.connection(), &self.profile.state, &CoframeAlgebra::s3xs3())
    }

    /// |F∧ψ| and the anti-self-duality defect, through the full form calculus.
    pub fn residual(&self) -> Result<Residual<T>, InstantonError> {
        let g2 = g2_from_su3(&self.profile.state, Some(&self.profile.rate))?;
        instanton_residual(&self.connection().form(), &g2, &CoframeAlgebra::s3xs3())
    }
}

pub struct InstantonTrajectory<T: Real> {
    pub data: BoundaryData<T>,
    pub ansatz: Ansatz,
    pub profile: Arc<dyn Profile<T>>,
    pub start: SeriesStart<T>,
    /// Accepted step times, starting at t0.
    pub grid: Vec<T>,
    /// Components (poles restored) at each grid time.
    pub values: Vec<Vec<T>>,
    pub sigma: Vec<T>,
    pub status: OdeStatus<T>,
    pub solution: Solution<T>,
}

impl<T: Real> std::fmt::Debug for InstantonTrajectory<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InstantonTrajectory")
            .field("data", &self.data)
            .field("profile", &self.profile.name())
            .field("t0", &self.start.t0)
            .field("steps", &self.grid.len())
            .field("status", &self.status)
            .finish()
    }
}

fn restore<T: Real>(y: &[T], t: T, pole: &[bool]) -> Vec<T> {
    let two: T = lit(2.0);
    y[1..].iter().zip(pole).map(|(&v, &p)| if p { v + two / t } else { v }).collect()
}

impl<T: Real> InstantonTrajectory<T> {
    pub fn t0(&self) -> T {
        self.start.t0
    }

    pub fn t_end(&self) -> T {
        *self.grid.last().expect("non-empty")
    }

    /// Sample at any t in (0, t_end]; below t0 the series is used.
    pub fn sample(&self, t: T) -> Option<InstantonSample<T>> {
        if t <= T::zero() || t > self.t_end() {
            return None;
        }
        let (sigma, u) = if t < self.start.t0 {
            (self.start.sigma.eval(t), self.start.values(t))
        } else {
            let y = self.solution.eval(t)?;
            (y[0], restore(&y, t, &self.start.pole))
        };
        let profile = self.profile.at_sigma(sigma);
        let du = if t < self.start.t0 {
            self.start.rates(t)
        } else {
            self.ansatz.rhs(&u, &profile.state, &profile.rate).ok()?
        };
        Some(InstantonSample { t, profile, ansatz: self.ansatz, u, du })
    }

    /// Connection coefficients (A₁f⁺, A₂g⁺, B₁f⁻, B₂g⁻), or (A₁x, B₁y), at grid point i.
    pub fn coefficients(&self, i: usize) -> Vec<T> {
        let p = self.profile.at_sigma(self.sigma[i]);
        let (a, b) = (p.state.a, p.state.b);
        let m = match self.ansatz {
            Ansatz::Clarke => vec![a[0], b[0]],
            Ansatz::Bggg => vec![a[0], a[1], b[0], b[1]],
        };
        self.values[i].iter().zip(m).map(|(u, m)| *u * m).collect()
    }

    pub fn completed(&self) -> bool {
        matches!(self.status, OdeStatus::Completed)
    }
}

/// Integrate from the series start to `opts.t_max`, stopping early on blow-up or
/// when `stop` returns a reason for an accepted step.
pub fn launch_with<T: Real>(
    data: &BoundaryData<T>,
    profile: Arc<dyn Profile<T>>,
    opts: &LaunchOptions<T>,
    mut stop: impl FnMut(&InstantonSample<T>) -> Option<String>,
) -> Result<InstantonTrajectory<T>, InstantonError> {
    let start = series_start(data, profile.as_ref(), opts.t0, opts.order)?;
    let ansatz = data.ansatz();
    let t0 = start.t0;
    let mut y0 = vec![start.sigma.eval(t0)];
    y0.extend(start.regular_values(t0));
    let pole = start.pole.clone();
    let prof = profile.clone();
    let two: T = lit(2.0);
    let rhs = |t: T, y: &[T], dy: &mut [T]| {
        let p = prof.at_sigma(y[0]);
        dy[0] = p.dsigma_dt;
        let u = restore(y, t, &pole);
        match ansatz.rhs(&u, &p.state, &p.rate) {
            Ok(du) => {
                for (i, d) in du.into_iter().enumerate() {
                    dy[i + 1] = if pole[i] { d + two / (t * t) } else { d };
                }
            }
            Err(_) => dy.iter_mut().for_each(|v| *v = T::nan()),
        }
    };
    let blow = opts.blow_up;
    let pole_ref = start.pole.clone();
    let prof_ref = profile.clone();
    let solver = Dopri5::new(OdeOptions { rtol: opts.tol, atol: opts.tol, ..OdeOptions::default() });
    let solution = solver.solve(rhs, t0, &y0, opts.t_max, |t, y| {
        let u = restore(y, t, &pole_ref);
        if u.iter().any(|v| v.abs() > blow) {
            return Some(format!("component exceeded {blow:?}"));
        }
        let p = prof_ref.at_sigma(y[0]);
        let du = ansatz.rhs(&u, &p.state, &p.rate).ok()?;
        stop(&InstantonSample { t, profile: p, ansatz, u, du })
    });
    let values = solution.t.iter().zip(&solution.y).map(|(&t, y)| restore(y, t, &start.pole)).collect();
    let sigma = solution.y.iter().map(|y| y[0]).collect();
    Ok(InstantonTrajectory {
        data: *data,
        ansatz,
        profile,
        start,
        grid: solution.t.clone(),
        values,
        sigma,
        status: solution.status.clone(),
        solution,
    })
}

pub fn launch<T: Real>(
    data: &BoundaryData<T>,
    profile: Arc<dyn Profile<T>>,
    opts: &LaunchOptions<T>,
) -> Result<InstantonTrajectory<T>, InstantonError> {
    launch_with(data, profile, opts, |_| None)
}
