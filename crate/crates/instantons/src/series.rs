//! Power-series solutions at the singular orbit, used to launch the integrator.
//!
//! Each component is a Laurent series u_j = Σ_{k≥0} u_{j,k} t^(lo_j + k) with the
//! leading coefficient prescribed by the boundary data. Substituting into the ODE,
//! the coefficient of t^(lo_j + k − 1) in u̇_j − rhs_j is affine in the order-k unknowns,
//! so each order is a small linear solve. Resonant orders are closed by extra
//! conditions coming from smooth extension over the singular orbit.

use g2_geometries::{f64_of, MetricSeries, Profile, Real};
use g2_numerics::{lit, Series};

use crate::boundary::BoundaryData;
use crate::rhs::{bggg_field, clarke_field};
use crate::trajectory::Ansatz;
use crate::InstantonError;

pub const DEFAULT_ORDER: usize = 8;

/// Truncated expansions of the instanton components in t.
#[derive(Clone, Debug)]
pub struct SeriesStart<T> {
    pub comps: Vec<Series<T>>,
    /// Components with a 2/t pole.
    pub pole: Vec<bool>,
    pub order: usize,
    /// Launch time.
    pub t0: T,
    /// σ(t) at the singular orbit.
    pub sigma: Series<T>,
}

impl<T: Real> SeriesStart<T> {
    pub fn values(&self, t: T) -> Vec<T> {
        self.comps.iter().map(|s| s.eval(t)).collect()
    }

    pub fn rates(&self, t: T) -> Vec<T> {
        self.comps.iter().map(|s| s.derivative().eval(t)).collect()
    }

    /// Values with the 2/t pole removed, the variables the integrator carries.
    pub fn regular_values(&self, t: T) -> Vec<T> {
        let two: T = lit(2.0);
        self.values(t).into_iter().zip(&self.pole).map(|(v, &p)| if p { v - two / t } else { v }).collect()
    }

    /// Largest magnitude of the last nonzero retained term of any component at t.
    pub fn tail(&self, t: T) -> T {
        self.comps.iter().fold(T::zero(), |m, s| {
            let p = s.prec() - 1;
            let pw = if s.coeff(p) != T::zero() { p } else { p - 1 };
            m.max((s.coeff(pw) * t.powi(pw)).abs())
        })
    }
}

/// Metric functions in the order used by the ODEs: (A₁, A₂, B₁, B₂).
fn metric_components<T: Real>(ms: &MetricSeries<T>) -> [Series<T>; 4] {
    let tidy = |s: &Series<T>| {
        // A-series vanish at t = 0; clear round-off so division sees the true valuation
        let mut s = s.clone();
        let scale = (s.lo()..s.prec()).fold(T::zero(), |m, k| m.max(s.coeff(k).abs()));
        for k in s.lo()..s.prec() {
            if s.coeff(k).abs() <= lit::<T>(64.0) * T::epsilon() * scale {
                s.set(k, T::zero());
            }
        }
        s
    };
    [tidy(&ms.a[0]), tidy(&ms.a[1]), tidy(&ms.b[0]), tidy(&ms.b[1])]
}

type Condition<T> = Box<dyn Fn(&[Series<T>]) -> T>;

struct Layout<T> {
    lo: Vec<i32>,
    lead: Vec<T>,
    /// Extra affine conditions g(u) = 0 imposed at order k.
    conditions: Vec<(usize, Condition<T>)>,
}

fn layout<T: Real>(data: &BoundaryData<T>, metric: &[Series<T>; 4]) -> Layout<T> {
    let two: T = lit(2.0);
    let z = T::zero();
    match *data {
        BoundaryData::BsP1 { x1 } => Layout { lo: vec![1, 2], lead: vec![x1, z], conditions: vec![] },
        BoundaryData::BsPid { y0 } => Layout { lo: vec![-1, 0], lead: vec![two, y0], conditions: vec![] },
        BoundaryData::BgggP1 { f1p, g1p } => {
            Layout { lo: vec![1, 1, 2, 2], lead: vec![f1p, g1p, z, z], conditions: vec![] }
        }
        BoundaryData::BgggPid { b0m, b2p } => {
            let (a1, a2) = (metric[0].clone(), metric[1].clone());
            let shift = b2p - lit::<T>(4.0) * a1.coeff(3);
            Layout {
                lo: vec![-1, -1, 0, 0],
                lead: vec![two, two, b0m, b0m],
                conditions: vec![
                    // smooth extension: f⁺ = 2/t + (b₂⁺ − (2/3)A₁⁽³⁾(0))t + O(t³)
                    (2, Box::new(move |u: &[Series<T>]| u[0].coeff(1) - shift)),
                    // the anisotropic t³ mode of (f⁺, g⁺) is resonant; it is fixed by
                    // asking A₁f⁺ and A₂g⁺ to agree through t⁴
                    (4, Box::new(move |u: &[Series<T>]| a1.mul(&u[0]).sub(&a2.mul(&u[1])).coeff(4))),
                ],
            }
        }
    }
}

fn residuals<T: Real>(ansatz: Ansatz, u: &[Series<T>], m: &[Series<T>; 4], prec: i32) -> Vec<Series<T>> {
    let rhs: Vec<Series<T>> = match ansatz {
        Ansatz::Clarke => {
            let a1dot = m[0].derivative();
            clarke_field(u[0].clone(), u[1].clone(), m[0].clone(), a1dot, Series::constant(lit(3.0), prec)).to_vec()
        }
        Ansatz::Bggg => bggg_field([u[0].clone(), u[1].clone(), u[2].clone(), u[3].clone()], m.clone()).to_vec(),
    };
    u.iter().zip(rhs).map(|(x, r)| x.derivative().sub(&r)).collect()
}

/// Solve the small least-squares system min |Jv + b| by normal equations.
/// Returns None when JᵀJ is numerically singular.
fn least_squares<T: Real>(j: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = j[0].len();
    let mut m = vec![vec![T::zero(); n + 1]; n];
    for (row, &bi) in j.iter().zip(b) {
        for p in 0..n {
            for q in 0..n {
                m[p][q] = m[p][q] + row[p] * row[q];
            }
            m[p][n] = m[p][n] - row[p] * bi;
        }
    }
    let scale = (0..n).fold(T::zero(), |s, p| s.max(m[p][p].abs()));
    for c in 0..n {
        let piv = (c..n).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())?;
        if m[piv][c].abs() <= lit::<T>(1e-11) * scale {
            return None;
        }
        m.swap(c, piv);
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                for q in c..=n {
                    let v = m[c][q];
                    m[r][q] = m[r][q] - f * v;
                }
            }
        }
    }
    Some((0..n).map(|p| m[p][n] / m[p][p]).collect())
}

fn solve<T: Real>(
    data: &BoundaryData<T>,
    metric: &[Series<T>; 4],
    order: usize,
    with_conditions: bool,
) -> Result<Vec<Series<T>>, InstantonError> {
    let ansatz = data.ansatz();
    let Layout { lo, lead, conditions } = layout(data, metric);
    let n = lo.len();
    let prec = order as i32 + 12;
    let mut u: Vec<Series<T>> = (0..n)
        .map(|j| {
            let mut c = vec![T::zero(); order + 1];
            c[0] = lead[j];
            Series::new(lo[j], c)
        })
        .collect();
    let coeff_at = |u: &[Series<T>], k: i32| -> Result<Vec<T>, InstantonError> {
        let r = residuals(ansatz, u, metric, prec);
        (0..n)
            .map(|j| {
                let p = lo[j] + k - 1;
                if p >= r[j].prec() {
                    return Err(InstantonError::FreeCoefficient(k));
                }
                Ok(r[j].coeff(p))
            })
            .collect()
    };
    let tol = |scale: T| lit::<T>(1e-9) * (T::one() + scale);

    // leading order: the prescribed coefficients must solve the indicial equations
    let lead_scale = lead.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let defect = coeff_at(&u, 0)?.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if defect > tol(lead_scale * lead_scale) {
        return Err(InstantonError::Inconsistent { order: 0, defect: f64_of(defect) });
    }

    for k in 1..=order {
        let ki = k as i32;
        let active: Vec<&Condition<T>> =
            conditions.iter().filter(|(ck, _)| with_conditions && *ck == k).map(|(_, g)| g).collect();
        let eval = |u: &[Series<T>]| -> Result<Vec<T>, InstantonError> {
            let mut v = coeff_at(u, ki)?;
            v.extend(active.iter().map(|g| g(u)));
            Ok(v)
        };
        let base = eval(&u)?;
        let m = base.len();
        let mut rows = vec![vec![T::zero(); n]; m];
        for c in 0..n {
            let mut up = u.clone();
            up[c].set(lo[c] + ki, T::one());
            let col = eval(&up)?;
            for r in 0..m {
                rows[r][c] = col[r] - base[r];
            }
        }
        let v = least_squares(&rows, &base).ok_or(InstantonError::FreeCoefficient(ki))?;
        let scale = rows.iter().flatten().fold(T::one(), |s, x| s.max(x.abs()))
            * (T::one() + v.iter().fold(T::zero(), |s, x| s.max(x.abs())));
        let defect = rows.iter().zip(&base).fold(T::zero(), |d, (row, b)| {
            d.max((row.iter().zip(&v).fold(*b, |acc, (a, x)| acc + *a * *x)).abs())
        });
        if defect > tol(scale) {
            return Err(InstantonError::Inconsistent { order: ki, defect: f64_of(defect) });
        }
        for c in 0..n {
            u[c].set(lo[c] + ki, v[c]);
        }
    }
    Ok(u)
}

/// The b₂⁺ compatible with b₀⁻ on P_id: the ODE fixes the O(t) terms of f⁺ and g⁺.
pub fn bggg_pid_b2p<T: Real>(b0m: T, profile: &dyn Profile<T>) -> Result<T, InstantonError> {
    let ms = profile.metric_series(14)?;
    let metric = metric_components(&ms);
    let probe = BoundaryData::BgggPid { b0m, b2p: T::zero() };
    let u = solve(&probe, &metric, 2, false)?;
    Ok(u[0].coeff(1) + lit::<T>(4.0) * metric[0].coeff(3))
}

/// Expansion of the instanton with boundary data `data` on `profile`, to `order`
/// terms beyond the leading one. `t0 = None` picks the launch time so that the
/// last retained term is below 1e−12, capped at 0.05 B₁(0).
pub fn series_start<T: Real>(
    data: &BoundaryData<T>,
    profile: &dyn Profile<T>,
    t0: Option<T>,
    order: usize,
) -> Result<SeriesStart<T>, InstantonError> {
    let ms = profile.metric_series(order + 10)?;
    let metric = metric_components(&ms);
    let comps = solve(data, &metric, order, true)?;
    let mut start = SeriesStart { comps, pole: data.pole_mask(), order, t0: T::zero(), sigma: ms.sigma };
    start.t0 = match t0 {
        Some(t) => t,
        None => {
            let cap = lit::<T>(0.05) * metric[2].coeff(0);
            let target: T = lit(1e-12);
            let mut t = cap;
            while start.tail(t) > target && t > cap * lit(1e-6) {
                t = t * lit(0.8);
            }
            t
        }
    };
    Ok(start)
}
