//! Dormand–Prince 5(4) with the classic continuous extension of order 4.

use crate::{lit, Num};

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions<F> {
    pub rtol: F,
    pub atol: F,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<F>,
    pub h_max: F,
    pub max_steps: usize,
}

impl<F: Num> Default for OdeOptions<F> {
    fn default() -> Self {
        Self { rtol: lit(1e-10), atol: lit(1e-12), h0: None, h_max: F::infinity(), max_steps: 200_000 }
    }
}

impl<F: Num> OdeOptions<F> {
    pub fn tol(tol: F) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OdeStatus<F> {
    Completed,
    /// The stop predicate fired after the step ending at `t`.
    Stopped { t: F, reason: String },
    StepUnderflow { t: F },
    MaxSteps { t: F },
    NonFinite { t: F },
}

/// Accepted steps with dense-output coefficients.
#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub t: Vec<F>,
    pub y: Vec<Vec<F>>,
    dense: Vec<[Vec<F>; 5]>,
    pub status: OdeStatus<F>,
    pub rejected: usize,
    pub rhs_evals: usize,
}

impl<F: Num> Solution<F> {
    pub fn last(&self) -> (F, &[F]) {
        let i = self.t.len() - 1;
        (self.t[i], &self.y[i])
    }

    pub fn t_end(&self) -> F {
        *self.t.last().expect("non-empty")
    }

    /// Dense output at `t` within the integrated range.
    pub fn eval(&self, t: F) -> Option<Vec<F>> {
        let n = self.t.len();
        let (lo, hi) = if self.t[0] <= self.t[n - 1] { (self.t[0], self.t[n - 1]) } else { (self.t[n - 1], self.t[0]) };
        if t < lo || t > hi || n < 2 {
            return if n >= 1 && t == self.t[0] { Some(self.y[0].clone()) } else { None };
        }
        let forward = self.t[n - 1] >= self.t[0];
        let idx = if forward {
            self.t.partition_point(|&s| s <= t).saturating_sub(1).min(n - 2)
        } else {
            self.t.partition_point(|&s| s >= t).saturating_sub(1).min(n - 2)
        };
        let h = self.t[idx + 1] - self.t[idx];
        let theta = (t - self.t[idx]) / h;
        let theta1 = F::one() - theta;
        let [r1, r2, r3, r4, r5] = &self.dense[idx];
        Some(
            (0..r1.len())
                .map(|i| r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i]))))
                .collect(),
        )
    }
}

/// Adaptive Dormand–Prince 5(4) integrator.
#[derive(Clone, Copy, Debug)]
pub struct Dopri5<F> {
    pub opts: OdeOptions<F>,
}

struct Tableau<F> {
    c: [F; 7],
    a: [[F; 6]; 7],
    e: [F; 7],
    d: [F; 7],
}

fn tableau<F: Num>() -> Tableau<F> {
    let z = F::zero();
    let r = |n: f64, d: f64| lit::<F>(n / d);
    Tableau {
        c: [z, r(1., 5.), r(3., 10.), r(4., 5.), r(8., 9.), F::one(), F::one()],
        a: [
            [z; 6],
            [r(1., 5.), z, z, z, z, z],
            [r(3., 40.), r(9., 40.), z, z, z, z],
            [r(44., 45.), r(-56., 15.), r(32., 9.), z, z, z],
            [r(19372., 6561.), r(-25360., 2187.), r(64448., 6561.), r(-212., 729.), z, z],
            [r(9017., 3168.), r(-355., 33.), r(46732., 5247.), r(49., 176.), r(-5103., 18656.), z],
            [r(35., 384.), z, r(500., 1113.), r(125., 192.), r(-2187., 6784.), r(11., 84.)],
        ],
        e: [r(71., 57600.), z, r(-71., 16695.), r(71., 1920.), r(-17253., 339200.), r(22., 525.), r(-1., 40.)],
        d: [
            r(-12715105075., 11282082432.),
            z,
            r(87487479700., 32700410799.),
            r(-10690763975., 1880347072.),
            r(701980252875., 199316789632.),
            r(-1453857185., 822651844.),
            r(69997945., 29380423.),
        ],
    }
}

struct StepOut<F> {
    y_new: Vec<F>,
    k: Vec<Vec<F>>,
    err: F,
}

fn dp_step<F: Num>(
    tab: &Tableau<F>,
    rhs: &mut impl FnMut(F, &[F], &mut [F]),
    t: F,
    y: &[F],
    k1: &[F],
    h: F,
    scale: Option<(F, F)>,
) -> StepOut<F> {
    let n = y.len();
    let mut k: Vec<Vec<F>> = vec![k1.to_vec()];
    let mut tmp = vec![F::zero(); n];
    for s in 1..7 {
        for i in 0..n {
            let mut acc = F::zero();
            for (j, kj) in k.iter().enumerate() {
                acc = acc + tab.a[s][j] * kj[i];
            }
            tmp[i] = y[i] + h * acc;
        }
        let mut ks = vec![F::zero(); n];
        rhs(t + tab.c[s] * h, &tmp, &mut ks);
        k.push(ks);
    }
    // stage 7 is evaluated at y_new (FSAL)
    let y_new = tmp;
    let err = match scale {
        None => F::zero(),
        Some((atol, rtol)) => {
            let mut sum = F::zero();
            for i in 0..n {
                let mut e = F::zero();
                for s in 0..7 {
                    e = e + tab.e[s] * k[s][i];
                }
                let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
                sum = sum + (h * e / sc).powi(2);
            }
            (sum / lit(n as f64)).sqrt()
        }
    };
    StepOut { y_new, k, err }
}

impl<F: Num> Default for Dopri5<F> {
    fn default() -> Self {
        Self { opts: OdeOptions::default() }
    }
}

impl<F: Num> Dopri5<F> {
    pub fn new(opts: OdeOptions<F>) -> Self {
        Self { opts }
    }

    /// Integrate from `t0` to `t1`. `stop` is checked after every accepted step.
    pub fn solve(
        &self,
        mut rhs: impl FnMut(F, &[F], &mut [F]),
        t0: F,
        y0: &[F],
        t1: F,
        mut stop: impl FnMut(F, &[F]) -> Option<String>,
    ) -> Solution<F> {
        let tab = tableau::<F>();
        let n = y0.len();
        let dir = if t1 >= t0 { F::one() } else { -F::one() };
        let mut sol = Solution {
            t: vec![t0],
            y: vec![y0.to_vec()],
            dense: Vec::new(),
            status: OdeStatus::Completed,
            rejected: 0,
            rhs_evals: 0,
        };
        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = vec![F::zero(); n];
        rhs(t, &y, &mut k1);
        sol.rhs_evals += 1;
        let span = (t1 - t0).abs();
        let mut h = match self.opts.h0 {
            Some(h) => h.abs(),
            None => self.initial_step(&mut rhs, t, &y, &k1, span),
        }
        .min(self.opts.h_max)
        .min(span);
        let safety: F = lit(0.9);
        let fac_min: F = lit(0.2);
        let fac_max: F = lit(10.0);
        let expo: F = lit(0.2);
        let tiny = F::epsilon() * lit(16.0);
        let mut steps = 0;
        while (t1 - t) * dir > F::zero() {
            if steps >= self.opts.max_steps {
                sol.status = OdeStatus::MaxSteps { t };
                break;
            }
            if h <= tiny * t.abs().max(F::one()) {
                sol.status = OdeStatus::StepUnderflow { t };
                break;
            }
            let last = (t + dir * h - t1) * dir >= F::zero();
            let hs = if last { (t1 - t) * dir } else { h };
            let out = dp_step(&tab, &mut rhs, t, &y, &k1, dir * hs, Some((self.opts.atol, self.opts.rtol)));
            sol.rhs_evals += 6;
            steps += 1;
            let err = out.err;
            if !err.is_finite() || out.y_new.iter().any(|v| !v.is_finite()) {
                h = hs * lit(0.25);
                sol.rejected += 1;
                if out.y_new.iter().any(|v| !v.is_finite()) && h <= tiny * t.abs().max(F::one()) {
                    sol.status = OdeStatus::NonFinite { t };
                    break;
                }
                continue;
            }
            if err <= F::one() {
                let hh = dir * hs;
                let k = &out.k;
                let r2: Vec<F> = (0..n).map(|i| out.y_new[i] - y[i]).collect();
                let r3: Vec<F> = (0..n).map(|i| hh * k[0][i] - r2[i]).collect();
                let r4: Vec<F> = (0..n).map(|i| r2[i] - hh * k[6][i] - r3[i]).collect();
                let r5: Vec<F> = (0..n)
                    .map(|i| hh * (0..7).fold(F::zero(), |a, s| a + tab.d[s] * k[s][i]))
                    .collect();
                sol.dense.push([y.clone(), r2, r3, r4, r5]);
                t = if last { t1 } else { t + hh };
                y = out.y_new;
                k1 = out.k[6].clone();
                sol.t.push(t);
                sol.y.push(y.clone());
                if let Some(reason) = stop(t, &y) {
                    sol.status = OdeStatus::Stopped { t, reason };
                    break;
                }
                let fac = if err == F::zero() { fac_max } else { (safety * err.powf(-expo)).min(fac_max).max(fac_min) };
                h = (hs * fac).min(self.opts.h_max);
            } else {
                sol.rejected += 1;
                let fac = (safety * err.powf(-expo)).max(fac_min);
                h = hs * fac;
            }
        }
        sol
    }

    fn initial_step(&self, rhs: &mut impl FnMut(F, &[F], &mut [F]), t: F, y: &[F], k1: &[F], span: F) -> F {
        let n = y.len();
        let nf: F = lit(n as f64);
        let sc: Vec<F> = y.iter().map(|v| self.opts.atol + self.opts.rtol * v.abs()).collect();
        let d0 = (y.iter().zip(&sc).fold(F::zero(), |a, (v, s)| a + (*v / *s).powi(2)) / nf).sqrt();
        let d1 = (k1.iter().zip(&sc).fold(F::zero(), |a, (v, s)| a + (*v / *s).powi(2)) / nf).sqrt();
        let small: F = lit(1e-5);
        let mut h0 = if d0 < small || d1 < small { lit(1e-6) } else { lit::<F>(0.01) * d0 / d1 };
        h0 = h0.min(span);
        let y1: Vec<F> = (0..n).map(|i| y[i] + h0 * k1[i]).collect();
        let mut k2 = vec![F::zero(); n];
        rhs(t + h0, &y1, &mut k2);
        let d2 = ((0..n).fold(F::zero(), |a, i| a + ((k2[i] - k1[i]) / sc[i]).powi(2)) / nf).sqrt() / h0;
        let m = d1.max(d2);
        let h1 = if m <= lit(1e-15) { (h0 * lit(1e-3)).max(lit(1e-6)) } else { (lit::<F>(0.01) / m).powf(lit(0.2)) };
        (lit::<F>(100.0) * h0).min(h1).min(span)
    }

    /// Fixed-step integration with `steps` equal steps, for convergence-order checks.
    pub fn fixed(mut rhs: impl FnMut(F, &[F], &mut [F]), t0: F, y0: &[F], t1: F, steps: usize) -> Vec<F> {
        let tab = tableau::<F>();
        let h = (t1 - t0) / lit(steps as f64);
        let mut y = y0.to_vec();
        let mut k1 = vec![F::zero(); y.len()];
        let mut t = t0;
        rhs(t, &y, &mut k1);
        for _ in 0..steps {
            let out = dp_step(&tab, &mut rhs, t, &y, &k1, h, None);
            y = out.y_new;
            k1 = out.k[6].clone();
            t = t + h;
        }
        y
    }
}
