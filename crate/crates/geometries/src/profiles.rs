//! Bryant–Salamon and BGGG metrics on ℝ⁴×S³.

use g2_numerics::{gauss_kronrod, lit, Series};

use crate::su3::SU3StructureState;
use crate::{f64_of, GeomError, Real};

/// Everything known at one point of a profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileSample<T> {
    pub rho: T,
    pub sigma: T,
    pub state: SU3StructureState<T>,
    /// Componentwise d/dt of `state`.
    pub rate: SU3StructureState<T>,
    pub dsigma_dt: T,
}

/// Taylor expansions in t at the singular orbit.
#[derive(Clone, Debug)]
pub struct MetricSeries<T> {
    pub a: [Series<T>; 3],
    pub b: [Series<T>; 3],
    pub sigma: Series<T>,
}

/// A closed-form cohomogeneity-one metric in a coordinate ρ ≥ ρ₀, with σ² = ρ − ρ₀.
pub trait Profile<T: Real>: Send + Sync {
    fn name(&self) -> String;

    /// ρ₀, the singular orbit.
    fn start(&self) -> T;

    fn at_sigma(&self, sigma: T) -> ProfileSample<T>;

    /// The six metric functions and dt/dσ as series in the series variable `sigma`.
    fn sigma_series(&self, sigma: &Series<T>) -> Result<([Series<T>; 6], Series<T>), GeomError>;

    fn sigma_of(&self, rho: T) -> Result<T, GeomError> {
        let x = rho - self.start();
        if x < T::zero() {
            return Err(GeomError::Domain { value: f64_of(rho), start: f64_of(self.start()) });
        }
        Ok(x.sqrt())
    }

    fn at(&self, rho: T) -> Result<ProfileSample<T>, GeomError> {
        Ok(self.at_sigma(self.sigma_of(rho)?))
    }

    fn state(&self, rho: T) -> Result<SU3StructureState<T>, GeomError> {
        Ok(self.at(rho)?.state)
    }

    fn rate(&self, rho: T) -> Result<SU3StructureState<T>, GeomError> {
        Ok(self.at(rho)?.rate)
    }

    /// dρ/dt.
    fn drho_dt(&self, rho: T) -> Result<T, GeomError> {
        let p = self.at(rho)?;
        Ok(lit::<T>(2.0) * p.sigma * p.dsigma_dt)
    }

    /// Arc length from the singular orbit, t = ∫₀^σ (dσ/dt)⁻¹ dσ.
    fn t_of(&self, rho: T) -> Result<T, GeomError> {
        let sig = self.sigma_of(rho)?;
        if sig == T::zero() {
            return Ok(T::zero());
        }
        let q = gauss_kronrod(|u| T::one() / self.at_sigma(u).dsigma_dt, T::zero(), sig, lit(1e-12), lit(1e-14))?;
        Ok(q.value)
    }

    /// Inverse of `t_of`, by bracketing and bisection-safeguarded Newton.
    fn rho_of_t(&self, t: T) -> Result<T, GeomError> {
        if t <= T::zero() {
            return Ok(self.start());
        }
        let mut hi = self.start() + t + T::one();
        while self.t_of(hi)? < t {
            hi = self.start() + (hi - self.start()) * lit(2.0);
        }
        let mut lo = self.start();
        let mut x = (lo + hi) * lit(0.5);
        for _ in 0..200 {
            let g = self.t_of(x)? - t;
            if g > T::zero() {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - g * self.drho_dt(x)?;
            let next = if newton > lo && newton < hi { newton } else { (lo + hi) * lit(0.5) };
            if (next - x).abs() <= lit::<T>(4.0) * T::epsilon() * x.abs() {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }

    /// Taylor series of the metric functions and σ in t, to t^(order-1).
    fn metric_series(&self, order: usize) -> Result<MetricSeries<T>, GeomError> {
        let prec = order as i32 + 2;
        let (vals, dt_dsigma) = self.sigma_series(&Series::var(prec))?;
        let t_of_sigma = dt_dsigma.integral().truncate(prec);
        if t_of_sigma.coeff(1) == T::zero() {
            return Err(GeomError::NoSeries);
        }
        let sigma = t_of_sigma.revert();
        let at = |s: &Series<T>| s.compose(&sigma).truncate(order as i32);
        Ok(MetricSeries {
            a: [at(&vals[0]), at(&vals[1]), at(&vals[2])],
            b: [at(&vals[3]), at(&vals[4]), at(&vals[5])],
            sigma: sigma.truncate(order as i32),
        })
    }
}

/// Bryant–Salamon spinor-bundle metric in the coordinate s = B, singular orbit s = c.
/// c = 0 gives the G2 cone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BryantSalamon<T> {
    pub c: T,
}

impl<T: Real> BryantSalamon<T> {
    pub fn new(c: T) -> Result<Self, GeomError> {
        if c < T::zero() {
            return Err(GeomError::Domain { value: f64_of(c), start: 0.0 });
        }
        Ok(Self { c })
    }
}

impl<T: Real> Profile<T> for BryantSalamon<T> {
    fn name(&self) -> String {
        format!("bryant-salamon(c={:?})", self.c)
    }

    fn start(&self) -> T {
        self.c
    }

    fn at_sigma(&self, sigma: T) -> ProfileSample<T> {
        let c = self.c;
        let s = c + sigma * sigma;
        let r3 = lit::<T>(3.0).sqrt();
        let quad = s * s + s * c + c * c;
        let a = sigma * (quad / s).sqrt() / r3;
        let ds_dt = sigma * (quad / s).sqrt() / (r3 * s);
        let adot = (T::one() + lit::<T>(0.5) * c * c * c / (s * s * s)) / lit(3.0);
        ProfileSample {
            rho: s,
            sigma,
            state: SU3StructureState::full(a, s),
            rate: SU3StructureState::full(adot, ds_dt),
            dsigma_dt: (quad / (s * s * s)).sqrt() / (lit::<T>(2.0) * r3),
        }
    }

    fn sigma_series(&self, sigma: &Series<T>) -> Result<([Series<T>; 6], Series<T>), GeomError> {
        let c = self.c;
        if c <= T::zero() {
            return Err(GeomError::NoSeries);
        }
        let r3 = lit::<T>(3.0).sqrt();
        let s = sigma.mul(sigma).add_const(c);
        let quad = s.mul(&s).add(&s.scale(c)).add_const(c * c);
        let a = sigma.mul(&quad.div(&s).sqrt()).scale(T::one() / r3);
        let dt = s.mul(&s).mul(&s).div(&quad).sqrt().scale(lit::<T>(2.0) * r3);
        Ok(([a.clone(), a.clone(), a, s.clone(), s.clone(), s], dt))
    }

    fn t_of(&self, rho: T) -> Result<T, GeomError> {
        if self.c == T::zero() {
            // the cone: A = s/√3, t = √3 s
            self.sigma_of(rho)?;
            return Ok(lit::<T>(3.0).sqrt() * rho);
        }
        let sig = self.sigma_of(rho)?;
        if sig == T::zero() {
            return Ok(T::zero());
        }
        let q = gauss_kronrod(|u| T::one() / self.at_sigma(u).dsigma_dt, T::zero(), sig, lit(1e-12), lit(1e-14))?;
        Ok(q.value)
    }
}

/// BGGG metric scaled by λ, in the coordinate s = B₁ with singular orbit s = cλ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bggg<T> {
    pub c: T,
    pub lambda: T,
}

impl<T: Real> Bggg<T> {
    pub fn new(c: T, lambda: T) -> Result<Self, GeomError> {
        if !(c > T::zero() && lambda > T::zero()) {
            return Err(GeomError::Domain { value: f64_of(c * lambda), start: 0.0 });
        }
        Ok(Self { c, lambda })
    }

    fn k(&self) -> T {
        self.c * self.lambda
    }
}

impl<T: Real> Profile<T> for Bggg<T> {
    fn name(&self) -> String {
        format!("bggg(c={:?}, lambda={:?})", self.c, self.lambda)
    }

    fn start(&self) -> T {
        self.k()
    }

    fn at_sigma(&self, sigma: T) -> ProfileSample<T> {
        let k = self.k();
        let (two, three, half) = (lit::<T>(2.0), lit::<T>(3.0), lit::<T>(0.5));
        let s = k + sigma * sigma;
        let d = lit::<T>(9.0) * s * s - k * k;
        let w = ((s + k) / d).sqrt();
        let q = (three * s - k) * (s + k);
        let a1 = two * k * sigma * w;
        let a2 = half * sigma * (three * s + k).sqrt();
        let b2 = half * q.sqrt();
        let a1dot = lit::<T>(32.0) * k * k * k * s / (d * d);
        let a2dot = (three * s - k) * w / (three * s + k).sqrt();
        let b2dot = (three * s + k) * sigma * w / q.sqrt();
        ProfileSample {
            rho: s,
            sigma,
            state: SU3StructureState::reduced(a1, a2, s, b2),
            rate: SU3StructureState::reduced(a1dot, a2dot, a1 / k, b2dot),
            dsigma_dt: w,
        }
    }

    fn sigma_series(&self, sigma: &Series<T>) -> Result<([Series<T>; 6], Series<T>), GeomError> {
        let k = self.k();
        let (three, half) = (lit::<T>(3.0), lit::<T>(0.5));
        let s = sigma.mul(sigma).add_const(k);
        let d = s.mul(&s).scale(lit(9.0)).add_const(-k * k);
        let w2 = s.add_const(k).div(&d);
        let a1 = sigma.mul(&w2.sqrt()).scale(lit::<T>(2.0) * k);
        let a2 = sigma.mul(&s.scale(three).add_const(k).sqrt()).scale(half);
        let b2 = s.scale(three).add_const(-k).mul(&s.add_const(k)).sqrt().scale(half);
        let dt = w2.recip().sqrt();
        Ok(([a1, a2.clone(), a2, s, b2.clone(), b2], dt))
    }
}

/// A profile reparametrized by ρ = k·s; the metric functions are unchanged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rescaled<T, P> {
    pub inner: P,
    pub k: T,
}

impl<T: Real, P: Profile<T>> Profile<T> for Rescaled<T, P> {
    fn name(&self) -> String {
        format!("{} with rho = {:?} s", self.inner.name(), self.k)
    }

    fn start(&self) -> T {
        self.k * self.inner.start()
    }

    fn at_sigma(&self, sigma: T) -> ProfileSample<T> {
        let rk = self.k.sqrt();
        let mut p = self.inner.at_sigma(sigma / rk);
        p.rho = p.rho * self.k;
        p.sigma = sigma;
        p.dsigma_dt = p.dsigma_dt * rk;
        p
    }

    fn sigma_series(&self, sigma: &Series<T>) -> Result<([Series<T>; 6], Series<T>), GeomError> {
        let rk = self.k.sqrt();
        let (vals, dt) = self.inner.sigma_series(&sigma.scale(T::one() / rk))?;
        Ok((vals, dt.scale(T::one() / rk)))
    }

    fn t_of(&self, rho: T) -> Result<T, GeomError> {
        self.sigma_of(rho)?;
        self.inner.t_of(rho / self.k)
    }
}

/// Bryant–Salamon in the coordinate r ≥ 1 with B = r/√3 (c = 1/√3, r = √3 s).
pub fn bs_canonical<T: Real>() -> Rescaled<T, BryantSalamon<T>> {
    let r3 = lit::<T>(3.0).sqrt();
    Rescaled { inner: BryantSalamon { c: T::one() / r3 }, k: r3 }
}

/// BGGG in the coordinate r ≥ 9/4 with c = 1, λ = 3/2, B₁ = 2r/3 and dr/dt = A₁.
pub fn bggg_canonical<T: Real>() -> Rescaled<T, Bggg<T>> {
    Rescaled { inner: Bggg { c: T::one(), lambda: lit(1.5) }, k: lit(1.5) }
}

pub fn bs_spinor_profile<T: Real>(c: T, s: T) -> Result<SU3StructureState<T>, GeomError> {
    BryantSalamon::new(c)?.state(s)
}

pub fn bggg_profile<T: Real>(c: T, lambda: T, s: T) -> Result<SU3StructureState<T>, GeomError> {
    Bggg::new(c, lambda)?.state(s)
}

/// The two ℝ⁴×S³ families in their canonical r coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    BryantSalamon,
    Bggg,
}

impl Family {
    pub fn profile<T: Real>(self) -> Box<dyn Profile<T>> {
        match self {
            Family::BryantSalamon => Box::new(bs_canonical::<T>()),
            Family::Bggg => Box::new(bggg_canonical::<T>()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::BryantSalamon => "bs",
            Family::Bggg => "bggg",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "bs" | "bs-spinor" | "bryant-salamon" => Ok(Family::BryantSalamon),
            "bggg" => Ok(Family::Bggg),
            other => Err(format!("unknown metric family '{other}' (expected bs or bggg)")),
        }
    }
}

pub fn t_of_r<T: Real>(family: Family, r: T) -> Result<T, GeomError> {
    family.profile::<T>().t_of(r)
}

/// The asymptotic circle bundle over the Calabi–Yau cone approached by BGGG.
pub fn bggg_asymptotic<T: Real>(t: T) -> SU3StructureState<T> {
    let r3 = lit::<T>(3.0).sqrt();
    SU3StructureState::reduced(T::one(), t / r3, lit::<T>(2.0) * t / lit(3.0), t / r3)
}

/// The G2 cone over the nearly Kähler S³×S³.
pub fn cone_state<T: Real>(t: T) -> SU3StructureState<T> {
    SU3StructureState::full(t / lit(3.0), t / lit::<T>(3.0).sqrt())
}
