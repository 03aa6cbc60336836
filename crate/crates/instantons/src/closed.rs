//! Explicit instantons on the Bryant–Salamon and BGGG ℝ⁴×S³, in the canonical r coordinates.

use g2_geometries::{bggg_canonical, f64_of, GeomError, Profile, Real};
use g2_liealg::{Algebra, LieValuedForm};
use g2_numerics::lit;

use crate::InstantonError;

/// A value with its t-derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub rate: T,
}

fn check_bs<T: Real>(r: T) -> Result<(), InstantonError> {
    if r < T::one() {
        return Err(GeomError::Domain { value: f64_of(r), start: 1.0 }.into());
    }
    Ok(())
}

/// dr/dt = √(1 − r⁻³) on Bryant–Salamon.
fn bs_speed<T: Real>(r: T) -> T {
    (T::one() - r.powi(-3)).sqrt()
}

/// Clarke's x(r) = 2x₁r√(1 − r⁻³) / (3 + x₁(r² − 1)).
pub fn clarke_closed_form<T: Real>(x1: T, r: T) -> Result<T, InstantonError> {
    check_bs(r)?;
    let den = lit::<T>(3.0) + x1 * (r * r - T::one());
    if den == T::zero() {
        return Err(InstantonError::Pole(f64_of(r)));
    }
    Ok(lit::<T>(2.0) * x1 * r * bs_speed(r) / den)
}

/// Coefficient c = A₁x of ΣTᵢ⊗ηᵢ⁺ for Clarke's instanton, c = 2x₁(r³−1) / (3r(3 + x₁(r²−1))).
pub fn clarke_coefficient<T: Real>(x1: T, r: T) -> Result<Jet<T>, InstantonError> {
    check_bs(r)?;
    let three: T = lit(3.0);
    let n = lit::<T>(2.0) * x1 * (r * r * r - T::one());
    let d = three * r * (three + x1 * (r * r - T::one()));
    if d == T::zero() {
        return Err(InstantonError::Pole(f64_of(r)));
    }
    let dn = lit::<T>(6.0) * x1 * r * r;
    let dd = lit::<T>(9.0) + lit::<T>(9.0) * x1 * r * r - three * x1;
    Ok(Jet { value: n / d, rate: (dn * d - n * dd) / (d * d) * bs_speed(r) })
}

/// A^lim coefficient 2(r³−1)/(3r(r²−1)) = 2(r²+r+1)/(3r(r+1)), equal to 1 at r = 1.
pub fn alim_closed_form<T: Real>(r: T) -> Result<T, InstantonError> {
    check_bs(r)?;
    Ok(lit::<T>(2.0) * (r * r + r + T::one()) / (lit::<T>(3.0) * r * (r + T::one())))
}

pub fn alim_coefficient<T: Real>(r: T) -> Result<Jet<T>, InstantonError> {
    let value = alim_closed_form(r)?;
    let q = r * (r + T::one());
    let dr = -lit::<T>(2.0) / lit(3.0) * (lit::<T>(2.0) * r + T::one()) / (q * q);
    Ok(Jet { value, rate: dr * bs_speed(r) })
}

fn eta_plus<T: Real>(i: usize, c: Jet<T>) -> LieValuedForm<T> {
    LieValuedForm::basis(1 + i, Algebra::U1, vec![T::one()]).scale_jet(&[c.value, c.rate])
}

/// Abelian instanton ((r³ − 1)/r) Σ xᵢηᵢ⁺ on Bryant–Salamon.
pub fn abelian_bs<T: Real>(x: [T; 3], r: T) -> Result<LieValuedForm<T>, InstantonError> {
    check_bs(r)?;
    let p = r * r - T::one() / r;
    let dp = (lit::<T>(2.0) * r + T::one() / (r * r)) * bs_speed(r);
    let mut a = LieValuedForm::zero(1, Algebra::U1);
    for (i, xi) in x.into_iter().enumerate() {
        a = a.add(&eta_plus(i, Jet { value: xi * p, rate: xi * dp }));
    }
    Ok(a)
}

/// The BGGG abelian profiles: p(r) = (r² − 81/16)/(r² − 9/16) on η₁⁺ and
/// q(r) = (r − 9/4)eʳ / (√r (r + 9/4)²) on η₂⁺, η₃⁺, with t-derivatives (dr/dt = A₁).
pub fn bggg_abelian_profiles<T: Real>(r: T) -> Result<(Jet<T>, Jet<T>), InstantonError> {
    let speed = bggg_canonical::<T>().at(r)?.state.a[0];
    let (c9, c3) = (lit::<T>(9.0 / 4.0), lit::<T>(3.0 / 4.0));
    let lo = r * r - c3 * c3;
    let p = (r * r - c9 * c9) / lo;
    let dp = lit::<T>(9.0) * r / (lo * lo);
    let w = r.exp() / (r.sqrt() * (r + c9) * (r + c9));
    let q = (r - c9) * w;
    let dq = w * (T::one() + (r - c9) * (T::one() - T::one() / (lit::<T>(2.0) * r) - lit::<T>(2.0) / (r + c9)));
    Ok((Jet { value: p, rate: dp * speed }, Jet { value: q, rate: dq * speed }))
}

pub fn abelian_bggg<T: Real>(x: [T; 3], r: T) -> Result<LieValuedForm<T>, InstantonError> {
    let (p, q) = bggg_abelian_profiles(r)?;
    let scaled = |j: Jet<T>, k: T| Jet { value: j.value * k, rate: j.rate * k };
    Ok(eta_plus(0, scaled(p, x[0])).add(&eta_plus(1, scaled(q, x[1]))).add(&eta_plus(2, scaled(q, x[2]))))
}
