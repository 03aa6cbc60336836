//! Instantons on the Λ²₋ metrics over S⁴ and CP², and the u_c profile of the SU(3) families.

use g2_geometries::{f64_of, lambda2s4_profile, GeomError, Lambda2Base, Real};
use g2_liealg::{t_basis, Algebra, LieValuedForm};
use g2_numerics::lit;

use crate::InstantonError;

/// The SU(2) (S⁴) or SO(3) (CP²) instanton A = A_c ± a(s)(T₂⊗v₂ + T₃⊗v₃) at fibre radius s,
/// where A_c is T₁ along ω¹ (resp. α) and (v₂, v₃) are (ω², ω³) (resp. (ν₁, ν₂)).
#[derive(Clone, Debug)]
pub struct Lambda2Instanton<T> {
    pub s: T,
    /// a(s) = ±(1 + s²)^(-1/2).
    pub a: T,
    /// da/dt.
    pub adot: T,
    pub connection: LieValuedForm<T>,
}

impl<T: Real> Lambda2Instanton<T> {
    /// s²f⁴ − (1 − a²), zero on the instanton.
    pub fn constraint_defect(&self) -> T {
        let f = lambda2s4_profile(self.s).map(|p| p.f).unwrap_or_else(|_| T::nan());
        self.s * self.s * f.powi(4) - (T::one() - self.a * self.a)
    }

    /// da/dt + s f³ a, zero on the instanton.
    pub fn ode_defect(&self) -> T {
        let f = lambda2s4_profile(self.s).map(|p| p.f).unwrap_or_else(|_| T::nan());
        self.adot + self.s * f.powi(3) * self.a
    }
}

pub fn lambda2_instanton<T: Real>(base: Lambda2Base, s: T, plus: bool) -> Result<Lambda2Instanton<T>, InstantonError> {
    let p = lambda2s4_profile(s)?;
    let sign = if plus { T::one() } else { -T::one() };
    let q = T::one() + s * s;
    let a = sign / q.sqrt();
    // da/dt = (da/ds)/f
    let adot = -sign * s / (q * q.sqrt()) / p.f;
    let [v1, v2, v3] = base.vertical();
    let gen = |slot: usize, i: usize| LieValuedForm::basis(slot, Algebra::Su2, t_basis(i));
    let connection = gen(v1, 0).add(&gen(v2, 1).add(&gen(v3, 2)).scale_jet(&[a, adot]));
    Ok(Lambda2Instanton { s, a, adot, connection })
}

/// θ = Σ ηⁱ⊗Tᵢ on the Sp(2) coframe, the lifted spin connection of S⁴.
pub fn spin_connection<T: Real>() -> LieValuedForm<T> {
    let mut theta = LieValuedForm::zero(1, Algebra::Su2);
    for i in 0..3 {
        theta = theta.add(&LieValuedForm::basis(5 + i, Algebra::Su2, t_basis(i)));
    }
    theta
}

/// u_c(s) together with the radicand u_c² − 1 of the SU(3) families.
///
/// For c ≥ 0 one has u_c ≤ 1, so the radicand is nonpositive away from the trivial
/// cases. `root` holds √|u_c² − 1| and `imaginary` flags a negative radicand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UcValue<T> {
    pub u: T,
    pub radicand: T,
    pub root: T,
    pub imaginary: bool,
}

pub fn su3_family_u<T: Real>(c: T, s: T) -> Result<UcValue<T>, InstantonError> {
    if s < T::zero() {
        return Err(GeomError::Domain { value: f64_of(s), start: 0.0 }.into());
    }
    if c < T::zero() {
        return Err(GeomError::Domain { value: f64_of(c), start: 0.0 }.into());
    }
    let two: T = lit(2.0);
    let s2 = s * s;
    let u = T::one() - two * c * s2 / (s2 * (T::one() + c) + two * ((T::one() + s2).sqrt() + T::one()));
    let radicand = u * u - T::one();
    Ok(UcValue { u, radicand, root: radicand.abs().sqrt(), imaginary: radicand < T::zero() })
}
