//! The homogeneous Sasaki–Einstein structure on S²×S³ seen at infinity of an ALC end.

use g2_liealg::{Algebra, CoframeAlgebra, LieValuedForm};
use g2_numerics::lit;

use crate::{f64_of, GeomError, Real};

#[derive(Clone, Debug)]
pub struct SasakiEinstein<T> {
    pub alpha: LieValuedForm<T>,
    pub omega: [LieValuedForm<T>; 3],
    /// Connection form of the circle fibration over S²×S³.
    pub eta_infty: LieValuedForm<T>,
}

/// Forms on the S³×S³ coframe:
/// η∞ = 2η₁⁺, α = −(4/3)η₁⁻, ω₁ = −(4/3)(η₂⁺η₃⁻ + η₂⁻η₃⁺),
/// ω₂ = (4/3)(η₂⁺η₃⁺ − η₂⁻η₃⁻), ω₃ = (4/3)(η₂⁺η₂⁻ + η₃⁺η₃⁻).
pub fn sasaki_einstein_s2s3<T: Real>() -> SasakiEinstein<T> {
    let e = |i: usize| LieValuedForm::basis(i, Algebra::Scalar, vec![T::one()]);
    let k: T = lit(4.0 / 3.0);
    let (p2, p3, m1, m2, m3) = (e(2), e(3), e(4), e(5), e(6));
    SasakiEinstein {
        alpha: m1.scale(-k),
        omega: [
            p2.wedge(&m3).add(&m2.wedge(&p3)).scale(-k),
            p2.wedge(&p3).sub(&m2.wedge(&m3)).scale(k),
            p2.wedge(&m2).add(&p3.wedge(&m3)).scale(k),
        ],
        eta_infty: e(1).scale(lit(2.0)),
    }
}

/// Data of an asymptotically locally conical end: circle length m, decay rate ν and
/// the circle connection η∞.
#[derive(Clone, Debug)]
pub struct AlcData<T> {
    pub m: T,
    pub nu: T,
    pub eta_infty: LieValuedForm<T>,
}

impl<T: Real> AlcData<T> {
    /// Checks m > 0, ν < 0, and dη∞ = 0 whenever ν < −1.
    pub fn new(m: T, nu: T, eta_infty: LieValuedForm<T>, alg: &CoframeAlgebra<T>) -> Result<Self, GeomError> {
        if !(m > T::zero()) {
            return Err(GeomError::Domain { value: f64_of(m), start: 0.0 });
        }
        if !(nu < T::zero()) {
            return Err(GeomError::Degenerate(format!("decay rate {nu:?} must be negative")));
        }
        if nu < -T::one() {
            let d = eta_infty.d(alg)?;
            if d.max_abs() > 1e-12 {
                return Err(GeomError::Degenerate("connection at infinity not flat although nu < -1".into()));
            }
        }
        Ok(Self { m, nu, eta_infty })
    }

    /// The BGGG end: m = 1, ν = −1.
    pub fn bggg() -> Self {
        Self { m: T::one(), nu: -T::one(), eta_infty: sasaki_einstein_s2s3().eta_infty }
    }
}
