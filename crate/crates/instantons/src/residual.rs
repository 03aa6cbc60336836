//! Intrinsic checks of the instanton and Calabi–Yau monopole equations.

use g2_geometries::{G2Structure, Real, SasakiEinstein};
use g2_liealg::{Algebra, CoframeAlgebra, DiagonalMetric, FormError, LieValuedForm};
use g2_numerics::lit;

use crate::InstantonError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T> {
    /// |F∧ψ|.
    pub psi: T,
    /// |F∧φ + *F|, with * in the orientation induced by φ.
    pub asd: T,
    /// |F|, for scale.
    pub curvature: T,
}

fn norm<T: Real>(m: &DiagonalMetric<T>, a: &LieValuedForm<T>) -> Result<T, FormError> {
    match m.norm_sq(a) {
        Ok(n) => Ok(n.sqrt()),
        // invariant connections can leave round-off along isotropy directions
        Err(FormError::OutsideMetric(_)) => Ok(lit(a.max_abs())),
        Err(e) => Err(e),
    }
}

/// Residuals of F_A∧ψ = 0 and of F_A∧φ = −*F_A for a connection carrying its t-derivative.
pub fn instanton_residual<T: Real>(
    a: &LieValuedForm<T>,
    g2: &G2Structure<T>,
    alg: &CoframeAlgebra<T>,
) -> Result<Residual<T>, InstantonError> {
    let f = a.curvature(alg)?;
    let psi = norm(&g2.metric, &f.wedge(&g2.psi))?;
    let asd = match g2.metric.hodge_star(&f) {
        Ok(star) => norm(&g2.metric, &f.wedge(&g2.phi).add(&star.scale(g2.orientation())))?,
        Err(FormError::OutsideMetric(_)) => lit(f.max_abs()),
        Err(e) => return Err(e.into()),
    };
    Ok(Residual { psi, asd, curvature: norm(&g2.metric, &f)? })
}

/// Kähler form and holomorphic volume form of the Calabi–Yau cone over S²×S³ at radius ρ,
/// on the S³×S³ coframe with dρ in the dt slot:
/// ω = ρdρ∧α − ρ²ω₁, Re Ω = ρ²dρ∧ω₂ + ρ³α∧ω₃, Im Ω = ρ²dρ∧ω₃ − ρ³α∧ω₂.
#[derive(Clone, Debug)]
pub struct ConeForms<T> {
    pub omega: LieValuedForm<T>,
    pub re_omega: LieValuedForm<T>,
    pub im_omega: LieValuedForm<T>,
}

pub fn cone_forms<T: Real>(se: &SasakiEinstein<T>, rho: T) -> ConeForms<T> {
    let dr = LieValuedForm::basis(0, Algebra::Scalar, vec![T::one()]);
    let jet = |p: i32| {
        let k: T = lit(p as f64);
        [rho.powi(p), k * rho.powi(p - 1), k * (k - T::one()) * rho.powi(p - 2)]
    };
    let [a, w1, w2, w3] = [&se.alpha, &se.omega[0], &se.omega[1], &se.omega[2]];
    ConeForms {
        omega: dr.wedge(a).scale_jet(&jet(1)).sub(&w1.scale_jet(&jet(2))),
        re_omega: dr.wedge(w2).scale_jet(&jet(2)).add(&a.wedge(w3).scale_jet(&jet(3))),
        im_omega: dr.wedge(w3).scale_jet(&jet(2)).sub(&a.wedge(w2).scale_jet(&jet(3))),
    }
}

/// Residuals (|F_a∧Im Ω + ½ d_aΦ∧ω²|, |F_a∧ω²|) of the Calabi–Yau monopole equations,
/// measured as the largest coefficient on the coframe.
pub fn cy_monopole_residual<T: Real>(
    a: &LieValuedForm<T>,
    higgs: &LieValuedForm<T>,
    cone: &ConeForms<T>,
    alg: &CoframeAlgebra<T>,
) -> Result<(f64, f64), InstantonError> {
    let f = a.curvature(alg)?;
    let omega2 = cone.omega.wedge(&cone.omega);
    let dphi = higgs.covariant_d(a, alg)?;
    let first = f.wedge(&cone.im_omega).add(&dphi.wedge(&omega2).scale(lit(0.5)));
    Ok((first.max_abs(), f.wedge(&omega2).max_abs()))
}
