//! SU(2)²-invariant SU(3)-structures on S³×S³ and the G2-structure they sweep out.

use g2_liealg::{Algebra, CoframeAlgebra, DiagonalMetric, FormError, LieValuedForm};
use g2_numerics::lit;

use crate::{GeomError, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// All Aᵢ equal and all Bᵢ equal.
    Full,
    /// A₂ = A₃ and B₂ = B₃.
    U1Reduced,
    Generic,
}

/// Metric functions on the principal orbit, g_t = Σ (2Aᵢηᵢ⁺)² + (2Bᵢηᵢ⁻)².
///
/// The same shape also carries componentwise t-derivatives, in which case the
/// positivity requirement does not apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU3StructureState<T> {
    pub a: [T; 3],
    pub b: [T; 3],
}

impl<T: Real> SU3StructureState<T> {
    pub fn new(a: [T; 3], b: [T; 3]) -> Result<Self, GeomError> {
        let s = Self { a, b };
        s.validate()?;
        Ok(s)
    }

    /// U(1)-reduced state (A₁, A₂, A₂, B₁, B₂, B₂), with no positivity check.
    pub fn reduced(a1: T, a2: T, b1: T, b2: T) -> Self {
        Self { a: [a1, a2, a2], b: [b1, b2, b2] }
    }

    pub fn full(a: T, b: T) -> Self {
        Self { a: [a; 3], b: [b; 3] }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        for v in self.a.iter().chain(&self.b) {
            if !(*v > T::zero()) {
                return Err(GeomError::Degenerate(format!("{self:?}")));
            }
        }
        Ok(())
    }

    pub fn symmetry(&self, tol: T) -> Symmetry {
        let close = |x: T, y: T| (x - y).abs() <= tol * (T::one() + x.abs().max(y.abs()));
        if close(self.a[1], self.a[2]) && close(self.b[1], self.b[2]) {
            if close(self.a[0], self.a[1]) && close(self.b[0], self.b[1]) {
                Symmetry::Full
            } else {
                Symmetry::U1Reduced
            }
        } else {
            Symmetry::Generic
        }
    }

    pub fn values(&self) -> [T; 6] {
        [self.a[0], self.a[1], self.a[2], self.b[0], self.b[1], self.b[2]]
    }

    pub fn from_values(v: [T; 6]) -> Self {
        Self { a: [v[0], v[1], v[2]], b: [v[3], v[4], v[5]] }
    }

    /// Coframe lengths (2A₁, 2A₂, 2A₃, 2B₁, 2B₂, 2B₃).
    pub fn scales(&self) -> [T; 6] {
        let two = T::one() + T::one();
        self.values().map(|v| two * v)
    }

    /// Metric on dt and the six orbit directions of the S³×S³ coframe.
    pub fn metric(&self) -> Result<DiagonalMetric<T>, GeomError> {
        let mut scales = vec![T::one()];
        scales.extend(self.scales());
        Ok(DiagonalMetric::leading(scales)?)
    }

    /// Metric on the orbit alone (slots 1..=6).
    pub fn orbit_metric(&self) -> Result<DiagonalMetric<T>, GeomError> {
        Ok(DiagonalMetric::new((1..=6).collect(), self.scales().to_vec())?)
    }
}

/// ω, γ₁ = Re Ω, γ₂ = Im Ω on the principal orbit.
#[derive(Clone, Debug)]
pub struct Su3Forms<T> {
    pub omega: LieValuedForm<T>,
    pub gamma1: LieValuedForm<T>,
    pub gamma2: LieValuedForm<T>,
}

/// Build the SU(3)-structure forms from scaled coframes Eᵢ = 2Aᵢηᵢ⁺, Fᵢ = 2Bᵢηᵢ⁻:
/// ω = ΣFᵢ∧Eᵢ, γ₁ = F₁₂₃ − ΣEᵢEⱼF_k, γ₂ = −E₁₂₃ + ΣFᵢFⱼE_k (cyclic sums).
///
/// With `rate` the forms carry their t-derivatives, so `d` on the dt-extended
/// coframe sees the full evolution.
pub fn su3_forms<T: Real>(s: &SU3StructureState<T>, rate: Option<&SU3StructureState<T>>) -> Su3Forms<T> {
    let two: T = lit(2.0);
    let frame = |slot: usize, v: T, dv: Option<T>| {
        let e = LieValuedForm::basis(slot, Algebra::Scalar, vec![T::one()]);
        match dv {
            Some(dv) => e.scale_jet(&[two * v, two * dv]),
            None => e.scale(two * v),
        }
    };
    let e: Vec<_> = (0..3).map(|i| frame(1 + i, s.a[i], rate.map(|r| r.a[i]))).collect();
    let f: Vec<_> = (0..3).map(|i| frame(4 + i, s.b[i], rate.map(|r| r.b[i]))).collect();

    let mut omega = LieValuedForm::zero(2, Algebra::Scalar);
    for i in 0..3 {
        omega = omega.add(&f[i].wedge(&e[i]));
    }
    let mut mixed1 = LieValuedForm::zero(3, Algebra::Scalar);
    let mut mixed2 = LieValuedForm::zero(3, Algebra::Scalar);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        mixed1 = mixed1.add(&e[i].wedge(&e[j]).wedge(&f[k]));
        mixed2 = mixed2.add(&f[i].wedge(&f[j]).wedge(&e[k]));
    }
    let gamma1 = f[0].wedge(&f[1]).wedge(&f[2]).sub(&mixed1);
    let gamma2 = mixed2.sub(&e[0].wedge(&e[1]).wedge(&e[2]));
    Su3Forms { omega, gamma1, gamma2 }
}

/// φ, ψ and the metric of the G2-structure dt² + g_t.
#[derive(Clone, Debug)]
pub struct G2Structure<T> {
    pub phi: LieValuedForm<T>,
    pub psi: LieValuedForm<T>,
    pub metric: DiagonalMetric<T>,
}

impl<T: Real> G2Structure<T> {
    /// (|dφ|, |dψ|) in the structure's own metric.
    pub fn torsion(&self, alg: &CoframeAlgebra<T>) -> Result<(T, T), GeomError> {
        let dphi = self.phi.d(alg)?;
        let dpsi = self.psi.d(alg)?;
        Ok((self.norm(&dphi)?, self.norm(&dpsi)?))
    }

    /// +1 when φ induces the orientation dt∧(metric slots in order), −1 otherwise.
    /// Uses (ι_∂t φ)²∧φ = 6 vol_φ, as |∂t| = 1.
    pub fn orientation(&self) -> T {
        let a = self.phi.dt_part();
        let top = a.wedge(&a).wedge(&self.phi);
        let total = top.terms().values().fold(T::zero(), |s, c| s + c[0]);
        if total < T::zero() {
            -T::one()
        } else {
            T::one()
        }
    }

    pub fn norm(&self, a: &LieValuedForm<T>) -> Result<T, GeomError> {
        match self.metric.norm_sq(a) {
            Ok(n) => Ok(n.sqrt()),
            // round-off may leave tiny components along isotropy directions
            Err(FormError::OutsideMetric(_)) => Ok(lit(a.max_abs())),
            Err(e) => Err(e.into()),
        }
    }
}

/// φ = dt∧ω + γ₁, ψ = ω²/2 − dt∧γ₂.
pub fn g2_from_su3<T: Real>(
    s: &SU3StructureState<T>,
    rate: Option<&SU3StructureState<T>>,
) -> Result<G2Structure<T>, GeomError> {
    s.validate()?;
    let forms = su3_forms(s, rate);
    let dt = LieValuedForm::basis(0, Algebra::Scalar, vec![T::one()]);
    let phi = dt.wedge(&forms.omega).add(&forms.gamma1);
    let psi = forms.omega.wedge(&forms.omega).scale(lit(0.5)).sub(&dt.wedge(&forms.gamma2));
    Ok(G2Structure { phi, psi, metric: s.metric()? })
}
