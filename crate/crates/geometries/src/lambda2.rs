//! Bryant–Salamon metrics on Λ²₋ of S⁴ and CP², over the twistor-space coframes.

use g2_liealg::{Algebra, CoframeAlgebra, DiagonalMetric, LieValuedForm};
use g2_numerics::lit;

use crate::su3::G2Structure;
use crate::{f64_of, GeomError, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lambda2Base {
    S4,
    CP2,
}

impl Lambda2Base {
    pub fn coframe<T: Real>(self) -> CoframeAlgebra<T> {
        match self {
            Lambda2Base::S4 => CoframeAlgebra::sp2(),
            Lambda2Base::CP2 => CoframeAlgebra::su3(),
        }
    }

    /// Slots of the vertical triple (ω¹, ω², ω³), or (s₁, s₂, s₃) on SU(3).
    pub fn vertical(self) -> [usize; 3] {
        match self {
            Lambda2Base::S4 => [8, 9, 10],
            Lambda2Base::CP2 => [6, 7, 8],
        }
    }
}

/// Profile at one value of the fibre coordinate s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lambda2Point<T> {
    pub s: T,
    /// dt/ds.
    pub f: T,
    /// Length of ω², ω³.
    pub a: T,
    /// Length of e¹..e⁴.
    pub b: T,
    pub adot: T,
    pub bdot: T,
}

/// f = (1+s²)^(-1/4), a = 2s·f, b = √2/f, with t-derivatives (d/dt = f⁻¹ d/ds).
pub fn lambda2s4_profile<T: Real>(s: T) -> Result<Lambda2Point<T>, GeomError> {
    if s < T::zero() {
        return Err(GeomError::Domain { value: f64_of(s), start: 0.0 });
    }
    let two: T = lit(2.0);
    let f = (T::one() + s * s).powf(lit(-0.25));
    let f2 = f * f;
    Ok(Lambda2Point {
        s,
        f,
        a: two * s * f,
        b: two.sqrt() / f,
        adot: two - s * s * f2 * f2,
        bdot: s * f2 / two.sqrt(),
    })
}

/// The torsion-free G2-structure at fibre radius s:
/// φ = dt∧(a²ω²³ + b²Ω₁) + ab²(ω³∧Ω₂ − ω²∧Ω₃),
/// ψ = b⁴e¹²³⁴ − a²b²ω²³∧Ω₁ − ab² dt∧(ω²∧Ω₂ + ω³∧Ω₃),
/// with Ω₁ = e¹² − e³⁴, Ω₂ = e¹³ − e⁴², Ω₃ = e¹⁴ − e²³.
pub fn lambda2_structure<T: Real>(base: Lambda2Base, s: T) -> Result<G2Structure<T>, GeomError> {
    let p = lambda2s4_profile(s)?;
    if p.a <= T::zero() {
        return Err(GeomError::Degenerate("zero section: fibre directions collapse".into()));
    }
    let frame = |slot: usize, v: T, dv: T| LieValuedForm::basis(slot, Algebra::Scalar, vec![T::one()]).scale_jet(&[v, dv]);
    let e: Vec<_> = (1..=4).map(|i| frame(i, p.b, p.bdot)).collect();
    let [_, v2, v3] = base.vertical();
    let w2 = frame(v2, p.a, p.adot);
    let w3 = frame(v3, p.a, p.adot);
    let dt = LieValuedForm::basis(0, Algebra::Scalar, vec![T::one()]);
    let ee = |i: usize, j: usize| e[i - 1].wedge(&e[j - 1]);
    let om1 = ee(1, 2).sub(&ee(3, 4));
    let om2 = ee(1, 3).sub(&ee(4, 2));
    let om3 = ee(1, 4).sub(&ee(2, 3));
    let w23 = w2.wedge(&w3);

    let phi = dt
        .wedge(&w23.add(&om1))
        .add(&w3.wedge(&om2))
        .sub(&w2.wedge(&om3));
    let psi = ee(1, 2)
        .wedge(&ee(3, 4))
        .sub(&w23.wedge(&om1))
        .sub(&dt.wedge(&w2.wedge(&om2).add(&w3.wedge(&om3))));
    let metric = DiagonalMetric::new(vec![0, 1, 2, 3, 4, v2, v3], vec![T::one(), p.b, p.b, p.b, p.b, p.a, p.a])?;
    Ok(G2Structure { phi, psi, metric })
}
