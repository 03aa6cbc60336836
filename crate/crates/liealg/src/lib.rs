//! Invariant exterior calculus on homogeneous coframes.
//!
//! A coframe is fixed by structure constants with d eᵏ = −Σ_{i<j} c[k][i][j] eⁱ∧eʲ,
//! extended by a dt slot at index 0. Forms carry gauge-algebra coefficients and
//! optional t-derivatives, which is enough to compute curvatures of cohomogeneity-one
//! connections and G2-structure torsion intrinsically.

mod coframe;
mod form;
mod metric;
mod scalar;

pub use coframe::{mask_of, slots_of, wedge_sign, CoframeAlgebra, Mask, DT, MAX_SLOTS};
pub use form::{Algebra, LieValuedForm, Product, Rate};
pub use metric::DiagonalMetric;
pub use scalar::Scalar;

use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("time-dependent form has no t-derivative attached")]
    MissingRate,
    #[error("coframe with {0} slots exceeds the bitmask width")]
    TooManySlots(usize),
    #[error("structure constants not antisymmetric at ({0}, {1}, {2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("coframe index out of range or touching dt")]
    BadIndex,
    #[error("wedge of two algebra-valued forms needs bracket or inner variant")]
    AmbiguousProduct,
    #[error("algebra mismatch")]
    AlgebraMismatch,
    #[error("unexpected degree {0}")]
    Degree(usize),
    #[error("metric slots must be increasing and match scales")]
    BadMetric,
    #[error("metric scale not positive")]
    NonPositiveScale,
    #[error("monomial {0:#b} not supported by the metric")]
    OutsideMetric(Mask),
}

pub type Exact = Ratio<i64>;
pub type Form = LieValuedForm<f64>;
pub type ExactForm = LieValuedForm<Exact>;
pub type Coframe = CoframeAlgebra<f64>;
pub type ExactCoframe = CoframeAlgebra<Exact>;
pub type Metric = DiagonalMetric<f64>;

/// Unit su2 generator Tᵢ as a coefficient vector.
pub fn t_basis<T: Scalar>(i: usize) -> Vec<T> {
    (0..3).map(|j| if i == j { T::one() } else { T::zero() }).collect()
}
