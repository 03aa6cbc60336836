use crate::coframe::{slots_of, wedge_sign, Mask};
use crate::form::{Algebra, LieValuedForm};
use crate::scalar::Scalar;
use crate::FormError;

/// Diagonal metric on a subframe: the coframe direction `slots[i]` has length `scales[i]`.
///
/// Orientation is the increasing slot order, so dt (slot 0) comes first.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMetric<T> {
    slots: Vec<usize>,
    scales: Vec<T>,
}

impl<T: Scalar + PartialOrd> DiagonalMetric<T> {
    pub fn new(slots: Vec<usize>, scales: Vec<T>) -> Result<Self, FormError> {
        if slots.len() != scales.len() || slots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormError::BadMetric);
        }
        if scales.iter().any(|s| *s <= T::zero()) {
            return Err(FormError::NonPositiveScale);
        }
        Ok(Self { slots, scales })
    }

    /// Metric on slots 0..scales.len().
    pub fn leading(scales: Vec<T>) -> Result<Self, FormError> {
        Self::new((0..scales.len()).collect(), scales)
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn scales(&self) -> &[T] {
        &self.scales
    }

    fn full_mask(&self) -> Mask {
        self.slots.iter().fold(0, |m, s| m | (1 << s))
    }

    fn scale_of(&self, slot: usize) -> T {
        let i = self.slots.iter().position(|&s| s == slot).expect("slot in metric");
        self.scales[i].clone()
    }

    fn product(&self, mask: Mask) -> T {
        slots_of(mask).into_iter().fold(T::one(), |acc, s| acc * self.scale_of(s))
    }

    pub fn volume_form(&self) -> LieValuedForm<T> {
        let full = self.full_mask();
        LieValuedForm::from_terms(self.slots.len(), Algebra::Scalar, [(full, vec![self.product(full)])])
    }

    /// *e^I = sign(I, J) (Π_J s / Π_I s) e^J with J the complement of I.
    pub fn hodge_star(&self, a: &LieValuedForm<T>) -> Result<LieValuedForm<T>, FormError> {
        let full = self.full_mask();
        let n = self.slots.len();
        if a.degree() > n {
            return Err(FormError::Degree(a.degree()));
        }
        let mut terms = Vec::new();
        for (mask, c) in a.terms() {
            if mask & !full != 0 {
                return Err(FormError::OutsideMetric(*mask));
            }
            let comp = full & !mask;
            let sign = wedge_sign(*mask, comp).expect("disjoint");
            let k = T::int(sign as i64) * self.product(comp) / self.product(*mask);
            terms.push((comp, c.iter().map(|x| k.clone() * x.clone()).collect()));
        }
        Ok(LieValuedForm::from_terms(n - a.degree(), a.algebra(), terms).time_dependent())
    }

    /// Pointwise |a|² with ⟨Tᵢ,Tⱼ⟩ = 2δᵢⱼ on su2 coefficients.
    pub fn norm_sq(&self, a: &LieValuedForm<T>) -> Result<T, FormError> {
        let full = self.full_mask();
        let mut total = T::zero();
        for (mask, c) in a.terms() {
            if mask & !full != 0 {
                return Err(FormError::OutsideMetric(*mask));
            }
            let p = self.product(*mask);
            total = total + a.algebra().pairing(c, c) / (p.clone() * p);
        }
        Ok(total)
    }
}
