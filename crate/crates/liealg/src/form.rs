use std::collections::BTreeMap;

use crate::coframe::{mask_of, wedge_sign, CoframeAlgebra, Mask, DT};
use crate::scalar::Scalar;
use crate::FormError;

/// Gauge algebra carried by a form's coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    Scalar,
    U1,
    /// Basis T₁,T₂,T₃ with [Tᵢ,Tⱼ] = 2ε_{ijk}T_k and ⟨Tᵢ,Tⱼ⟩ = 2δᵢⱼ.
    Su2,
    /// so(3) image of su(3) data; same bracket and pairing as su2.
    So3,
}

impl Algebra {
    pub fn dim(self) -> usize {
        match self {
            Algebra::Scalar | Algebra::U1 => 1,
            Algebra::Su2 | Algebra::So3 => 3,
        }
    }

    fn is_nonabelian(self) -> bool {
        matches!(self, Algebra::Su2 | Algebra::So3)
    }

    /// Ad-invariant pairing of two coefficient vectors.
    pub fn pairing<T: Scalar>(self, x: &[T], y: &[T]) -> T {
        let dot = x.iter().zip(y).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        if self.is_nonabelian() {
            T::int(2) * dot
        } else {
            dot
        }
    }

    fn bracket<T: Scalar>(self, x: &[T], y: &[T]) -> Vec<T> {
        if !self.is_nonabelian() {
            return vec![T::zero(); self.dim()];
        }
        let two = T::int(2);
        let c = |i: usize, j: usize| x[i].clone() * y[j].clone() - x[j].clone() * y[i].clone();
        vec![two.clone() * c(1, 2), two.clone() * c(2, 0), two * c(0, 1)]
    }
}

/// Time-derivative data attached to a form.
#[derive(Clone, Debug, PartialEq)]
pub enum Rate<T> {
    /// Coefficients do not depend on t.
    Static,
    /// Coefficients depend on t but the derivative was not supplied.
    Missing,
    Known(Box<LieValuedForm<T>>),
}

/// How two algebra-valued coefficients multiply under a wedge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Product {
    /// At least one side scalar-valued.
    Scalar,
    /// [a∧b], Lie bracket of coefficients.
    Bracket,
    /// ⟨a∧b⟩, scalar-valued.
    Inner,
}

/// Invariant differential form with coefficients in a gauge algebra.
///
/// The dt slot is index 0, so a form splits as dt∧α + β through
/// [`dt_part`](Self::dt_part) and [`spatial_part`](Self::spatial_part).
#[derive(Clone, Debug, PartialEq)]
pub struct LieValuedForm<T> {
    degree: usize,
    algebra: Algebra,
    terms: BTreeMap<Mask, Vec<T>>,
    rate: Rate<T>,
}

impl<T: Scalar> LieValuedForm<T> {
    pub fn zero(degree: usize, algebra: Algebra) -> Self {
        Self { degree, algebra, terms: BTreeMap::new(), rate: Rate::Static }
    }

    pub fn constant(value: T) -> Self {
        Self::zero(0, Algebra::Scalar).with_term(0, vec![value])
    }

    pub fn basis(slot: usize, algebra: Algebra, coeff: Vec<T>) -> Self {
        Self::zero(1, algebra).with_term(1 << slot, coeff)
    }

    /// Scalar monomial c·e^{s₁}∧…∧e^{s_p} in the given (unsorted) slot order.
    pub fn mono(slots: &[usize], c: T) -> Self {
        match mask_of(slots) {
            Some((mask, sign)) => Self::zero(slots.len(), Algebra::Scalar).with_term(mask, vec![T::int(sign as i64) * c]),
            None => Self::zero(slots.len(), Algebra::Scalar),
        }
    }

    fn with_term(mut self, mask: Mask, coeff: Vec<T>) -> Self {
        assert_eq!(coeff.len(), self.algebra.dim(), "coefficient arity");
        assert_eq!(mask.count_ones() as usize, self.degree, "monomial degree");
        if coeff.iter().any(|c| !c.is_zero()) {
            self.terms.insert(mask, coeff);
        }
        self
    }

    pub fn from_terms(degree: usize, algebra: Algebra, terms: impl IntoIterator<Item = (Mask, Vec<T>)>) -> Self {
        let mut out = Self::zero(degree, algebra);
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out
    }

    fn accumulate(&mut self, mask: Mask, coeff: Vec<T>) {
        let entry = self.terms.entry(mask).or_insert_with(|| vec![T::zero(); coeff.len()]);
        for (e, c) in entry.iter_mut().zip(coeff) {
            *e = e.clone() + c;
        }
        if entry.iter().all(|c| c.is_zero()) {
            self.terms.remove(&mask);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Mask, Vec<T>> {
        &self.terms
    }

    pub fn rate(&self) -> &Rate<T> {
        &self.rate
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, slots: &[usize]) -> Vec<T> {
        let zero = vec![T::zero(); self.algebra.dim()];
        match mask_of(slots) {
            Some((mask, sign)) => self
                .terms
                .get(&mask)
                .map(|c| c.iter().map(|x| T::int(sign as i64) * x.clone()).collect())
                .unwrap_or(zero),
            None => zero,
        }
    }

    /// Attach the t-derivative of every coefficient.
    pub fn with_rate(mut self, rate: Self) -> Self {
        assert_eq!(rate.degree, self.degree);
        self.rate = Rate::Known(Box::new(rate));
        self
    }

    /// Mark as t-dependent with no derivative available.
    pub fn time_dependent(mut self) -> Self {
        self.rate = Rate::Missing;
        self
    }

    pub fn derivative(&self) -> Result<Self, FormError> {
        match &self.rate {
            Rate::Static => Ok(Self::zero(self.degree, self.algebra)),
            Rate::Missing => Err(FormError::MissingRate),
            Rate::Known(r) => Ok((**r).clone()),
        }
    }

    fn map_coeffs(&self, f: &impl Fn(&T) -> T) -> Self {
        Self {
            degree: self.degree,
            algebra: self.algebra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.iter().map(f).collect::<Vec<_>>()))
                .filter(|(_, c)| c.iter().any(|x| !x.is_zero()))
                .collect(),
            rate: match &self.rate {
                Rate::Known(r) => Rate::Known(Box::new(r.map_coeffs(f))),
                other => other.clone(),
            },
        }
    }

    /// Multiply by a constant.
    pub fn scale(&self, k: T) -> Self {
        self.map_coeffs(&|c| k.clone() * c.clone())
    }

    /// Multiply by a function of t given as the jet [k, k', k'', ...].
    /// A one-entry jet leaves the derivative unknown.
    pub fn scale_jet(&self, jet: &[T]) -> Self {
        let k = jet.first().cloned().unwrap_or_else(T::zero);
        let mut out = self.map_coeffs(&|c| k.clone() * c.clone());
        out.rate = if jet.len() < 2 {
            Rate::Missing
        } else {
            let left = self.scale_jet(&jet[1..]);
            match &self.rate {
                Rate::Static => Rate::Known(Box::new(left)),
                Rate::Missing => Rate::Missing,
                Rate::Known(r) => Rate::Known(Box::new(left.add(&r.scale_jet(jet)))),
            }
        };
        out
    }

    /// Tensor a scalar form with a fixed algebra element.
    pub fn otimes(&self, algebra: Algebra, x: &[T]) -> Self {
        assert_eq!(self.algebra, Algebra::Scalar);
        assert_eq!(x.len(), algebra.dim());
        Self {
            degree: self.degree,
            algebra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, x.iter().map(|xi| c[0].clone() * xi.clone()).collect::<Vec<_>>()))
                .filter(|(_, c)| c.iter().any(|v| !v.is_zero()))
                .collect(),
            rate: match &self.rate {
                Rate::Known(r) => Rate::Known(Box::new(r.otimes(algebra, x))),
                other => other.clone(),
            },
        }
    }

    /// Scalar form of the i-th algebra component.
    pub fn component(&self, i: usize) -> Self {
        Self {
            degree: self.degree,
            algebra: Algebra::Scalar,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c[i].is_zero())
                .map(|(m, c)| (*m, vec![c[i].clone()]))
                .collect(),
            rate: match &self.rate {
                Rate::Known(r) => Rate::Known(Box::new(r.component(i))),
                other => other.clone(),
            },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (algebra, degree) = if self.is_zero() && matches!(self.rate, Rate::Static) {
            (other.algebra, other.degree)
        } else {
            (self.algebra, self.degree)
        };
        if !other.is_zero() {
            assert_eq!(algebra, other.algebra, "adding forms over different algebras");
            assert_eq!(degree, other.degree, "adding forms of different degree");
        }
        let mut out = Self { degree, algebra, terms: self.terms.clone(), rate: Rate::Static };
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        out.rate = match (&self.rate, &other.rate) {
            (Rate::Missing, _) | (_, Rate::Missing) => Rate::Missing,
            (Rate::Static, Rate::Static) => Rate::Static,
            (Rate::Known(a), Rate::Static) => Rate::Known(a.clone()),
            (Rate::Static, Rate::Known(b)) => Rate::Known(b.clone()),
            (Rate::Known(a), Rate::Known(b)) => Rate::Known(Box::new(a.add(b))),
        };
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// Terms containing dt, with dt stripped: the α in dt∧α + β.
    pub fn dt_part(&self) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1), self.algebra);
        for (m, c) in &self.terms {
            if m & 1 != 0 {
                out.terms.insert(m & !1, c.clone());
            }
        }
        out
    }

    /// Terms free of dt: the β in dt∧α + β.
    pub fn spatial_part(&self) -> Self {
        let mut out = Self::zero(self.degree, self.algebra);
        for (m, c) in &self.terms {
            if m & 1 == 0 {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Largest absolute coefficient, as f64.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().flatten().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    fn product(&self, other: &Self, kind: Product) -> Result<Self, FormError> {
        let algebra = match kind {
            Product::Scalar => match (self.algebra, other.algebra) {
                (Algebra::Scalar, b) => b,
                (a, Algebra::Scalar) => a,
                _ => return Err(FormError::AmbiguousProduct),
            },
            Product::Bracket | Product::Inner => {
                if self.algebra != other.algebra || self.algebra == Algebra::Scalar {
                    return Err(FormError::AlgebraMismatch);
                }
                if kind == Product::Inner {
                    Algebra::Scalar
                } else {
                    self.algebra
                }
            }
        };
        let mut out = Self::zero(self.degree + other.degree, algebra);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some(sign) = wedge_sign(*ma, *mb) else { continue };
                let c: Vec<T> = match kind {
                    Product::Scalar => {
                        if self.algebra == Algebra::Scalar {
                            cb.iter().map(|x| ca[0].clone() * x.clone()).collect()
                        } else {
                            ca.iter().map(|x| x.clone() * cb[0].clone()).collect()
                        }
                    }
                    Product::Bracket => self.algebra.bracket(ca, cb),
                    Product::Inner => vec![self.algebra.pairing(ca, cb)],
                };
                let c = if sign < 0 { c.into_iter().map(|x| -x).collect() } else { c };
                out.accumulate(ma | mb, c);
            }
        }
        out.rate = leibniz(self, other, |a, b| a.product(b, kind))?;
        Ok(out)
    }

    /// a∧b where at least one side is scalar-valued. Degree overflow gives zero.
    pub fn wedge(&self, other: &Self) -> Self {
        self.product(other, Product::Scalar).expect("wedge needs a scalar-valued factor")
    }

    /// [a∧b] with the Lie bracket on coefficients.
    pub fn bracket(&self, other: &Self) -> Result<Self, FormError> {
        self.product(other, Product::Bracket)
    }

    /// ⟨a∧b⟩ with the algebra pairing on coefficients.
    pub fn inner(&self, other: &Self) -> Result<Self, FormError> {
        self.product(other, Product::Inner)
    }

    pub fn wedge_with(&self, other: &Self, kind: Product) -> Result<Self, FormError> {
        self.product(other, kind)
    }

    /// Structure-constant exterior derivative, ignoring t-dependence.
    pub fn d_spatial(&self, alg: &CoframeAlgebra<T>) -> Self {
        let mut out = Self::zero(self.degree + 1, self.algebra);
        for (mask, c) in &self.terms {
            let mut below: Mask = 0;
            let mut pos = 0;
            for k in 0..alg.slots() {
                let bit: Mask = 1 << k;
                if mask & bit == 0 {
                    continue;
                }
                let above = mask & !(below | bit);
                let sign_pos = if pos % 2 == 0 { 1 } else { -1 };
                for (m2, a) in alg.d_basis(k) {
                    let Some(s1) = wedge_sign(below, *m2) else { continue };
                    let Some(s2) = wedge_sign(below | m2, above) else { continue };
                    let s = T::int((sign_pos * s1 * s2) as i64) * a.clone();
                    out.accumulate(below | m2 | above, c.iter().map(|x| s.clone() * x.clone()).collect());
                }
                below |= bit;
                pos += 1;
            }
        }
        out
    }

    /// Full exterior derivative dt∧(∂ₜβ − d_M α) + d_M β.
    pub fn d(&self, alg: &CoframeAlgebra<T>) -> Result<Self, FormError> {
        let mut out = self.d_spatial(alg);
        match &self.rate {
            Rate::Static => {}
            Rate::Missing => {
                if !self.is_zero() {
                    return Err(FormError::MissingRate);
                }
                out.rate = Rate::Missing;
                return Ok(out);
            }
            Rate::Known(r) => {
                let dt = Self::basis(DT, Algebra::Scalar, vec![T::one()]);
                let moving = Self { rate: Rate::Static, ..(**r).clone() };
                let extra = dt.wedge(&moving);
                for (m, c) in extra.terms {
                    out.accumulate(m, c);
                }
                out.rate = match r.d(alg) {
                    Ok(dr) => Rate::Known(Box::new(dr)),
                    Err(_) => Rate::Missing,
                };
            }
        }
        Ok(out)
    }

    /// F = dA + ½[A∧A] for an algebra-valued 1-form.
    pub fn curvature(&self, alg: &CoframeAlgebra<T>) -> Result<Self, FormError> {
        if self.degree != 1 {
            return Err(FormError::Degree(self.degree));
        }
        let da = self.d(alg)?;
        if self.algebra == Algebra::Scalar || self.algebra == Algebra::U1 {
            return Ok(da);
        }
        let aa = self.bracket(self)?.scale(T::ratio(1, 2));
        Ok(da.add(&aa))
    }

    /// d_A x = dx + [A∧x] for an algebra-valued form x.
    pub fn covariant_d(&self, connection: &Self, alg: &CoframeAlgebra<T>) -> Result<Self, FormError> {
        let dx = self.d(alg)?;
        if !connection.algebra.is_nonabelian() {
            return Ok(dx);
        }
        Ok(dx.add(&connection.bracket(self)?))
    }
}

fn leibniz<T: Scalar>(
    a: &LieValuedForm<T>,
    b: &LieValuedForm<T>,
    op: impl Fn(&LieValuedForm<T>, &LieValuedForm<T>) -> Result<LieValuedForm<T>, FormError>,
) -> Result<Rate<T>, FormError> {
    let static_zero = |f: &LieValuedForm<T>| matches!(f.rate, Rate::Static);
    if static_zero(a) && static_zero(b) {
        return Ok(Rate::Static);
    }
    // Terms where a vanishing factor multiplies an unknown rate drop out.
    let left = match &a.rate {
        Rate::Static => None,
        Rate::Missing if b.is_zero() => None,
        Rate::Missing => return Ok(Rate::Missing),
        Rate::Known(r) => Some(op(r, b)?),
    };
    let right = match &b.rate {
        Rate::Static => None,
        Rate::Missing if a.is_zero() => None,
        Rate::Missing => return Ok(Rate::Missing),
        Rate::Known(r) => Some(op(a, r)?),
    };
    Ok(match (left, right) {
        (None, None) => Rate::Static,
        (Some(l), None) => Rate::Known(Box::new(l)),
        (None, Some(r)) => Rate::Known(Box::new(r)),
        (Some(l), Some(r)) => Rate::Known(Box::new(l.add(&r))),
    })
}
