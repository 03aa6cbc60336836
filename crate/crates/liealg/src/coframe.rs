use crate::scalar::Scalar;
use crate::FormError;

/// Bitmask over coframe slots. Bit 0 is the dt slot.
pub type Mask = u16;

pub const DT: usize = 0;
pub const MAX_SLOTS: usize = 16;

/// Sign of e^a ∧ e^b relative to the sorted monomial, or None if they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Sorts slot indices into a mask, returning the permutation sign.
pub fn mask_of(slots: &[usize]) -> Option<(Mask, i32)> {
    let mut mask: Mask = 0;
    let mut sign = 1;
    for &s in slots {
        let bit: Mask = 1 << s;
        sign *= wedge_sign(mask, bit)?;
        mask |= bit;
    }
    Some((mask, sign))
}

pub fn slots_of(mask: Mask) -> Vec<usize> {
    (0..MAX_SLOTS).filter(|i| mask & (1 << i) != 0).collect()
}

/// Structure constants of an invariant coframe, extended by a dt slot at index 0.
///
/// Convention: d e^k = -Σ_{i<j} c[k][i][j] e^i ∧ e^j.
#[derive(Clone, Debug, PartialEq)]
pub struct CoframeAlgebra<T> {
    labels: Vec<String>,
    structure: Vec<Vec<Vec<T>>>,
    d_basis: Vec<Vec<(Mask, T)>>,
}

impl<T: Scalar> CoframeAlgebra<T> {
    /// `labels` are the spatial directions; `rules` list (k, i, j, a) meaning a term
    /// a·e^i∧e^j in d e^k, with 1-based spatial indices.
    pub fn from_differentials(labels: &[&str], rules: &[(usize, usize, usize, T)]) -> Result<Self, FormError> {
        let n = labels.len() + 1;
        if n > MAX_SLOTS {
            return Err(FormError::TooManySlots(n));
        }
        let mut structure = vec![vec![vec![T::zero(); n]; n]; n];
        for (k, i, j, a) in rules.iter().cloned() {
            if k == 0 || i == 0 || j == 0 || k >= n || i >= n || j >= n || i == j {
                return Err(FormError::BadIndex);
            }
            structure[k][i][j] = structure[k][i][j].clone() - a.clone();
            structure[k][j][i] = structure[k][j][i].clone() + a;
        }
        let mut all = vec!["dt".to_string()];
        all.extend(labels.iter().map(|s| s.to_string()));
        Self::from_structure(all, structure)
    }

    pub fn from_structure(labels: Vec<String>, structure: Vec<Vec<Vec<T>>>) -> Result<Self, FormError> {
        let n = labels.len();
        if n > MAX_SLOTS {
            return Err(FormError::TooManySlots(n));
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if structure[k][i][j] != -structure[k][j][i].clone() {
                        return Err(FormError::NotAntisymmetric(k, i, j));
                    }
                    if (k == DT || i == DT || j == DT) && !structure[k][i][j].is_zero() {
                        return Err(FormError::BadIndex);
                    }
                }
            }
        }
        let d_basis = (0..n)
            .map(|k| {
                let mut out = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let c = &structure[k][i][j];
                        if !c.is_zero() {
                            out.push(((1 << i) | (1 << j), -c.clone()));
                        }
                    }
                }
                out
            })
            .collect();
        Ok(Self { labels, structure, d_basis })
    }

    /// Number of slots including dt.
    pub fn slots(&self) -> usize {
        self.labels.len()
    }

    /// Number of spatial directions.
    pub fn dim(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn structure(&self, k: usize, i: usize, j: usize) -> &T {
        &self.structure[k][i][j]
    }

    /// d e^k as a list of sorted 2-form monomials.
    pub fn d_basis(&self, k: usize) -> &[(Mask, T)] {
        &self.d_basis[k]
    }

    /// Largest |coefficient| of d(d e^k) over all k. Zero means Jacobi holds.
    pub fn jacobi_defect(&self) -> T
    where
        T: PartialOrd,
    {
        let mut worst = T::zero();
        for k in 0..self.slots() {
            let f = crate::LieValuedForm::basis(k, crate::Algebra::Scalar, vec![T::one()]);
            let dd = f.d(self).and_then(|g| g.d(self)).expect("static forms");
            for c in dd.terms().values().flatten() {
                let a = if *c < T::zero() { -c.clone() } else { c.clone() };
                if a > worst {
                    worst = a;
                }
            }
        }
        worst
    }

    /// S³×S³ = SU(2)² with slots dt, η₁⁺, η₂⁺, η₃⁺, η₁⁻, η₂⁻, η₃⁻.
    pub fn s3xs3() -> Self {
        let mut rules = Vec::new();
        let two = T::int(2);
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let (pj, pk, mj, mk) = (j, k, 3 + j, 3 + k);
            // dη_i⁺ = -2(η_j⁺η_k⁺ + η_j⁻η_k⁻)
            rules.push((i, pj, pk, -two.clone()));
            rules.push((i, mj, mk, -two.clone()));
            // dη_i⁻ = -2(η_j⁺η_k⁻ - η_k⁺η_j⁻)
            rules.push((3 + i, pj, mk, -two.clone()));
            rules.push((3 + i, pk, mj, two.clone()));
        }
        let rules: Vec<_> = rules.into_iter().map(|(k, i, j, a)| normalize(k, i, j, a)).collect();
        Self::from_differentials(&["eta1+", "eta2+", "eta3+", "eta1-", "eta2-", "eta3-"], &rules)
            .expect("valid constants")
    }

    /// Sp(2) over S⁴: slots dt, e¹..e⁴, η₁..η₃ (Sp(1)₊), ω₁..ω₃ (Sp(1)₋).
    pub fn sp2() -> Self {
        let (e1, e2, e3, e4, n1, n2, n3, w1, w2, w3) = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10);
        let one = || T::one();
        let m1 = || -T::one();
        let h = || T::ratio(1, 2);
        let mh = || T::ratio(-1, 2);
        let two = || T::int(2);
        let m2 = || T::int(-2);
        let rules = vec![
            (e1, e2, n1, m1()), (e1, e2, w1, one()), (e1, e3, n2, m1()), (e1, e3, w2, one()), (e1, e4, n3, m1()), (e1, e4, w3, one()),
            (e2, e1, n1, one()), (e2, e1, w1, m1()), (e2, e3, n3, m1()), (e2, e3, w3, m1()), (e2, e4, n2, one()), (e2, e4, w2, one()),
            (e3, e1, n2, one()), (e3, e1, w2, m1()), (e3, e2, n3, one()), (e3, e2, w3, one()), (e3, e4, n1, m1()), (e3, e4, w1, m1()),
            (e4, e1, n3, one()), (e4, e1, w3, m1()), (e4, e2, n2, m1()), (e4, e2, w2, m1()), (e4, e3, n1, one()), (e4, e3, w1, one()),
            (n1, e1, e2, mh()), (n1, e3, e4, mh()), (n1, n2, n3, m2()),
            (n2, e1, e3, mh()), (n2, e2, e4, h()), (n2, n1, n3, two()),
            (n3, e1, e4, mh()), (n3, e2, e3, mh()), (n3, n1, n2, m2()),
            (w1, e1, e2, h()), (w1, e3, e4, mh()), (w1, w2, w3, m2()),
            (w2, e1, e3, h()), (w2, e2, e4, h()), (w2, w1, w3, two()),
            (w3, e1, e4, h()), (w3, e2, e3, mh()), (w3, w1, w2, m2()),
        ];
        Self::from_differentials(
            &["e1", "e2", "e3", "e4", "eta1", "eta2", "eta3", "omega1", "omega2", "omega3"],
            &rules,
        )
        .expect("valid constants")
    }

    /// SU(3) over CP²: slots dt, e¹..e⁴, κ, s₁, s₂, s₃ (s₁ = α, s₂ = ν₁, s₃ = ν₂).
    pub fn su3() -> Self {
        let (e1, e2, e3, e4, ka, s1, s2, s3) = (1, 2, 3, 4, 5, 6, 7, 8);
        let one = || T::one();
        let m1 = || -T::one();
        let three = || T::int(3);
        let m3 = || T::int(-3);
        let h = || T::ratio(1, 2);
        let mh = || T::ratio(-1, 2);
        let two = || T::int(2);
        let m2 = || T::int(-2);
        let rules = vec![
            (e1, e2, s1, one()), (e1, e3, s2, one()), (e1, e4, ka, m3()), (e1, e4, s3, one()),
            (e2, e1, s1, m1()), (e2, e3, ka, m3()), (e2, e3, s3, m1()), (e2, e4, s2, one()),
            (e3, e1, s2, m1()), (e3, e2, ka, three()), (e3, e2, s3, one()), (e3, e4, s1, m1()),
            (e4, e1, ka, three()), (e4, e1, s3, m1()), (e4, e2, s2, m1()), (e4, e3, s1, one()),
            (ka, e1, e4, mh()), (ka, e2, e3, mh()),
            (s1, e1, e2, h()), (s1, e3, e4, mh()), (s1, s2, s3, m2()),
            (s2, e1, e3, h()), (s2, e2, e4, h()), (s2, s1, s3, two()),
            (s3, e1, e4, h()), (s3, e2, e3, mh()), (s3, s1, s2, m2()),
        ];
        Self::from_differentials(&["e1", "e2", "e3", "e4", "kappa", "s1", "s2", "s3"], &rules)
            .expect("valid constants")
    }
}

fn normalize<T: Scalar>(k: usize, i: usize, j: usize, a: T) -> (usize, usize, usize, T) {
    if i < j {
        (k, i, j, a)
    } else {
        (k, j, i, -a)
    }
}
