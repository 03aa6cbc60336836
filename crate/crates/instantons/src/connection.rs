//! Diagonal SU(2)²×U(1)-invariant connections on S³×S³ and their curvature norm.

use g2_geometries::{Real, SU3StructureState};
use g2_liealg::{t_basis, Algebra, CoframeAlgebra, LieValuedForm};
use g2_numerics::lit;

use crate::closed::Jet;

/// A = Σᵢ cᵢ⁺Tᵢηᵢ⁺ + cᵢ⁻Tᵢηᵢ⁻, each coefficient with its t-derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantConnection<T> {
    pub plus: [Jet<T>; 3],
    pub minus: [Jet<T>; 3],
}

impl<T: Real> InvariantConnection<T> {
    /// Clarke's ansatz A₁x ΣTᵢηᵢ⁺ + B₁y ΣTᵢηᵢ⁻, from (x, y), (ẋ, ẏ) and the metric.
    pub fn clarke(u: [T; 2], du: [T; 2], state: &SU3StructureState<T>, rate: &SU3StructureState<T>) -> Self {
        let p = Jet { value: state.a[0] * u[0], rate: rate.a[0] * u[0] + state.a[0] * du[0] };
        let m = Jet { value: state.b[0] * u[1], rate: rate.b[0] * u[1] + state.b[0] * du[1] };
        Self { plus: [p; 3], minus: [m; 3] }
    }

    /// The U(1)-reduced ansatz with (f⁺, g⁺, f⁻, g⁻) on A₁, A₂, B₁, B₂.
    pub fn bggg(u: [T; 4], du: [T; 4], state: &SU3StructureState<T>, rate: &SU3StructureState<T>) -> Self {
        let j = |m: T, dm: T, k: usize| Jet { value: m * u[k], rate: dm * u[k] + m * du[k] };
        let (a1, a2) = (j(state.a[0], rate.a[0], 0), j(state.a[1], rate.a[1], 1));
        let (b1, b2) = (j(state.b[0], rate.b[0], 2), j(state.b[1], rate.b[1], 3));
        Self { plus: [a1, a2, a2], minus: [b1, b2, b2] }
    }

    /// t-independent connection with the same coefficient on every ηᵢ⁺.
    pub fn constant_plus(c: T) -> Self {
        let z = Jet { value: T::zero(), rate: T::zero() };
        Self { plus: [Jet { value: c, rate: T::zero() }; 3], minus: [z; 3] }
    }

    pub fn form(&self) -> LieValuedForm<T> {
        let mut a = LieValuedForm::zero(1, Algebra::Su2);
        for i in 0..3 {
            for (slot, c) in [(1 + i, self.plus[i]), (4 + i, self.minus[i])] {
                a = a.add(&LieValuedForm::basis(slot, Algebra::Su2, t_basis(i)).scale_jet(&[c.value, c.rate]));
            }
        }
        a
    }

    fn vectors(&self) -> ([[T; 3]; 7], [[T; 3]; 7]) {
        let mut c = [[T::zero(); 3]; 7];
        let mut dc = [[T::zero(); 3]; 7];
        for i in 0..3 {
            c[1 + i][i] = self.plus[i].value;
            dc[1 + i][i] = self.plus[i].rate;
            c[4 + i][i] = self.minus[i].value;
            dc[4 + i][i] = self.minus[i].rate;
        }
        (c, dc)
    }
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// |F_A|² for the metric dt² + Σ(2Aᵢηᵢ⁺)² + Σ(2Bᵢηᵢ⁻)², computed componentwise without
/// building forms. F₀ₖ = ċₖ and F_ij = −Σₖ cₖ C[k][i][j] + 2 cᵢ×cⱼ.
pub fn curvature_norm_sq<T: Real>(
    a: &InvariantConnection<T>,
    state: &SU3StructureState<T>,
    alg: &CoframeAlgebra<T>,
) -> T {
    let (c, dc) = a.vectors();
    let s = state.scales();
    let two: T = lit(2.0);
    let mut total = T::zero();
    for k in 1..7 {
        let s2 = s[k - 1] * s[k - 1];
        total = total + dc[k].iter().fold(T::zero(), |acc, v| acc + *v * *v) / s2;
    }
    for i in 1..7 {
        for j in (i + 1)..7 {
            let x = cross(c[i], c[j]);
            let mut f = [two * x[0], two * x[1], two * x[2]];
            for (k, ck) in c.iter().enumerate().skip(1) {
                let sc = *alg.structure(k, i, j);
                if sc != T::zero() {
                    for al in 0..3 {
                        f[al] = f[al] - ck[al] * sc;
                    }
                }
            }
            let w = s[i - 1] * s[i - 1] * s[j - 1] * s[j - 1];
            total = total + f.iter().fold(T::zero(), |acc, v| acc + *v * *v) / w;
        }
    }
    two * total
}
