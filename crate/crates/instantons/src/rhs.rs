//! Instanton ODEs, written once over any ring-like type so the same code drives
//! the integrator (plain floats) and the singular-orbit expansion (power series).

use std::ops::{Add, Div, Mul, Neg, Sub};

use g2_geometries::{Real, SU3StructureState};
use g2_numerics::{lit, Series};

use crate::InstantonError;

pub trait Arith:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn halve(self) -> Self;

    fn double(self) -> Self {
        self.clone() + self
    }

    fn sq(self) -> Self {
        self.clone() * self
    }
}

/// Plain number wrapper, so floats and series can share the generic field code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Val<T>(pub T);

macro_rules! val_op {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<T: Real> $tr for Val<T> {
            type Output = Val<T>;
            fn $method(self, o: Val<T>) -> Val<T> {
                Val(self.0 $op o.0)
            }
        }
    };
}

val_op!(Add, add, +);
val_op!(Sub, sub, -);
val_op!(Mul, mul, *);
val_op!(Div, div, /);

impl<T: Real> Neg for Val<T> {
    type Output = Val<T>;
    fn neg(self) -> Val<T> {
        Val(-self.0)
    }
}

impl<T: Real> Arith for Val<T> {
    fn halve(self) -> Self {
        Val(self.0 * lit(0.5))
    }
}

impl<T: Real> Arith for Series<T> {
    fn halve(self) -> Self {
        self.scale(lit(0.5))
    }
}

/// ẋ = (Ȧ₁/A₁)x + y² − x², ẏ = ((2Ȧ₁ − 3)/A₁)y + 2xy.
pub fn clarke_field<V: Arith>(x: V, y: V, a1: V, a1dot: V, three: V) -> [V; 2] {
    let dx = a1dot.clone() / a1.clone() * x.clone() + y.clone().sq() - x.clone().sq();
    let dy = (a1dot.double() - three) / a1 * y.clone() + (x * y).double();
    [dx, dy]
}

/// The four U(1)-reduced equations for (f⁺, g⁺, f⁻, g⁻).
pub fn bggg_field<V: Arith>([fp, gp, fm, gm]: [V; 4], [a1, a2, b1, b2]: [V; 4]) -> [V; 4] {
    let p = (a2.clone().sq() + b1.clone().sq() + b2.clone().sq()) / (a2.clone() * b1.clone() * b2.clone());
    let k_fp = (a1.clone() / b2.clone().sq() - a1.clone() / a2.clone().sq()).halve();
    let k_gp = (p.clone() - (a1.clone().sq() + a2.clone().sq().double()) / (a1.clone() * a2.clone().sq())).halve();
    let k_gm = (p.clone() + (a1.clone().sq() + b2.clone().sq().double()) / (a1 * b2.sq())).halve();
    [
        -(k_fp * fp.clone()) + gm.clone().sq() - gp.clone().sq(),
        -(k_gp * gp.clone()) + fm.clone() * gm.clone() - fp.clone() * gp.clone(),
        -(p * fm.clone()) + (gm.clone() * gp.clone()).double(),
        -(k_gm * gm.clone()) + gm * fp + gp * fm,
    ]
}

pub fn clarke_rhs<T: Real>(
    x: T,
    y: T,
    state: &SU3StructureState<T>,
    rate: &SU3StructureState<T>,
) -> Result<(T, T), InstantonError> {
    if state.a[0] == T::zero() || state.b[0] == T::zero() {
        return Err(InstantonError::Singular(0.0));
    }
    let [dx, dy] = clarke_field(Val(x), Val(y), Val(state.a[0]), Val(rate.a[0]), Val(lit(3.0)));
    Ok((dx.0, dy.0))
}

pub fn bggg_rhs<T: Real>(u: [T; 4], state: &SU3StructureState<T>) -> Result<[T; 4], InstantonError> {
    let m = [state.a[0], state.a[1], state.b[0], state.b[1]];
    if m.iter().any(|v| *v == T::zero()) {
        return Err(InstantonError::Singular(0.0));
    }
    Ok(bggg_field(u.map(Val), m.map(Val)).map(|v| v.0))
}
