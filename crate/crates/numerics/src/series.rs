//! Truncated Laurent series Σ_{k=lo}^{prec-1} c_k t^k.

use crate::{lit, Num};

#[derive(Clone, Debug, PartialEq)]
pub struct Series<F> {
    lo: i32,
    coeffs: Vec<F>,
}

impl<F: Num> Series<F> {
    /// Coefficients starting at power `lo`, known up to power lo + len - 1.
    pub fn new(lo: i32, coeffs: Vec<F>) -> Self {
        Self { lo, coeffs }
    }

    pub fn constant(c: F, prec: i32) -> Self {
        let mut v = vec![F::zero(); prec.max(1) as usize];
        v[0] = c;
        Self { lo: 0, coeffs: v }
    }

    /// The variable t itself.
    pub fn var(prec: i32) -> Self {
        let mut v = vec![F::zero(); prec.max(0) as usize];
        if prec > 1 {
            v[1] = F::one();
        }
        Self { lo: 0, coeffs: v }
    }

    pub fn zero(prec: i32) -> Self {
        Self { lo: 0, coeffs: vec![F::zero(); prec.max(0) as usize] }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// First power not determined.
    pub fn prec(&self) -> i32 {
        self.lo + self.coeffs.len() as i32
    }

    pub fn coeff(&self, k: i32) -> F {
        if k < self.lo || k >= self.prec() {
            F::zero()
        } else {
            self.coeffs[(k - self.lo) as usize]
        }
    }

    pub fn set(&mut self, k: i32, c: F) {
        assert!(k >= self.lo && k < self.prec(), "power {k} outside series window");
        self.coeffs[(k - self.lo) as usize] = c;
    }

    fn with_window(&self, lo: i32, prec: i32) -> Self {
        let n = (prec - lo).max(0) as usize;
        Self { lo, coeffs: (0..n).map(|i| self.coeff(lo + i as i32)).collect() }
    }

    pub fn truncate(&self, prec: i32) -> Self {
        self.with_window(self.lo, prec.min(self.prec()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let lo = self.lo.min(o.lo);
        let prec = self.prec().min(o.prec());
        let n = (prec - lo).max(0) as usize;
        Self { lo, coeffs: (0..n).map(|i| self.coeff(lo + i as i32) + o.coeff(lo + i as i32)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-F::one()))
    }

    pub fn scale(&self, k: F) -> Self {
        Self { lo: self.lo, coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    pub fn add_const(&self, k: F) -> Self {
        self.add(&Self::constant(k, self.prec().max(1)))
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i32) -> Self {
        Self { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    /// Product; known leading zeros are stripped first so they cost no precision.
    pub fn mul(&self, o: &Self) -> Self {
        let (a, o) = (self.normalize(), o.normalize());
        let lo = a.lo + o.lo;
        let prec = (a.prec() + o.lo).min(o.prec() + a.lo);
        let n = (prec - lo).max(0) as usize;
        let mut out = vec![F::zero(); n];
        for (i, &a) in a.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                if i + j < n {
                    out[i + j] = out[i + j] + a * b;
                }
            }
        }
        Self { lo, coeffs: out }
    }

    /// Strip leading zero coefficients so that `lo` is the true valuation.
    pub fn normalize(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| **c == F::zero()).count();
        Self { lo: self.lo + skip as i32, coeffs: self.coeffs[skip..].to_vec() }
    }

    pub fn recip(&self) -> Self {
        let s = self.normalize();
        let n = s.coeffs.len();
        assert!(n > 0, "reciprocal of an unresolved series");
        let a0 = s.coeffs[0];
        let mut b = vec![F::zero(); n];
        b[0] = F::one() / a0;
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                acc = acc + s.coeffs[j] * b[k - j];
            }
            b[k] = -acc / a0;
        }
        Self { lo: -s.lo, coeffs: b }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Power with real exponent for a series with positive constant term.
    pub fn powf(&self, alpha: F) -> Self {
        let s = self.normalize();
        assert_eq!(s.lo, 0, "powf needs a nonzero constant term");
        let n = s.coeffs.len();
        let a0 = s.coeffs[0];
        let mut b = vec![F::zero(); n];
        b[0] = a0.powf(alpha);
        // J. C. P. Miller recurrence
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                let jf: F = lit(j as f64);
                let kf: F = lit(k as f64);
                acc = acc + (alpha * jf - (kf - jf)) * s.coeffs[j] * b[k - j];
            }
            b[k] = acc / (lit::<F>(k as f64) * a0);
        }
        Self { lo: 0, coeffs: b }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(lit(0.5))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * lit((self.lo + i as i32) as f64))
            .collect();
        Self { lo: self.lo - 1, coeffs }
    }

    /// Antiderivative with zero constant; needs no t^-1 term.
    pub fn integral(&self) -> Self {
        assert!(self.lo >= 0, "integral of a Laurent series with poles");
        let mut coeffs = vec![F::zero(); self.coeffs.len() + 1 + self.lo as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let p = self.lo as usize + i;
            coeffs[p + 1] = c / lit((p + 1) as f64);
        }
        Self { lo: 0, coeffs }
    }

    /// self(g) for g with zero constant term (g.lo ≥ 1 after normalizing).
    pub fn compose(&self, g: &Self) -> Self {
        assert!(self.lo >= 0, "compose needs a Taylor series outside");
        let gn = g.normalize();
        assert!(gn.lo >= 1, "inner series must vanish at 0");
        let prec = self.prec() + gn.lo - 1;
        let prec = prec.min(g.prec());
        let mut out = Self::zero(prec);
        let mut pow = Self::constant(F::one(), prec);
        for k in 0..self.prec() {
            if k >= self.lo {
                out = out.add(&pow.scale(self.coeff(k)));
            }
            pow = pow.mul(&gn).with_window(0, prec);
        }
        out.with_window(0, prec)
    }

    /// Compositional inverse of g = a₁t + a₂t² + … with a₁ ≠ 0.
    pub fn revert(&self) -> Self {
        let g = self.with_window(0, self.prec());
        let a1 = g.coeff(1);
        assert!(a1 != F::zero() && g.coeff(0) == F::zero(), "revert needs g(0)=0, g'(0)≠0");
        let prec = g.prec();
        // Newton-free iteration: h ← (t − (g(h) − a₁h)) / a₁
        let t = Self::var(prec);
        let mut h = t.scale(F::one() / a1);
        for _ in 0..prec {
            let nonlinear = g.compose(&h).sub(&h.scale(a1));
            h = t.sub(&nonlinear).scale(F::one() / a1).with_window(0, prec);
        }
        h
    }

    pub fn eval(&self, t: F) -> F {
        let mut acc = F::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc * t.powi(self.lo)
    }

    /// Only odd (or only even) powers present, to `tol`.
    pub fn has_parity(&self, odd: bool, tol: F) -> bool {
        (self.lo..self.prec()).all(|k| (k.rem_euclid(2) == 1) == odd || self.coeff(k).abs() <= tol)
    }
}

macro_rules! series_op {
    ($tr:ident, $method:ident, $call:ident) => {
        impl<F: Num> std::ops::$tr for Series<F> {
            type Output = Series<F>;
            fn $method(self, o: Series<F>) -> Series<F> {
                Series::$call(&self, &o)
            }
        }
    };
}

series_op!(Add, add, add);
series_op!(Sub, sub, sub);
series_op!(Mul, mul, mul);
series_op!(Div, div, div);

impl<F: Num> std::ops::Neg for Series<F> {
    type Output = Series<F>;
    fn neg(self) -> Series<F> {
        self.scale(-F::one())
    }
}
