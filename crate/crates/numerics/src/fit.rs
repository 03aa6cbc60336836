use crate::{lit, Num};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit<F> {
    pub slope: F,
    pub intercept: F,
    /// Root-mean-square residual.
    pub rms: F,
}

/// Ordinary least squares y ≈ slope·x + intercept.
pub fn linear_fit<F: Num>(xs: &[F], ys: &[F]) -> Option<LineFit<F>> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf: F = lit(n as f64);
    let mx = xs.iter().fold(F::zero(), |a, &x| a + x) / nf;
    let my = ys.iter().fold(F::zero(), |a, &y| a + y) / nf;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    if sxx <= F::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = xs
        .iter()
        .zip(ys)
        .fold(F::zero(), |a, (&x, &y)| a + (y - slope * x - intercept).powi(2));
    Some(LineFit { slope, intercept, rms: (ss / nf).sqrt() })
}

/// Bisection for a sign change of `f` on [a, b].
pub fn bisect<F: Num>(mut f: impl FnMut(F) -> F, mut a: F, mut b: F, tol: F, max_iter: usize) -> Option<F> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == F::zero() {
        return Some(a);
    }
    if fb == F::zero() {
        return Some(b);
    }
    if (fa > F::zero()) == (fb > F::zero()) {
        return None;
    }
    let half: F = lit(0.5);
    for _ in 0..max_iter {
        let m = (a + b) * half;
        let fm = f(m);
        if fm == F::zero() || (b - a).abs() < tol {
            return Some(m);
        }
        if (fm > F::zero()) == (fa > F::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some((a + b) * half)
}
