use serde::Serialize;

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
/// Relative bracket width at which the search stops regardless of `|f|`.
const X_REL_TOL: f64 = 1e-14;

/// A search interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket.
///
/// Stops when `|f(x)| <= tol` or the bracket has shrunk to
/// `1e-14 * max(1, |x|)`. Inverse quadratic and secant steps are only taken
/// when they stay inside the bracket and shrink it fast enough; otherwise the
/// step is a bisection, so convergence is guaranteed. Infinite function
/// values are accepted as signs and force bisection.
pub fn find_root<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("root tolerance must be positive, got {tol}")));
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Domain("function is NaN at a bracket end".into()));
    }
    if fa.abs() <= tol {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb.abs() <= tol {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iteration in 1..=MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let half_tol = 0.5 * X_REL_TOL * b.abs().max(1.0);
        let mid = 0.5 * (c - b);
        if fb.abs() <= tol || mid.abs() <= half_tol {
            return Ok(Root { x: b, fx: fb, iterations: iteration });
        }

        let interpolate = e.abs() >= half_tol
            && fa.abs() > fb.abs()
            && fa.is_finite()
            && fb.is_finite()
            && fc.is_finite();
        if interpolate {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * mid * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * mid * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * mid * q - (half_tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = mid;
                e = d;
            }
        } else {
            d = mid;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > half_tol { d } else { half_tol.copysign(mid) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Domain(format!("function is NaN at x = {b}")));
        }
    }
    Err(Error::Convergence(MAX_ITER))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let r = find_root(|x| x - 2.0, Bracket::new(0.0, 5.0).unwrap(), 1e-14).unwrap();
        assert!((r.x - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| x * x - 2.0, Bracket::new(1.0, 2.0).unwrap(), 1e-15).unwrap();
        assert!((r.x - std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn decreasing_function() {
        let r = find_root(|x| (-x).exp() - 0.5, Bracket::new(0.0, 10.0).unwrap(), 1e-15).unwrap();
        assert!((r.x - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn infinite_end_forces_bisection() {
        let f = |x: f64| if x > 3.0 { f64::INFINITY } else { x - 1.0 };
        let r = find_root(f, Bracket::new(0.0, 10.0).unwrap(), 1e-14).unwrap();
        assert!((r.x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn width_termination_on_step_function() {
        // never reaches |f| <= tol; must stop on bracket width
        let f = |x: f64| if x < 0.3 { -1.0 } else { 1.0 };
        let r = find_root(f, Bracket::new(0.0, 1.0).unwrap(), 1e-6).unwrap();
        assert!((r.x - 0.3).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), 1e-12).unwrap_err();
        assert!(matches!(err, Error::Bracketing { .. }));
    }

    #[test]
    fn invalid_inputs() {
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Bracket::new(2.0, 1.0).is_err());
        assert!(Bracket::new(0.0, f64::NAN).is_err());
        assert!(find_root(|x| x, Bracket::new(-1.0, 1.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| x.powi(3) - x - 1.0;
        let b = Bracket::new(1.0, 2.0).unwrap();
        let r1 = find_root(f, b, 1e-13).unwrap();
        let r2 = find_root(f, b, 1e-13).unwrap();
        assert_eq!(r1.x.to_bits(), r2.x.to_bits());
        assert_eq!(r1.iterations, r2.iterations);
    }
}
