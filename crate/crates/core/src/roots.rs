//! Bracketing root refinement and a golden-section minimizer.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Bisection steps before the secant polish starts (upper bound).
    pub max_bisections: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub switch_width: f64,
    /// Bracket width at which the solve is considered converged.
    pub x_tol: f64,
    /// Residual at which the solve is considered converged.
    pub f_tol: f64,
    pub max_polish: usize,
}

impl RootOptions {
    /// Turning-point refinement: plain bisection down to `x_tol`, then a few
    /// secant steps.
    pub fn turning_point(x_tol: f64) -> Self {
        RootOptions { max_bisections: 60, switch_width: x_tol, x_tol, f_tol: 0.0, max_polish: 4 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Final bracket.
    pub lo: f64,
    pub hi: f64,
}

/// Refines a root of `f` inside `[a, b]` where `fa` and `fb` have opposite
/// signs (or one of them is exactly zero).
///
/// Bisection runs until the bracket is narrower than `switch_width`; after
/// that Illinois-modified secant steps are taken, always inside the bracket.
pub fn bisect_secant<F>(mut f: F, a: f64, fa: f64, b: f64, fb: f64, opts: &RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0, lo: a, hi: a });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0, lo: b, hi: b });
    }
    let straddles = fa * fb < 0.0;
    if !straddles {
        return Err(Error::Logic(format!("no sign change in bracket [{a}, {b}] (f = {fa}, {fb})")));
    }
    let (mut lo, mut flo, mut hi, mut fhi) = if a < b { (a, fa, b, fb) } else { (b, fb, a, fa) };
    let mut best = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };
    let mut iterations = 0;

    let mut bisections = 0;
    while bisections < opts.max_bisections && (hi - lo) > opts.switch_width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        bisections += 1;
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm == 0.0 || fm.abs() <= opts.f_tol {
            return Ok(Root { x: mid, fx: fm, iterations, lo, hi });
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    // Illinois: halve the retained endpoint value when the same side is kept
    // twice, which avoids the one-sided stagnation of regula falsi.
    let mut last_side = 0i8;
    for _ in 0..opts.max_polish {
        if best.1.abs() <= opts.f_tol || (hi - lo) <= opts.x_tol {
            break;
        }
        let mut x = hi - fhi * (hi - lo) / (fhi - flo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        if x <= lo || x >= hi {
            break;
        }
        let fx = f(x)?;
        iterations += 1;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(Root { x, fx, iterations, lo: x, hi: x });
        }
        if (fx < 0.0) == (flo < 0.0) {
            lo = x;
            flo = fx;
            if last_side == -1 {
                fhi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            fhi = fx;
            if last_side == 1 {
                flo *= 0.5;
            }
            last_side = 1;
        }
    }

    Ok(Root { x: best.0, fx: best.1, iterations, lo, hi })
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refines_simple_root() {
        let f = |x: f64| Ok(x * x - 2.0);
        let r = bisect_secant(f, 0.0, -2.0, 2.0, 2.0, &RootOptions::turning_point(1e-15)).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let f = |x: f64| Ok(x * x + 1.0);
        let r = bisect_secant(f, 0.0, 1.0, 2.0, 5.0, &RootOptions::turning_point(1e-12));
        assert!(matches!(r, Err(Error::Logic(_))));
    }

    #[test]
    fn zero_endpoint_is_the_root() {
        let f = |_x: f64| Ok(1.0);
        let r = bisect_secant(f, 1.0, 0.0, 2.0, 1.0, &RootOptions::turning_point(1e-12)).unwrap();
        assert_eq!(r.x, 1.0);
    }

    #[test]
    fn illinois_polish_converges_fast() {
        let mut calls = 0;
        let f = |x: f64| {
            calls += 1;
            Ok(x.exp() - 3.0)
        };
        let opts = RootOptions { max_bisections: 5, switch_width: 1e-2, x_tol: 1e-15, f_tol: 1e-15, max_polish: 60 };
        let r = bisect_secant(f, 0.0, -2.0, 3.0, 3f64.exp() - 3.0, &opts).unwrap();
        assert!((r.x - 3f64.ln()).abs() < 1e-14);
        assert!(calls < 30);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }
}
