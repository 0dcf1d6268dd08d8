//! Bracketed 1-D root finding and golden-section optimization.

use crate::error::{Error, Result};

/// Root of a sign-changing function on `[lo, hi]`.
///
/// Bisection with a secant step when it stays inside the bracket. Stops when
/// `|f| <= 1e-12 * scale` (scale from the initial bracket values) or the
/// interval shrinks below `1e-14 * max(1, |lo|, |hi|)`.
pub fn find_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Bracket { lo, hi });
    }
    let scale = fa.abs().max(fb.abs());
    let width_tol = 1e-14 * lo.abs().max(hi.abs()).max(1.0);
    for _ in 0..200 {
        // Secant candidate, clamped to the interior; fall back to midpoint.
        let mut x = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        if !x.is_finite() || x <= a.min(b) || x >= a.max(b) {
            x = mid;
        }
        // Alternate with bisection so the bracket provably shrinks.
        if (x - mid).abs() > 0.4 * (b - a).abs() {
            x = mid;
        }
        let fx = f(x);
        if fx.abs() <= 1e-12 * scale || (b - a).abs() <= width_tol {
            return Ok(x);
        }
        if fa * fx <= 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    Ok(0.5 * (a + b))
}

/// Maximize a unimodal function on `[lo, hi]` by golden-section search.
/// Returns `(argmax, max)`.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Minimize a unimodal function on `[lo, hi]`. Returns `(argmin, min)`.
pub fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, fx) = golden_max(|t| -f(t), lo, hi, tol);
    (x, -fx)
}
