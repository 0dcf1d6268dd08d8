//! Adaptive Simpson quadrature and fixed-grid helpers.

/// Adaptive Simpson integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: impl Fn(f64) -> f64 + Copy,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Simpson rule over a uniform grid (odd point count preferred); the last
/// interval falls back to trapezoid when the count is even.
pub fn simpson_uniform(ys: &[f64], dx: f64) -> f64 {
    let n = ys.len();
    if n < 3 {
        return trapz_uniform(ys, dx);
    }
    let odd_len = if n % 2 == 1 { n } else { n - 1 };
    let mut acc = ys[0] + ys[odd_len - 1];
    for (i, y) in ys[1..odd_len - 1].iter().enumerate() {
        acc += if i % 2 == 0 { 4.0 * y } else { 2.0 * y };
    }
    let mut out = acc * dx / 3.0;
    if n.is_multiple_of(2) {
        out += 0.5 * dx * (ys[n - 2] + ys[n - 1]);
    }
    out
}

/// Trapezoid rule over a uniform grid of `ys` with spacing `dx`.
pub fn trapz_uniform(ys: &[f64], dx: f64) -> f64 {
    if ys.len() < 2 {
        return 0.0;
    }
    let inner: f64 = ys[1..ys.len() - 1].iter().sum();
    dx * (0.5 * (ys[0] + ys[ys.len() - 1]) + inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x, 0.0, 1.0, 1e-12);
        assert!((v - 0.25).abs() < 1e-12);
    }

    #[test]
    fn oscillatory() {
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn trapz_linear() {
        let ys: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        assert!((trapz_uniform(&ys, 0.01) - 0.5).abs() < 1e-12);
    }
}
