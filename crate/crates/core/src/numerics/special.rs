//! Lambert W, modified/ordinary Bessel functions of order zero, the imaginary
//! error function, and the Dawson integral. Series plus asymptotic switchover;
//! switch points sit where both expansions agree to better than 1e-10.

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / std::f64::consts::E;
/// Largest x for which I0(x) is representable in f64.
const I0_OVERFLOW: f64 = 713.0;

/// Principal branch of the Lambert W function, the inverse of `w * exp(w)`.
///
/// Valid for `x >= -1/e`; the returned `w` satisfies `w * exp(w) = x` to a
/// relative residual below 1e-12.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("lambert_w0: non-finite input {x}")));
    }
    if x < -INV_E - 1e-12 {
        return Err(Error::Domain(format!(
            "lambert_w0: x = {x} below branch point -1/e"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let x = x.max(-INV_E);

    // Initial guess by region, then Halley refinement.
    let mut w = if x < -0.25 {
        // Series around the branch point W(-1/e) = -1.
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x < 2.0 {
        x * (1.0 - x + 1.5 * x * x) / (1.0 + 0.5 * x)
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..60 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-14 * x.abs().max(1e-300) {
            break;
        }
        let w1 = w + 1.0;
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        let step = f / denom;
        w -= step;
        if w < -1.0 {
            w = -1.0 + 1e-16;
        }
        if step.abs() <= 1e-16 * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w)
}

/// W0(exp(l)) without forming exp(l); stable for arbitrarily large `l`.
///
/// Solves `w + ln w = l` by Newton iteration. Used to evaluate the circuit
/// harvesting law when its inner Bessel argument would overflow.
pub fn lambert_w0_of_ln(l: f64) -> Result<f64> {
    if l <= 1.0 {
        return lambert_w0(l.exp());
    }
    let mut w = (l - l.ln()).max(1e-12);
    for _ in 0..80 {
        let f = w + w.ln() - l;
        let step = f * w / (w + 1.0);
        w -= step;
        if w <= 0.0 {
            w = 1e-300;
        }
        if step.abs() <= 1e-15 * w {
            break;
        }
    }
    Ok(w)
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64> {
    let ax = x.abs();
    if ax > I0_OVERFLOW {
        return Err(Error::Overflow(format!("bessel_i0: |x| = {ax} overflows")));
    }
    if ax <= 18.0 {
        Ok(i0_series(ax))
    } else {
        let (s, _) = i0_asymptotic_factor(ax);
        Ok(ax.exp() / (2.0 * std::f64::consts::PI * ax).sqrt() * s)
    }
}

/// ln I0(x), valid for all finite x (no overflow).
pub fn bessel_i0_ln(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 18.0 {
        i0_series(ax).ln()
    } else {
        let (s, _) = i0_asymptotic_factor(ax);
        ax - 0.5 * (2.0 * std::f64::consts::PI * ax).ln() + s.ln()
    }
}

fn i0_series(ax: f64) -> f64 {
    let q = 0.25 * ax * ax;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Asymptotic correction sum for I0 and its J0 relatives: t_k = t_{k-1} * (2k-1)^2 / (8 x k).
fn i0_asymptotic_factor(ax: f64) -> (f64, Vec<f64>) {
    let mut terms = Vec::with_capacity(24);
    let mut t = 1.0;
    terms.push(t);
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40u32 {
        let m = (2 * k - 1) as f64;
        t *= m * m / (8.0 * ax * k as f64);
        if t >= prev {
            break; // divergent tail of the asymptotic series
        }
        prev = t;
        terms.push(t);
        sum += t;
        if t < 1e-17 {
            break;
        }
    }
    (sum, terms)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    let ax = x.abs();
    if !ax.is_finite() {
        return Err(Error::Domain("bessel_j0: non-finite input".into()));
    }
    if ax < 12.0 {
        // Alternating power series with compensated summation.
        let q = 0.25 * ax * ax;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut comp = 0.0f64;
        for k in 1..200u32 {
            term *= -q / ((k * k) as f64);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            if term.abs() < 1e-18 {
                break;
            }
        }
        Ok(sum)
    } else {
        // Hankel asymptotic expansion: the even terms build P, the odd terms Q.
        let (_, terms) = i0_asymptotic_factor(ax);
        let mut p = 0.0;
        let mut q = 0.0;
        for (k, t) in terms.iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p += sign * t;
            } else {
                q -= sign * t;
            }
        }
        let omega = ax - std::f64::consts::FRAC_PI_4;
        let amp = (2.0 / (std::f64::consts::PI * ax)).sqrt();
        Ok(amp * (p * omega.cos() - q * omega.sin()))
    }
}

/// Imaginary error function erfi(x) = (2/sqrt(pi)) * integral of exp(t^2) on [0, x].
///
/// Restricted to |x| <= 26; beyond that the value overflows f64.
pub fn erfi(x: f64) -> Result<f64> {
    if x.abs() > 26.0 {
        return Err(Error::Overflow(format!("erfi: |x| = {} overflows", x.abs())));
    }
    // All-positive series, no cancellation: sum x^(2k+1) / (k! (2k+1)).
    let q = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 1..2000u32 {
        term *= q / k as f64;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    Ok(sum * 2.0 / std::f64::consts::PI.sqrt())
}

/// Dawson integral D(x) = exp(-x^2) * integral of exp(t^2) on [0, x].
///
/// Satisfies erfi(x) = 2 exp(x^2) D(x) / sqrt(pi); usable where erfi overflows.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let val = if ax <= 6.0 {
        let q = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        for k in 1..200u32 {
            term *= q / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add < 1e-18 * sum {
                break;
            }
        }
        (-q).exp() * sum
    } else {
        // D(x) ~ 1/(2x) * sum (2k-1)!! / (2 x^2)^k, truncated at the smallest term.
        let inv2q = 1.0 / (2.0 * ax * ax);
        let mut t = 1.0;
        let mut sum = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..60u32 {
            t *= (2 * k - 1) as f64 * inv2q;
            if t >= prev {
                break;
            }
            prev = t;
            sum += t;
            if t < 1e-18 {
                break;
            }
        }
        sum / (2.0 * ax)
    };
    if x < 0.0 {
        -val
    } else {
        val
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::integrate;

    #[test]
    fn lambert_w0_fixed_points() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((lambert_w0(e).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn lambert_w0_at_one_matches_newton_oracle() {
        // Independent oracle: plain Newton on w e^w - 1 from w = 1.
        let mut w = 1.0f64;
        for _ in 0..100 {
            let f = w * w.exp() - 1.0;
            w -= f / ((w + 1.0) * w.exp());
        }
        assert!((w - 0.5671432904).abs() < 1e-9);
        assert!((lambert_w0(1.0).unwrap() - w).abs() < 1e-13);
    }

    #[test]
    fn lambert_w0_round_trip_log_spaced() {
        // 1e4 log-spaced points over [-1/e + 1e-6, 1e6].
        let lo = -INV_E + 1e-6;
        for i in 0..10_000 {
            let t = i as f64 / 9_999.0;
            // Map [0,1] onto the domain: negative wedge then log sweep.
            let x = if t < 0.2 {
                lo + (t / 0.2) * (0.0 - lo - 1e-12)
            } else {
                10f64.powf(-6.0 + (t - 0.2) / 0.8 * 12.0)
            };
            let w = lambert_w0(x).unwrap();
            let back = w * w.exp();
            assert!(
                (back - x).abs() <= 1e-12 * x.abs().max(1e-9),
                "round trip failed at x={x}: w={w}, back={back}"
            );
        }
    }

    #[test]
    fn lambert_w0_domain_error() {
        assert!(lambert_w0(-1.0).is_err());
    }

    #[test]
    fn lambert_w0_of_ln_consistency() {
        for &l in &[0.5f64, 2.0, 10.0, 100.0, 650.0] {
            let direct = lambert_w0(l.exp()).unwrap();
            let ln_form = lambert_w0_of_ln(l).unwrap();
            assert!((direct - ln_form).abs() < 1e-10 * direct.abs().max(1.0));
        }
        // Beyond exp overflow: check w + ln w = l directly.
        let w = lambert_w0_of_ln(5000.0).unwrap();
        assert!((w + w.ln() - 5000.0).abs() < 1e-9);
    }

    #[test]
    fn bessel_i0_series_oracle() {
        // Truncated power-series oracle evaluated independently.
        let oracle = |x: f64| {
            let mut sum = 0.0;
            for k in (0..40).rev() {
                let mut term = 1.0;
                for j in 1..=k {
                    term *= (x / 2.0) / j as f64;
                }
                sum += term * term;
            }
            sum
        };
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        assert!((bessel_i0(1.0).unwrap() - 1.2660658778).abs() < 1e-9);
        for &x in &[0.3, 1.0, 2.5, 7.0, 12.0] {
            let rel = (bessel_i0(x).unwrap() - oracle(x)).abs() / oracle(x);
            assert!(rel < 1e-12, "I0({x}) off by {rel}");
        }
    }

    #[test]
    fn bessel_i0_even_and_ge_one() {
        for &x in &[0.1, 1.0, 3.0, 10.0, 50.0, 300.0] {
            let a = bessel_i0(x).unwrap();
            let b = bessel_i0(-x).unwrap();
            assert_eq!(a, b);
            assert!(a >= 1.0);
        }
        assert!(bessel_i0(800.0).is_err());
    }

    #[test]
    fn bessel_i0_ln_matches_series_at_switch() {
        for &x in &[10.0, 17.9, 18.1, 30.0, 700.0, 5000.0] {
            let ln_val = bessel_i0_ln(x);
            if x <= I0_OVERFLOW {
                let rel = (ln_val - bessel_i0(x).unwrap().ln()).abs() / ln_val.abs();
                assert!(rel < 1e-11, "ln I0({x}) rel err {rel}");
            } else {
                assert!(ln_val > 4000.0);
            }
        }
    }

    #[test]
    fn bessel_j0_values_and_root() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert!((bessel_j0(1.0).unwrap() - 0.7651976866).abs() < 1e-9);
        // First root located by bisection oracle on the series implementation.
        let mut lo = 2.0;
        let mut hi = 3.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if bessel_j0(mid).unwrap() > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 2.4048255577).abs() < 1e-8);
        assert!(bessel_j0(2.4048255577).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn bessel_j0_series_asymptotic_agree() {
        // The two evaluation paths must agree around the switch point.
        for i in 0..200 {
            let x = 10.0 + 4.0 * i as f64 / 199.0;
            let q = 0.25 * x * x;
            let mut term = 1.0f64;
            let mut series = 1.0f64;
            for k in 1..400u32 {
                term *= -q / ((k * k) as f64);
                series += term;
                if term.abs() < 1e-20 {
                    break;
                }
            }
            let val = bessel_j0(x).unwrap();
            assert!(
                (val - series).abs() < 2e-10,
                "J0({x}): {val} vs series {series}"
            );
        }
    }

    #[test]
    fn bessel_j0_bounded_and_oscillating() {
        let mut signs = 0;
        let mut last = bessel_j0(0.5).unwrap();
        for i in 1..200 {
            let x = 0.5 + i as f64 * 0.25;
            let v = bessel_j0(x).unwrap();
            assert!(v.abs() <= 1.0 + 1e-12);
            if v.signum() != last.signum() {
                signs += 1;
            }
            last = v;
        }
        assert!(signs > 10);
    }

    #[test]
    fn erfi_values_against_quadrature_oracle() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        assert!((erfi(1.0).unwrap() - 1.6504257588).abs() < 1e-9);
        for &x in &[0.3, 1.0, 2.0, 4.0] {
            let oracle = 2.0 / std::f64::consts::PI.sqrt()
                * integrate(|t: f64| (t * t).exp(), 0.0, x, 1e-13);
            let rel = (erfi(x).unwrap() - oracle).abs() / oracle.abs();
            assert!(rel < 1e-9, "erfi({x}) rel err {rel}");
        }
    }

    #[test]
    fn erfi_odd_and_overflow() {
        for &x in &[0.7, 3.0, 10.0] {
            assert_eq!(erfi(-x).unwrap(), -erfi(x).unwrap());
        }
        assert!(erfi(26.0).unwrap().is_finite());
        assert!(erfi(26.5).is_err());
    }

    #[test]
    fn dawson_matches_erfi_scaling() {
        for &x in &[0.2, 1.0, 3.0, 5.9, 6.1, 12.0, 40.0] {
            let d = dawson(x);
            if x <= 20.0 {
                let viaerfi = if x <= 26.0 {
                    0.5 * std::f64::consts::PI.sqrt() * (-x * x).exp() * erfi(x).unwrap()
                } else {
                    f64::NAN
                };
                if viaerfi.is_finite() && viaerfi > 0.0 {
                    assert!((d - viaerfi).abs() < 1e-12 * d.max(1e-12), "x={x}");
                }
            }
            assert!(d > 0.0 && d < 1.0);
        }
        assert!((dawson(1.0) - 0.5380795069).abs() < 1e-9);
        assert_eq!(dawson(-2.0), -dawson(2.0));
    }
}
