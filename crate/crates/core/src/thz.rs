//! THz link with a single integrated harvesting/detecting receiver: a
//! non-monotonic rectifier transfer curve, an achievable-rate lower bound on
//! the mutual information, the optimal input distribution under peak-amplitude
//! and harvested-power constraints, and a truncated-Gaussian baseline.

use crate::error::{Error, Result};
use crate::numerics::quad::{simpson_uniform, trapz_uniform};
use crate::numerics::rng::RngStream;
use crate::numerics::roots::find_root;
use crate::numerics::special::{dawson, erfi};

/// Rectifier transfer curve: output power versus instantaneous received
/// power. A monotone cubic rise to `p_max` at `rho_knee`, an optional
/// negative-differential dip beyond the knee, and saturation at `p_max`.
#[derive(Clone, Copy, Debug)]
pub struct PsiCurve {
    pub rho_knee: f64,
    pub p_max: f64,
    pub dip: Option<PsiDip>,
}

/// Dip region `[rho_knee, rho_end]` descending to `depth * p_max` midway.
#[derive(Clone, Copy, Debug)]
pub struct PsiDip {
    pub rho_end: f64,
    pub depth: f64,
}

impl PsiCurve {
    pub fn new(rho_knee: f64, p_max: f64) -> Self {
        PsiCurve { rho_knee, p_max, dip: None }
    }

    pub fn with_dip(rho_knee: f64, p_max: f64, rho_end: f64, depth: f64) -> Self {
        PsiCurve { rho_knee, p_max, dip: Some(PsiDip { rho_end, depth }) }
    }

    /// Output power at instantaneous input `rho`.
    pub fn eval(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        if rho < self.rho_knee {
            let t = rho / self.rho_knee;
            return self.p_max * t * t * (3.0 - 2.0 * t);
        }
        if let Some(d) = self.dip {
            if rho < d.rho_end {
                let t = (rho - self.rho_knee) / (d.rho_end - self.rho_knee);
                let s = (std::f64::consts::PI * t).sin();
                return self.p_max * (1.0 - (1.0 - d.depth) * s * s);
            }
        }
        self.p_max
    }

    /// Derivative of the transfer curve.
    pub fn d_drho(&self, rho: f64) -> f64 {
        if rho <= 0.0 || rho >= self.rho_knee {
            if let Some(d) = self.dip {
                if rho > self.rho_knee && rho < d.rho_end {
                    let w = d.rho_end - self.rho_knee;
                    let t = (rho - self.rho_knee) / w;
                    let pi = std::f64::consts::PI;
                    return -self.p_max * (1.0 - d.depth) * pi * (2.0 * pi * t).sin() / w;
                }
            }
            return 0.0;
        }
        let t = rho / self.rho_knee;
        self.p_max * 6.0 * t * (1.0 - t) / self.rho_knee
    }

    /// Inverse of the rising segment: input power yielding output `p`.
    pub fn invert_rising(&self, p: f64) -> Result<f64> {
        if !(0.0..=self.p_max).contains(&p) {
            return Err(Error::Invalid(format!("output {p} outside [0, {}]", self.p_max)));
        }
        let target = p / self.p_max;
        let t = find_root(|t| t * t * (3.0 - 2.0 * t) - target, 0.0, 1.0)?;
        Ok(t * self.rho_knee)
    }
}

/// Link constants: real channel gain, noise, peak amplitude, harvest floor.
#[derive(Clone, Copy, Debug)]
pub struct ThzLink {
    pub g: f64,
    pub sigma_n2: f64,
    /// Peak transmit amplitude A.
    pub amp_max: f64,
    /// Required average harvested power.
    pub p_req: f64,
}

impl ThzLink {
    /// LoS gain `c0 / (4 pi d f_c) * sqrt(Gt Gr)` from dB-isotropic gains.
    pub fn los(f_c: f64, d: f64, gt_dbi: f64, gr_dbi: f64, sigma_n2: f64, amp_max: f64, p_req: f64) -> Self {
        let c0 = 299_792_458.0;
        let g = c0 / (4.0 * std::f64::consts::PI * d * f_c)
            * 10f64.powf((gt_dbi + gr_dbi) / 20.0);
        ThzLink { g, sigma_n2, amp_max, p_req }
    }

    /// Output-signal amplitude for transmit amplitude `s`.
    pub fn output_mean(&self, s: f64, psi: &PsiCurve) -> f64 {
        psi.eval(self.g * self.g * s * s).sqrt()
    }
}

/// One receiver output sample `sqrt(psi(|g s|^2)) + n`.
pub fn output_sample(s: f64, link: &ThzLink, psi: &PsiCurve, stream: &mut RngStream) -> Result<f64> {
    if !(0.0..=link.amp_max).contains(&s) {
        return Err(Error::Invalid(format!("amplitude {s} outside [0, {}]", link.amp_max)));
    }
    Ok(link.output_mean(s, psi) + link.sigma_n2.sqrt() * stream.gaussian())
}

const QUAD_POINTS: usize = 4001;

fn grid(n: usize, lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let dx = (hi - lo) / (n - 1) as f64;
    ((0..n).map(|i| lo + i as f64 * dx).collect(), dx)
}

/// Achievable-rate lower bound `J = 0.5 ln(1 + exp(2 h_x) / (2 pi e s2))`
/// where `h_x` is the differential entropy of `x = sqrt(psi(g^2 s^2))`.
///
/// Any probability mass on the flat (saturated or dipped) part of the curve
/// collapses the differential entropy, so such inputs return J = 0.
pub fn achievable_rate(f_s: impl Fn(f64) -> f64, link: &ThzLink, psi: &PsiCurve) -> Result<f64> {
    let (s_grid, ds) = grid(QUAD_POINTS, 0.0, link.amp_max);
    let dens: Vec<f64> = s_grid.iter().map(|&s| f_s(s).max(0.0)).collect();
    let total = trapz_uniform(&dens, ds);
    if (total - 1.0).abs() > 1e-3 {
        return Err(Error::Invalid(format!("density integrates to {total}")));
    }
    // Mass where the transform has (near-)zero slope forms an atom in x.
    let mut atom_mass = 0.0;
    let mut h_terms = vec![0.0; s_grid.len()];
    let scale = psi.p_max.sqrt() / link.amp_max; // slope scale for the cutoff
    for (i, &s) in s_grid.iter().enumerate() {
        let rho = link.g * link.g * s * s;
        let x = psi.eval(rho).sqrt();
        let dx_ds = if x > 0.0 { psi.d_drho(rho) * link.g * link.g * s / x } else { 0.0 };
        if dens[i] <= 0.0 {
            continue;
        }
        if dx_ds.abs() < 1e-9 * scale && s > 0.0 {
            atom_mass += dens[i] * ds;
        } else if dx_ds.abs() > 0.0 {
            // h_x = h_s + E ln |dx/ds|
            h_terms[i] = dens[i] * (-(dens[i].ln()) + dx_ds.abs().ln());
        }
    }
    if atom_mass > 1e-6 {
        return Ok(0.0);
    }
    let h_x = trapz_uniform(&h_terms, ds) / total;
    Ok(0.5 * (1.0 + (2.0 * h_x).exp() / (2.0 * std::f64::consts::PI * std::f64::consts::E * link.sigma_n2)).ln())
}

/// Regime of the optimal design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateRegime {
    /// Harvest floor inactive: uniform output distribution.
    Unconstrained,
    /// Active floor: exponential-in-x^2 output distribution.
    Constrained,
}

#[derive(Clone, Copy, Debug)]
pub struct OptimalRate {
    pub j_star: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub regime: RateRegime,
}

/// Constraint function whose root gives mu1:
/// `ratio(mu) = exp(mu^2) / (sqrt(pi) mu erfi(mu)) - 1/(2 mu^2)`,
/// evaluated through the Dawson integral so it never overflows.
pub fn harvest_ratio_of_mu(mu: f64) -> f64 {
    if mu < 1e-4 {
        // Series limit: 1/3 + mu^2 * 4/45 + ...
        return 1.0 / 3.0 + mu * mu * 4.0 / 45.0;
    }
    1.0 / (2.0 * mu * dawson(mu)) - 1.0 / (2.0 * mu * mu)
}

/// ln of `sqrt(pi) erfi(mu) / (2 mu)`, the normalizer of the tilted density.
fn ln_tilt_normalizer(mu: f64) -> f64 {
    if mu < 1e-4 {
        return (mu * mu / 3.0).ln_1p();
    }
    if mu <= 20.0 {
        (std::f64::consts::PI.sqrt() * erfi(mu).unwrap() / (2.0 * mu)).ln()
    } else {
        // erfi(mu) = 2 exp(mu^2) D(mu) / sqrt(pi)
        mu * mu + (dawson(mu) / mu).ln()
    }
}

/// Maximum achievable rate and its multipliers for the configured link.
///
/// Below the 1/3 power ratio the optimum is the uniform output distribution;
/// above it the tilted density applies with `mu1` from the unique root of the
/// harvest-ratio equation.
pub fn optimal_rate(link: &ThzLink, psi: &PsiCurve) -> Result<OptimalRate> {
    let p_max = psi.p_max;
    let ratio = link.p_req / p_max;
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::Infeasible(format!("power ratio {ratio} outside [0, 1]")));
    }
    // Peak amplitude must drive the curve to its maximum output.
    if link.g * link.g * link.amp_max * link.amp_max < psi.rho_knee {
        return Err(Error::Infeasible(
            "peak amplitude cannot reach the saturation output".into(),
        ));
    }
    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    if ratio <= 1.0 / 3.0 {
        return Ok(OptimalRate {
            j_star: 0.5 * (1.0 + p_max / (two_pi_e * link.sigma_n2)).ln(),
            mu0: 0.5 * p_max.ln(),
            mu1: 0.0,
            regime: RateRegime::Unconstrained,
        });
    }
    let lo = 1e-9;
    let hi = 60.0;
    if harvest_ratio_of_mu(hi) <= ratio {
        return Err(Error::Infeasible(format!(
            "ratio {ratio} too close to 1 for the mu1 bracket"
        )));
    }
    let mu1 = find_root(|mu| harvest_ratio_of_mu(mu) - ratio, lo, hi)?;
    let mu0 = 0.5 * p_max.ln() + ln_tilt_normalizer(mu1);
    let h_x = mu0 - mu1 * mu1 * ratio;
    Ok(OptimalRate {
        j_star: 0.5 * (1.0 + (2.0 * h_x).exp() / (two_pi_e * link.sigma_n2)).ln(),
        mu0,
        mu1,
        regime: RateRegime::Constrained,
    })
}

/// Density sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct SampledDensity {
    pub s: Vec<f64>,
    pub f: Vec<f64>,
}

impl SampledDensity {
    pub fn step(&self) -> f64 {
        self.s[1] - self.s[0]
    }

    pub fn integral(&self) -> f64 {
        simpson_uniform(&self.f, self.step())
    }

    /// Expectation of `h(s)` under the density.
    pub fn expect(&self, h: impl Fn(f64) -> f64) -> f64 {
        let vals: Vec<f64> = self.s.iter().zip(&self.f).map(|(&s, &f)| f * h(s)).collect();
        simpson_uniform(&vals, self.step())
    }

    /// Linear interpolation, zero outside the grid.
    pub fn at(&self, s: f64) -> f64 {
        let ds = self.step();
        if s < self.s[0] || s > *self.s.last().unwrap() {
            return 0.0;
        }
        let idx = ((s - self.s[0]) / ds).floor() as usize;
        if idx + 1 >= self.s.len() {
            return self.f[idx];
        }
        let t = (s - self.s[idx]) / ds;
        self.f[idx] * (1.0 - t) + self.f[idx + 1] * t
    }
}

/// Optimal transmit-amplitude density: the pushforward of the optimal output
/// density through the rising branch of the transfer curve. Amplitudes beyond
/// the knee realize no new output level and carry no mass.
pub fn optimal_input_pdf(link: &ThzLink, psi: &PsiCurve) -> Result<SampledDensity> {
    let opt = optimal_rate(link, psi)?;
    let s_knee = psi.rho_knee.sqrt() / link.g;
    let support = s_knee.min(link.amp_max);
    let (s_grid, _) = grid(4 * QUAD_POINTS + 1, 0.0, support);
    let p_max = psi.p_max;
    let f: Vec<f64> = s_grid
        .iter()
        .map(|&s| {
            let rho = link.g * link.g * s * s;
            let x = psi.eval(rho).sqrt();
            let dx_ds = if x > 0.0 {
                psi.d_drho(rho) * link.g * link.g * s / x
            } else {
                0.0
            };
            // f_x(x) = exp(-mu0 + mu1^2 x^2 / p_max) on [0, sqrt(p_max)]
            let fx = (-opt.mu0 + opt.mu1 * opt.mu1 * x * x / p_max).exp();
            fx * dx_ds.max(0.0)
        })
        .collect();
    Ok(SampledDensity { s: s_grid, f })
}

/// Mutual information between the amplitude input and the receiver output by
/// nested quadrature: the output density is the Gaussian mixture
/// `f_y(y) = integral f_s(s) N(y; m(s), s2) ds`.
pub fn mutual_information(
    f_s: impl Fn(f64) -> f64,
    link: &ThzLink,
    psi: &PsiCurve,
    n_quad: usize,
) -> Result<f64> {
    let n = n_quad.max(64);
    let (s_grid, ds) = grid(n, 0.0, link.amp_max);
    let dens: Vec<f64> = s_grid.iter().map(|&s| f_s(s).max(0.0)).collect();
    let total = trapz_uniform(&dens, ds);
    if total <= 0.0 {
        return Err(Error::Invalid("zero density".into()));
    }
    let means: Vec<f64> = s_grid.iter().map(|&s| link.output_mean(s, psi)).collect();
    let sigma = link.sigma_n2.sqrt();
    let y_lo = -6.0 * sigma;
    let y_hi = psi.p_max.sqrt() + 6.0 * sigma;
    let n_y = ((y_hi - y_lo) / (sigma / 6.0)).ceil() as usize + 1;
    let (y_grid, dy) = grid(n_y.max(129), y_lo, y_hi);
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
    let mut h_y_terms = Vec::with_capacity(y_grid.len());
    for &y in &y_grid {
        let mix: Vec<f64> = dens
            .iter()
            .zip(&means)
            .map(|(&f, &m)| {
                let z = (y - m) / sigma;
                f * norm * (-0.5 * z * z).exp()
            })
            .collect();
        let fy = trapz_uniform(&mix, ds) / total;
        h_y_terms.push(if fy > 0.0 { -fy * fy.ln() } else { 0.0 });
    }
    let h_y = trapz_uniform(&h_y_terms, dy);
    let h_noise = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * link.sigma_n2).ln();
    Ok((h_y - h_noise).max(0.0))
}

/// Average harvested power under a density.
pub fn mean_harvest(f_s: impl Fn(f64) -> f64, link: &ThzLink, psi: &PsiCurve) -> f64 {
    let (s_grid, ds) = grid(QUAD_POINTS, 0.0, link.amp_max);
    let vals: Vec<f64> = s_grid
        .iter()
        .map(|&s| f_s(s).max(0.0) * psi.eval(link.g * link.g * s * s))
        .collect();
    let dens: Vec<f64> = s_grid.iter().map(|&s| f_s(s).max(0.0)).collect();
    trapz_uniform(&vals, ds) / trapz_uniform(&dens, ds)
}

/// Truncated-Gaussian density on [0, A] with mean A/2 and scale `sigma_s`.
pub fn truncated_gaussian(a: f64, sigma_s: f64) -> impl Fn(f64) -> f64 {
    move |s: f64| {
        if !(0.0..=a).contains(&s) {
            return 0.0;
        }
        (-0.5 * ((s - 0.5 * a) / sigma_s).powi(2)).exp()
    }
}

/// Baseline sweep: mutual information and mean harvest of truncated-Gaussian
/// inputs over a range of scales.
pub fn gaussian_baseline(
    link: &ThzLink,
    psi: &PsiCurve,
    sigmas: &[f64],
    n_quad: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(sigmas.len());
    for &sig in sigmas {
        if sig <= 0.0 {
            return Err(Error::Invalid("sigma_s must be positive".into()));
        }
        let raw = truncated_gaussian(link.amp_max, sig);
        // Normalize once so the quadratures see a proper density.
        let (s_grid, ds) = grid(QUAD_POINTS, 0.0, link.amp_max);
        let total = trapz_uniform(&s_grid.iter().map(|&s| raw(s)).collect::<Vec<_>>(), ds);
        let f = move |s: f64| raw(s) / total;
        let info = mutual_information(&f, link, psi, n_quad)?;
        let harvest = mean_harvest(&f, link, psi);
        out.push((info, harvest));
    }
    Ok(out)
}
