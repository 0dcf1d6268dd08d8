//! Fading generation, LoS near-field gains, pilot-based MMSE estimation,
//! subband ordering, and spatially correlated field sampling.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::{hermitian_eigen, CMatrix};
use crate::numerics::rng::RngStream;
use crate::numerics::special::bessel_j0;

/// Large-scale and Rician small-scale fading parameters.
#[derive(Clone, Copy, Debug)]
pub struct FadingSpec {
    /// Mean channel power E|h|^2.
    pub beta: f64,
    /// Rician factor in linear scale; 0 gives Rayleigh fading.
    pub rice_k: f64,
    pub pathloss_exp: f64,
    pub ref_distance: f64,
}

impl FadingSpec {
    pub fn rayleigh(beta: f64) -> Self {
        FadingSpec { beta, rice_k: 0.0, pathloss_exp: 2.0, ref_distance: 1.0 }
    }

    /// Large-scale gain at `distance` under the power-law model.
    pub fn beta_at(&self, distance: f64) -> f64 {
        self.beta * (distance / self.ref_distance).powf(-self.pathloss_exp)
    }
}

/// I.i.d. Rician fading entries with mean power `beta`.
///
/// The deterministic component has zero phase; only envelope statistics are
/// pinned by the model.
pub fn sample_fading(spec: &FadingSpec, n: usize, stream: &mut RngStream) -> Vec<Complex64> {
    let k = spec.rice_k;
    let los = (spec.beta * k / (k + 1.0)).sqrt();
    let scatter_std = (spec.beta / (k + 1.0)).sqrt();
    (0..n)
        .map(|_| Complex64::new(los, 0.0) + scatter_std * stream.complex_gaussian())
        .collect()
}

/// Per-subband channel estimates together with their quality figures.
#[derive(Clone, Debug)]
pub struct EstimateSet {
    /// Estimated gain vector per subband.
    pub estimates: Vec<Vec<Complex64>>,
    /// Estimation quality gamma; the error variance per entry is `beta - gamma`.
    pub gamma: f64,
    pub err_var: f64,
    pub beta: f64,
}

impl EstimateSet {
    pub fn gain_sq(&self, subband: usize) -> f64 {
        self.estimates[subband].iter().map(|g| g.norm_sqr()).sum()
    }
}

/// Pilot estimation quality `gamma = (pp tau/N b^2) / (sigma^2 + pp tau/N b)`.
pub fn mmse_gamma(beta: f64, p_pilot: f64, tau_pilot: f64, n_subbands: usize, sigma2: f64) -> f64 {
    let e = p_pilot * tau_pilot / n_subbands as f64;
    if e == 0.0 {
        return 0.0;
    }
    e * beta * beta / (sigma2 + e * beta)
}

/// Pilot-based estimates. The estimate is modeled as truth plus an additive
/// error, `est = g + err` with `err ~ CN(0, beta - gamma)` per entry; tests
/// and demodulation math rely on this sign convention.
pub fn mmse_estimate(
    true_gains: &[Vec<Complex64>],
    beta: f64,
    p_pilot: f64,
    tau_pilot: f64,
    sigma2: f64,
    stream: &mut RngStream,
) -> EstimateSet {
    let n = true_gains.len().max(1);
    let gamma = mmse_gamma(beta, p_pilot, tau_pilot, n, sigma2);
    let err_var = (beta - gamma).max(0.0);
    let err_std = err_var.sqrt();
    let estimates = true_gains
        .iter()
        .map(|g| {
            g.iter()
                .map(|&x| x + err_std * stream.complex_gaussian())
                .collect()
        })
        .collect();
    EstimateSet { estimates, gamma, err_var, beta }
}

/// Permutation ordering subbands by descending estimated gain, ties broken by
/// the lower original index. `perm[0]` is the strongest subband's index.
pub fn order_subbands(est: &EstimateSet) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..est.estimates.len()).collect();
    idx.sort_by(|&a, &b| {
        est.gain_sq(b)
            .partial_cmp(&est.gain_sq(a))
            .unwrap()
            .then(a.cmp(&b))
    });
    idx
}

/// LoS link with reference power gain `c` at 1 m and wavelength `lambda`.
#[derive(Clone, Copy, Debug)]
pub struct LosLink {
    pub c: f64,
    pub lambda: f64,
}

/// Complex LoS gain `sqrt(c)/d * exp(-j 2 pi d / lambda)`.
pub fn los_gain(d: f64, link: &LosLink) -> Result<Complex64> {
    if d <= 0.0 {
        return Err(Error::Invalid(format!("los_gain: distance {d} must be > 0")));
    }
    let amp = link.c.sqrt() / d;
    let phase = -2.0 * std::f64::consts::PI * d / link.lambda;
    Ok(Complex64::from_polar(amp, phase))
}

/// Zero-mean complex Gaussian field over a uniform line grid whose spatial
/// correlation follows `J0(2 pi tau / lambda)` (isotropic scattering).
///
/// The covariance is factorized once by eigendecomposition; negative
/// eigenvalues are clipped to zero and their mass reported.
pub struct CorrelatedField {
    factor: CMatrix,
    pub n_points: usize,
    /// Sum of clipped negative eigenvalue magnitudes over the trace.
    pub clipped_mass: f64,
}

impl CorrelatedField {
    pub fn new(n_points: usize, spacing: f64, lambda: f64) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::Invalid("correlated field needs >= 1 point".into()));
        }
        let cov = CMatrix::from_fn(n_points, n_points, |i, j| {
            let tau = (i as f64 - j as f64).abs() * spacing;
            let c = bessel_j0(2.0 * std::f64::consts::PI * tau / lambda).unwrap();
            Complex64::new(c, 0.0)
        });
        let eig = hermitian_eigen(&cov)?;
        let clipped: f64 = eig.values.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
        let trace: f64 = n_points as f64;
        // factor = V diag(sqrt(max(lambda, 0)))
        let mut factor = CMatrix::zeros(n_points, n_points);
        for j in 0..n_points {
            let s = eig.values[j].max(0.0).sqrt();
            for i in 0..n_points {
                factor[(i, j)] = eig.vectors[(i, j)] * s;
            }
        }
        Ok(CorrelatedField { factor, n_points, clipped_mass: clipped / trace })
    }

    /// One field realization: `factor * z` with `z ~ CN(0, I)`.
    pub fn sample(&self, stream: &mut RngStream) -> Vec<Complex64> {
        let z = stream.complex_gaussian_vec(self.n_points);
        self.factor.mul_vec(&z)
    }

    /// `n_signals` i.i.d. field realizations.
    pub fn sample_many(&self, n_signals: usize, stream: &mut RngStream) -> Vec<Vec<Complex64>> {
        (0..n_signals).map(|_| self.sample(stream)).collect()
    }

    /// Target correlation at lag `k` grid steps.
    pub fn target_correlation(&self, k: usize, spacing: f64, lambda: f64) -> f64 {
        bessel_j0(2.0 * std::f64::consts::PI * k as f64 * spacing / lambda).unwrap()
    }
}
