//! Superimposed-chirp and multisine transmission with a diplexer-style
//! integrated receiver: time-domain harvest evaluation through the diode
//! series and a demodulated-SINR rate series.

use num_complex::Complex64;

use crate::channel::{mmse_estimate, order_subbands, EstimateSet};
use crate::eh::{diode_avg_power, DiodeSeries};
use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;
use crate::numerics::series::alternating_sum;

/// Chirp family over `n_subbands` bands of width `band_hz`, with `xi` chirps
/// superimposed per band. The symbol lasts `xi / band_hz` seconds, so the
/// time-bandwidth product equals `xi`.
#[derive(Clone, Copy, Debug)]
pub struct ChirpSpec {
    pub n_subbands: usize,
    pub xi: usize,
    pub band_hz: f64,
    /// Baseband offset of the first subband. Must be a multiple of `band_hz`
    /// and nonzero: a subband at DC would take double weight in the squared
    /// time averages, which no passband system exhibits.
    pub f0_hz: f64,
}

impl ChirpSpec {
    /// Spec with the default offset `f0 = N B`, which gives every tone an
    /// integer number of cycles per symbol.
    pub fn new(n_subbands: usize, xi: usize, band_hz: f64) -> Self {
        ChirpSpec { n_subbands, xi, band_hz, f0_hz: n_subbands as f64 * band_hz }
    }

    /// Symbol duration `T = xi / B`.
    pub fn symbol_time(&self) -> f64 {
        self.xi as f64 / self.band_hz
    }

    /// Chirp rate `mu = B / T`.
    pub fn chirp_rate(&self) -> f64 {
        self.band_hz / self.symbol_time()
    }

    /// Center offset of subband `n` (1-based): `f0 + (n-1) B`.
    pub fn subband_freq(&self, n: usize) -> f64 {
        self.f0_hz + (n as f64 - 1.0) * self.band_hz
    }

    /// Wrap instant of chirp `l`: `T_l = T (1 - (l-1)/xi)`.
    pub fn wrap_time(&self, l: usize) -> f64 {
        self.symbol_time() * (1.0 - (l as f64 - 1.0) / self.xi as f64)
    }

    fn check_indices(&self, n: usize, l: usize, t: f64) -> Result<()> {
        if n == 0 || n > self.n_subbands {
            return Err(Error::Invalid(format!(
                "subband {n} outside 1..={}",
                self.n_subbands
            )));
        }
        if l == 0 || l > self.xi {
            return Err(Error::Invalid(format!("chirp index {l} outside 1..={}", self.xi)));
        }
        if !(0.0..=self.symbol_time() * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::Invalid(format!("t = {t} outside [0, T]")));
        }
        Ok(())
    }
}

/// Phase (radians) of the l-th superimposed chirp on subband n at time t.
///
/// The instantaneous frequency ramps from an offset of `(l-1) B / xi` and
/// wraps by `-B` at `T_l`; the cosine stays continuous across the wrap
/// because the phase jump there is an integer number of cycles.
pub fn chirp_phase(spec: &ChirpSpec, n: usize, l: usize, t: f64) -> Result<f64> {
    spec.check_indices(n, l, t)?;
    let f_n = spec.subband_freq(n);
    let mu = spec.chirp_rate();
    let base = if t <= spec.wrap_time(l) {
        f_n + (l as f64 - 1.0) / spec.xi as f64 * spec.band_hz
    } else {
        f_n + (l as f64 - 1.0 - spec.xi as f64) / spec.xi as f64 * spec.band_hz
    };
    Ok(2.0 * std::f64::consts::PI * t * (base + 0.5 * mu * t))
}

/// Real chirp sample `cos(phase)`.
pub fn chirp_sample(spec: &ChirpSpec, n: usize, l: usize, t: f64) -> Result<f64> {
    Ok(chirp_phase(spec, n, l, t)?.cos())
}

/// Transmit design: strongest-subband selection, per-subband transmit powers
/// (watts, summing to `p_tx`), and matched unit-norm beamformers.
#[derive(Clone, Debug)]
pub struct TxDesign {
    /// Original subband indices, strongest first.
    pub selected: Vec<usize>,
    /// Transmit power per selected subband, watts.
    pub powers: Vec<f64>,
    /// Unit-norm beamformer per selected subband.
    pub beamformers: Vec<Vec<Complex64>>,
    pub p_tx: f64,
}

/// Select the `N/xi` strongest subbands, allocate power proportional to their
/// estimated gains, and beamform along the estimates.
pub fn build_tx(est: &EstimateSet, spec: &ChirpSpec, p_tx: f64) -> Result<TxDesign> {
    let n = est.estimates.len();
    if n != spec.n_subbands {
        return Err(Error::Dimension(format!(
            "estimate set has {n} subbands, spec has {}",
            spec.n_subbands
        )));
    }
    if !n.is_multiple_of(spec.xi) {
        return Err(Error::Invalid(format!(
            "subband count {n} not divisible by xi = {}",
            spec.xi
        )));
    }
    let n_sel = n / spec.xi;
    let order = order_subbands(est);
    let selected: Vec<usize> = order[..n_sel].to_vec();
    let total_gain: f64 = selected.iter().map(|&i| est.gain_sq(i)).sum();
    let powers: Vec<f64> = selected
        .iter()
        .map(|&i| p_tx * est.gain_sq(i) / total_gain)
        .collect();
    let beamformers: Vec<Vec<Complex64>> = selected
        .iter()
        .map(|&i| {
            let g = &est.estimates[i];
            let norm = est.gain_sq(i).sqrt();
            g.iter().map(|x| x / norm).collect()
        })
        .collect();
    Ok(TxDesign { selected, powers, beamformers, p_tx })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveformKind {
    /// Superimposed chirps, one BPSK symbol per chirp.
    Chirp,
    /// Fixed-frequency cosine per subband, one BPSK symbol per subband.
    Multisine,
}

/// Complex per-subband gain seen at the receiver: `sqrt(p_n) g_n^T conj(phi_n)`.
fn effective_gains(design: &TxDesign, truth: &[Vec<Complex64>]) -> Vec<Complex64> {
    design
        .selected
        .iter()
        .zip(&design.powers)
        .zip(&design.beamformers)
        .map(|((&i, &p), phi)| {
            let dot: Complex64 = truth[i].iter().zip(phi).map(|(g, f)| g * f.conj()).sum();
            p.sqrt() * dot
        })
        .collect()
}

/// Received samples over one symbol at rate `8 N B` (midpoint sampling).
fn synthesize(
    spec: &ChirpSpec,
    kind: WaveformKind,
    gains: &[Complex64],
    design: &TxDesign,
    symbols: &[Vec<f64>],
) -> Vec<f64> {
    let t_sym = match kind {
        WaveformKind::Chirp => spec.symbol_time(),
        WaveformKind::Multisine => 1.0 / spec.band_hz,
    };
    let fs = 8.0 * spec.n_subbands as f64 * spec.band_hz;
    let n_samples = (fs * t_sym).round() as usize;
    let norm = (2.0 / spec.xi as f64).sqrt();
    let mut out = vec![0.0f64; n_samples];
    for (s_idx, sample) in out.iter_mut().enumerate() {
        let t = (s_idx as f64 + 0.5) / fs;
        let mut acc = 0.0;
        for (band_pos, &band) in design.selected.iter().enumerate() {
            let c = gains[band_pos];
            match kind {
                WaveformKind::Chirp => {
                    let mut wave = Complex64::new(0.0, 0.0);
                    for l in 1..=spec.xi {
                        let ph = chirp_phase(spec, band + 1, l, t).unwrap();
                        wave += symbols[band_pos][l - 1] * Complex64::from_polar(1.0, ph);
                    }
                    acc += (c * wave).re * norm;
                }
                WaveformKind::Multisine => {
                    let ph = 2.0 * std::f64::consts::PI * spec.subband_freq(band + 1) * t;
                    acc += symbols[band_pos][0]
                        * (c * Complex64::from_polar(1.0, ph)).re
                        * std::f64::consts::SQRT_2;
                }
            }
        }
        *sample = acc;
    }
    out
}

/// Monte Carlo average of the diode harvest metric for one design over random
/// data symbols, per unit time. Antenna noise is ignored for harvesting.
pub fn harvest_eval(
    design: &TxDesign,
    truth: &[Vec<Complex64>],
    spec: &ChirpSpec,
    kind: WaveformKind,
    diode: &DiodeSeries,
    n_trials: usize,
    stream: &mut RngStream,
) -> Result<f64> {
    if design.p_tx == 0.0 {
        return Ok(0.0);
    }
    let gains = effective_gains(design, truth);
    let mut acc = 0.0;
    let trials = n_trials.max(1);
    for _ in 0..trials {
        let symbols: Vec<Vec<f64>> = design
            .selected
            .iter()
            .map(|_| (0..spec.xi).map(|_| stream.bpsk()).collect())
            .collect();
        let y = synthesize(spec, kind, &gains, design, &symbols);
        acc += diode_avg_power(&y, diode)?;
    }
    Ok(acc / trials as f64)
}

/// Demodulated SINR per selected subband for one realization:
/// `p_n T |est^T phi|^2 / (p_n T |err^T phi|^2 + sigma_w^2)`.
///
/// The demodulator front-end gain scales signal and self-interference alike
/// and is folded out; the integrated-noise variance is `noise_var / 2`.
pub fn demod_sinrs(
    design: &TxDesign,
    est: &EstimateSet,
    truth: &[Vec<Complex64>],
    spec: &ChirpSpec,
    noise_var: f64,
) -> Vec<f64> {
    let t_sym = spec.symbol_time();
    let sigma_w2 = 0.5 * noise_var;
    design
        .selected
        .iter()
        .zip(&design.powers)
        .zip(&design.beamformers)
        .map(|((&i, &p), phi)| {
            let est_dot: Complex64 = est.estimates[i]
                .iter()
                .zip(phi)
                .map(|(g, f)| g * f.conj())
                .sum();
            let err_dot: Complex64 = est.estimates[i]
                .iter()
                .zip(&truth[i])
                .zip(phi)
                .map(|((e, g), f)| (e - g) * f.conj())
                .sum();
            let num = p * t_sym * est_dot.norm_sqr();
            let den = p * t_sym * err_dot.norm_sqr() + sigma_w2;
            num / den
        })
        .collect()
}

/// Per-stream spectral efficiency (nats) of a BPSK chirp stream at mean SINR
/// `rho`: `sqrt(rho/(rho+2)) * sum_u (-1)^u 2/(sqrt(1+2/rho) + 2u + 1)`.
///
/// Tends to ln 2 (one bit) as rho grows and to 0 as rho vanishes.
pub fn rate_series_nats(rho: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    let c = (1.0 + 2.0 / rho).sqrt();
    let prefactor = (rho / (rho + 2.0)).sqrt();
    prefactor * alternating_sum(|u| 2.0 / (c + 2.0 * u as f64 + 1.0))
}

/// Information conveyed over the downlink phase, in bits: each of the `xi`
/// chirp streams carries the series rate over the selected subbands, repeated
/// every symbol of length `t_symbol` for `tau_dl` seconds.
pub fn rate_bits(per_rank_sinr: &[f64], xi: usize, t_symbol: f64, tau_dl: f64) -> f64 {
    let per_stream: f64 = per_rank_sinr.iter().map(|&r| rate_series_nats(r)).sum();
    tau_dl / t_symbol * xi as f64 * per_stream / std::f64::consts::LN_2
}

/// Downlink information (bits) conveyed by one realized design: the per-rank
/// demodulated SINRs feed the series rate for each of the `xi` chirp streams.
pub fn rate_eval(
    design: &TxDesign,
    est: &EstimateSet,
    truth: &[Vec<Complex64>],
    spec: &ChirpSpec,
    noise_var: f64,
    tau_dl: f64,
) -> f64 {
    let sinrs = demod_sinrs(design, est, truth, spec, noise_var);
    rate_bits(&sinrs, spec.xi, spec.symbol_time(), tau_dl)
}

/// End-to-end link parameters for Monte Carlo sweeps.
#[derive(Clone, Copy, Debug)]
pub struct WietLink {
    pub m_antennas: usize,
    pub n_subbands: usize,
    pub band_hz: f64,
    pub beta: f64,
    pub p_tx: f64,
    pub pilot_power: f64,
    pub pilot_len: f64,
    pub noise_var: f64,
    pub tau_dl: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct LinkStats {
    /// Mean harvest metric per unit time.
    pub harvest: f64,
    pub harvest_std_err: f64,
    /// Downlink information in bits from trial-averaged SINRs.
    pub rate_bits: f64,
}

/// Fading + estimation + design + evaluation over `n_trials` independent
/// channel draws. Trial `i` uses `stream.substream(i)`, so two calls with the
/// same parent stream see identical channels (paired comparisons).
pub fn link_mc(
    link: &WietLink,
    xi: usize,
    kind: WaveformKind,
    diode: &DiodeSeries,
    n_trials: usize,
    stream: &RngStream,
) -> Result<LinkStats> {
    let spec = ChirpSpec::new(link.n_subbands, xi, link.band_hz);
    let mut harvests = Vec::with_capacity(n_trials);
    let mut sinr_acc = vec![0.0f64; link.n_subbands / xi];
    for trial in 0..n_trials {
        let mut s = stream.substream(trial as u64);
        let truth: Vec<Vec<Complex64>> = (0..link.n_subbands)
            .map(|_| {
                s.complex_gaussian_vec(link.m_antennas)
                    .into_iter()
                    .map(|z| z * link.beta.sqrt())
                    .collect()
            })
            .collect();
        let est = mmse_estimate(
            &truth,
            link.beta,
            link.pilot_power,
            link.pilot_len,
            link.noise_var,
            &mut s,
        );
        let design = build_tx(&est, &spec, link.p_tx)?;
        harvests.push(harvest_eval(&design, &truth, &spec, kind, diode, 1, &mut s)?);
        for (acc, rho) in sinr_acc
            .iter_mut()
            .zip(demod_sinrs(&design, &est, &truth, &spec, link.noise_var))
        {
            *acc += rho;
        }
    }
    let n = n_trials as f64;
    let mean = harvests.iter().sum::<f64>() / n;
    let var = harvests.iter().map(|h| (h - mean) * (h - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    let mean_sinrs: Vec<f64> = sinr_acc.iter().map(|a| a / n).collect();
    Ok(LinkStats {
        harvest: mean,
        harvest_std_err: (var / n).sqrt(),
        rate_bits: rate_bits(&mean_sinrs, xi, spec.symbol_time(), link.tau_dl),
    })
}
