//! Fluid reconfigurable-antenna SWIPT: a liquid element slides along a
//! holder, selecting one position in a spatially correlated field. Selection
//! may chase the rate or the received energy; conventional selection-combining
//! arrays are the baseline.

use num_complex::Complex64;

use crate::channel::CorrelatedField;
use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;

/// Holder geometry and the per-position channel statistics.
#[derive(Clone, Debug)]
pub struct FluidSpec {
    /// Holder length, meters.
    pub length: f64,
    /// Carrier wavelength, meters.
    pub lambda: f64,
    /// Grid spacing as a fraction of lambda (positions at lambda/divisor).
    pub spacing_divisor: f64,
    /// Mean power of the desired channel.
    pub beta0: f64,
    /// Mean power of each interferer channel.
    pub beta_i: f64,
    pub n_interferers: usize,
}

impl FluidSpec {
    pub fn n_points(&self) -> usize {
        let spacing = self.lambda / self.spacing_divisor;
        (self.length / spacing).round() as usize + 1
    }

    pub fn spacing(&self) -> f64 {
        self.lambda / self.spacing_divisor
    }
}

/// Correlated-field sampler for the desired and interfering channels.
pub struct FluidField {
    pub spec: FluidSpec,
    field: CorrelatedField,
}

/// One channel realization over the holder positions.
#[derive(Clone, Debug)]
pub struct FieldRealization {
    /// Desired channel per position.
    pub g: Vec<Complex64>,
    /// Interferer channels, one vector per interferer.
    pub h: Vec<Vec<Complex64>>,
}

impl FluidField {
    pub fn new(spec: FluidSpec) -> Result<Self> {
        if spec.n_points() < 1 {
            return Err(Error::Invalid("holder needs at least one position".into()));
        }
        let field = CorrelatedField::new(spec.n_points(), spec.spacing(), spec.lambda)?;
        Ok(FluidField { spec, field })
    }

    pub fn clipped_mass(&self) -> f64 {
        self.field.clipped_mass
    }

    pub fn sample(&self, stream: &mut RngStream) -> FieldRealization {
        let scale0 = self.spec.beta0.sqrt();
        let scale_i = self.spec.beta_i.sqrt();
        let g = self
            .field
            .sample(stream)
            .into_iter()
            .map(|z| z * scale0)
            .collect();
        let h = (0..self.spec.n_interferers)
            .map(|_| {
                self.field
                    .sample(stream)
                    .into_iter()
                    .map(|z| z * scale_i)
                    .collect()
            })
            .collect();
        FieldRealization { g, h }
    }
}

/// Receiver-side parameters for the power-splitting metrics.
#[derive(Clone, Copy, Debug)]
pub struct FluidRx {
    pub p_tx: f64,
    /// Fraction of the received power routed to decoding.
    pub rho: f64,
    pub sigma2: f64,
    pub sigma_c2: f64,
    /// Diode coefficients for the two-term harvest metric.
    pub k2: f64,
    pub k4: f64,
    pub r_ant: f64,
}

/// Metrics at one holder position.
#[derive(Clone, Copy, Debug)]
pub struct PositionMetrics {
    pub sinr: f64,
    pub rate: f64,
    /// Mean received signal power E|y|^2 (signal + interference + noise).
    pub mean_power: f64,
    /// Two-term harvest metric with the (1 - rho) split applied.
    pub harvest: f64,
}

/// SINR, rate and harvest at position `v`:
/// `S = rho P |g|^2 / (rho (s2 + I) + sC2)`, `R = log2(1 + S)`, and the
/// harvest from the symbol-averaged moments `E|y|^2`, `E|y|^4 = 2 (E|y|^2)^2`
/// (circular Gaussian symbols and noise).
pub fn position_metrics(real: &FieldRealization, v: usize, rx: &FluidRx) -> Result<PositionMetrics> {
    if v >= real.g.len() {
        return Err(Error::Invalid(format!("position {v} out of range")));
    }
    let sig = rx.p_tx * real.g[v].norm_sqr();
    let interference: f64 = real.h.iter().map(|h| rx.p_tx * h[v].norm_sqr()).sum();
    let sinr = rx.rho * sig / (rx.rho * (rx.sigma2 + interference) + rx.sigma_c2);
    let mean_power = sig + interference + rx.sigma2;
    let m2 = (1.0 - rx.rho) * mean_power;
    let m4 = 2.0 * m2 * m2;
    let harvest = rx.k2 * rx.r_ant * m2 + rx.k4 * rx.r_ant * rx.r_ant * m4;
    Ok(PositionMetrics { sinr, rate: (1.0 + sinr).log2(), mean_power, harvest })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionRule {
    MaxRate,
    MaxEnergy,
}

/// Index of the best position under the rule, ties to the lowest index.
pub fn select_position(real: &FieldRealization, rule: SelectionRule, rx: &FluidRx) -> usize {
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for v in 0..real.g.len() {
        let m = position_metrics(real, v, rx).expect("index in range");
        let val = match rule {
            SelectionRule::MaxRate => m.sinr,
            SelectionRule::MaxEnergy => m.mean_power,
        };
        if val > best_val {
            best_val = val;
            best = v;
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
pub struct OutageEstimate {
    pub probability: f64,
    /// 95% binomial half-width.
    pub half_width: f64,
    pub trials: usize,
}

/// Monte Carlo outage of the rate-selected position: `P{R* < theta}`.
pub fn outage_mc(
    field: &FluidField,
    rx: &FluidRx,
    theta_bits: f64,
    n_trials: usize,
    stream: &RngStream,
) -> Result<OutageEstimate> {
    if theta_bits < 0.0 {
        return Err(Error::Invalid("theta must be nonnegative".into()));
    }
    let mut outages = 0usize;
    for trial in 0..n_trials {
        let mut s = stream.substream(trial as u64);
        let real = field.sample(&mut s);
        let v = select_position(&real, SelectionRule::MaxRate, rx);
        let m = position_metrics(&real, v, rx)?;
        if m.rate < theta_bits {
            outages += 1;
        }
    }
    let p = outages as f64 / n_trials as f64;
    Ok(OutageEstimate {
        probability: p,
        half_width: 1.96 * (p * (1.0 - p) / n_trials as f64).sqrt(),
        trials: n_trials,
    })
}

/// Monte Carlo statistics for either rule: outage of the selected position
/// and its mean harvest.
pub fn selection_mc(
    field: &FluidField,
    rx: &FluidRx,
    rule: SelectionRule,
    theta_bits: f64,
    n_trials: usize,
    stream: &RngStream,
) -> Result<(OutageEstimate, f64)> {
    let mut outages = 0usize;
    let mut harvest_acc = 0.0;
    for trial in 0..n_trials {
        let mut s = stream.substream(trial as u64);
        let real = field.sample(&mut s);
        let v = select_position(&real, rule, rx);
        let m = position_metrics(&real, v, rx)?;
        if m.rate < theta_bits {
            outages += 1;
        }
        harvest_acc += m.harvest;
    }
    let p = outages as f64 / n_trials as f64;
    Ok((
        OutageEstimate {
            probability: p,
            half_width: 1.96 * (p * (1.0 - p) / n_trials as f64).sqrt(),
            trials: n_trials,
        },
        harvest_acc / n_trials as f64,
    ))
}

/// Conventional-antenna baseline: selection combining over `m` mutually
/// independent draws under the same rule and statistics.
pub fn ca_baseline(
    m_antennas: usize,
    rule: SelectionRule,
    spec: &FluidSpec,
    rx: &FluidRx,
    theta_bits: f64,
    n_trials: usize,
    stream: &RngStream,
) -> Result<(OutageEstimate, f64)> {
    if m_antennas == 0 {
        return Err(Error::Invalid("need at least one antenna".into()));
    }
    let mut outages = 0usize;
    let mut harvest_acc = 0.0;
    for trial in 0..n_trials {
        let mut s = stream.substream(trial as u64);
        // Independent channels per antenna: a degenerate one-point field.
        let g: Vec<Complex64> = (0..m_antennas)
            .map(|_| s.complex_gaussian() * spec.beta0.sqrt())
            .collect();
        let h: Vec<Vec<Complex64>> = (0..spec.n_interferers)
            .map(|_| {
                (0..m_antennas)
                    .map(|_| s.complex_gaussian() * spec.beta_i.sqrt())
                    .collect()
            })
            .collect();
        let real = FieldRealization { g, h };
        let v = select_position(&real, rule, rx);
        let m = position_metrics(&real, v, rx)?;
        if m.rate < theta_bits {
            outages += 1;
        }
        harvest_acc += m.harvest;
    }
    let p = outages as f64 / n_trials as f64;
    Ok((
        OutageEstimate {
            probability: p,
            half_width: 1.96 * (p * (1.0 - p) / n_trials as f64).sqrt(),
            trials: n_trials,
        },
        harvest_acc / n_trials as f64,
    ))
}

/// Fraction of realizations where the two rules pick different positions.
pub fn rule_divergence_mc(
    field: &FluidField,
    rx: &FluidRx,
    n_trials: usize,
    stream: &RngStream,
) -> f64 {
    let mut diff = 0usize;
    for trial in 0..n_trials {
        let mut s = stream.substream(trial as u64);
        let real = field.sample(&mut s);
        if select_position(&real, SelectionRule::MaxRate, rx)
            != select_position(&real, SelectionRule::MaxEnergy, rx)
        {
            diff += 1;
        }
    }
    diff as f64 / n_trials as f64
}
