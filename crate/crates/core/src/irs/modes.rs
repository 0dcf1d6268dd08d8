//! Self-sustainable surface operation: a battery-free reflecting surface and
//! a harvesting receiver share one downlink under time-switching or
//! power-splitting at either node.
//!
//! The slot model is a grid search over the schedule fractions with matched
//! transmission through the effective channel. For each transmit power the
//! search returns the best feasible gross harvest at the receiver and at the
//! surface, where feasible means: decode SINR above the floor, and both nodes
//! harvest at least what they consume (net-positive operation).

use num_complex::Complex64;

use crate::eh::{sigmoid_eh, SigmoidEh};
use crate::error::Result;
use crate::numerics::linalg::{vnorm, vnorm_sqr, CMatrix};
use crate::numerics::rng::RngStream;

use super::{cascade_matrix, effective_channel, IrsState};

/// The six operation modes: receiver first (TS or PS), then the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrsMode {
    /// Receiver TS; surface TS on the same split (harvest in the energy
    /// sub-slot, reflect in the information sub-slot).
    IA,
    /// Receiver TS; surface splits the energy sub-slot between harvesting and
    /// reflecting, and reflects through the information sub-slot.
    IB,
    /// Receiver TS; surface harvests through the energy sub-slot and splits
    /// the information sub-slot.
    IC,
    /// Receiver PS; surface TS.
    II,
    /// Receiver TS; surface PS.
    III,
    /// Receiver PS; surface PS.
    IV,
}

impl IrsMode {
    pub const ALL: [IrsMode; 6] =
        [IrsMode::IA, IrsMode::IB, IrsMode::IC, IrsMode::II, IrsMode::III, IrsMode::IV];

    pub fn label(&self) -> &'static str {
        match self {
            IrsMode::IA => "I.A",
            IrsMode::IB => "I.B",
            IrsMode::IC => "I.C",
            IrsMode::II => "II",
            IrsMode::III => "III",
            IrsMode::IV => "IV",
        }
    }
}

/// Schedule point: slot fractions, all strictly interior where applicable.
#[derive(Clone, Copy, Debug)]
pub struct ModeSchedule {
    pub mode: IrsMode,
    pub tau: f64,
    pub delta: f64,
    pub rho: f64,
}

/// One channel realization plus the energy bookkeeping constants.
#[derive(Clone, Debug)]
pub struct ModeScenario {
    /// Direct row channel `h_d^H` (length M).
    pub h_direct: Vec<Complex64>,
    /// Surface-to-receiver row `h_r^H` (length N_E).
    pub h_irs_rx: Vec<Complex64>,
    /// Transmitter-to-surface matrix (N_E x M).
    pub h_tx_irs: CMatrix,
    pub sigma2: f64,
    pub sigma_c2: f64,
    /// Harvesting law at the receiver (applied to its split/suballotted RF).
    pub eh_rx: SigmoidEh,
    /// Harvesting law per surface element.
    pub eh_irs: SigmoidEh,
    /// Power draw of one reflecting element, watts.
    pub irs_elem_power: f64,
    /// Power draw of the receiver while decoding, watts.
    pub rx_circuit_power: f64,
    /// Decode-SINR floor, linear.
    pub snr_min: f64,
    /// Schedule grid resolution (fractions at i/grid, i = 1..grid-1).
    pub grid: usize,
}

impl ModeScenario {
    /// Rician channels with the given mean gains; `rice_k` linear.
    #[allow(clippy::too_many_arguments)]
    pub fn sample(
        m: usize,
        n_elements: usize,
        beta_direct: f64,
        beta_tx_irs: f64,
        beta_irs_rx: f64,
        rice_k: f64,
        stream: &mut RngStream,
    ) -> Self {
        let draw = |beta: f64, s: &mut RngStream| -> Complex64 {
            let los = (beta * rice_k / (rice_k + 1.0)).sqrt();
            Complex64::new(los, 0.0) + (beta / (rice_k + 1.0)).sqrt() * s.complex_gaussian()
        };
        let h_direct = (0..m).map(|_| draw(beta_direct, stream)).collect();
        let h_irs_rx = (0..n_elements).map(|_| draw(beta_irs_rx, stream)).collect();
        let h_tx_irs = CMatrix::from_fn(n_elements, m, |_, _| draw(beta_tx_irs, stream));
        ModeScenario {
            h_direct,
            h_irs_rx,
            h_tx_irs,
            sigma2: 1e-10,  // -70 dBm
            sigma_c2: 1e-8, // -50 dBm
            eh_rx: SigmoidEh { psat: 0.02, a: 6400.0, b: 0.003 },
            eh_irs: SigmoidEh { psat: 0.02, a: 6400.0, b: 0.003 },
            irs_elem_power: 1.5e-3,
            rx_circuit_power: 3.98e-3, // 6 dBm
            snr_min: 100.0,            // 20 dB
            grid: 64,
        }
    }
}

/// Derived quantities for one realization: aligned surface phases and the
/// unit-power received/incident powers for each reflection amplitude.
struct Radio {
    /// `|h_eff(s)|^2` per unit transmit power, as a function of scale index.
    refl_gain: Vec<f64>,
    /// Per-element incident power (unit transmit power) when beaming through
    /// the effective channel at scale index.
    incident: Vec<Vec<f64>>,
    /// Direct-only beamforming gain and its incident powers.
    dir_gain: f64,
    dir_incident: Vec<f64>,
}

impl Radio {
    fn build(sc: &ModeScenario) -> Self {
        let ne = sc.h_tx_irs.rows;
        let cascade = cascade_matrix(&sc.h_irs_rx, &sc.h_tx_irs);
        // Align surface phases to the direct channel through MRT: alternate
        // between beam and per-element closed-form phase updates.
        let mut state = IrsState::zeros(ne);
        for _pass in 0..3 {
            let eff = effective_channel(&sc.h_direct, &cascade, &state).unwrap();
            let beam: Vec<Complex64> = {
                let n = vnorm(&eff).max(1e-300);
                eff.iter().map(|x| x.conj() / n).collect()
            };
            for n in 0..ne {
                let full: Complex64 = effective_channel(&sc.h_direct, &cascade, &state)
                    .unwrap()
                    .iter()
                    .zip(&beam)
                    .map(|(h, w)| h * w)
                    .sum();
                let tn: Complex64 = (0..sc.h_tx_irs.cols)
                    .map(|m| cascade[(n, m)] * beam[m])
                    .sum();
                let base = full - state.coeff(n) * tn;
                state.set_phase(n, -(tn * base.conj()).arg());
            }
        }
        // Tables over the reflection scale grid.
        let n_scales = sc.grid;
        let mut refl_gain = Vec::with_capacity(n_scales + 1);
        let mut incident = Vec::with_capacity(n_scales + 1);
        for i in 0..=n_scales {
            let delta = i as f64 / n_scales as f64;
            let s = (1.0 - delta).max(0.0).sqrt();
            let eff: Vec<Complex64> = {
                let mut e = sc.h_direct.clone();
                for n in 0..ne {
                    let c = state.coeff(n) * s;
                    for (j, ej) in e.iter_mut().enumerate() {
                        *ej += c * cascade[(n, j)];
                    }
                }
                e
            };
            let gain = vnorm_sqr(&eff);
            let beam: Vec<Complex64> = {
                let n = vnorm(&eff).max(1e-300);
                eff.iter().map(|x| x.conj() / n).collect()
            };
            let inc: Vec<f64> = (0..ne)
                .map(|n| {
                    let amp: Complex64 = (0..sc.h_tx_irs.cols)
                        .map(|m| sc.h_tx_irs[(n, m)] * beam[m])
                        .sum();
                    amp.norm_sqr()
                })
                .collect();
            refl_gain.push(gain);
            incident.push(inc);
        }
        let dir_gain = vnorm_sqr(&sc.h_direct);
        let dir_beam: Vec<Complex64> = {
            let n = vnorm(&sc.h_direct).max(1e-300);
            sc.h_direct.iter().map(|x| x.conj() / n).collect()
        };
        let dir_incident: Vec<f64> = (0..ne)
            .map(|n| {
                let amp: Complex64 = (0..sc.h_tx_irs.cols)
                    .map(|m| sc.h_tx_irs[(n, m)] * dir_beam[m])
                    .sum();
                amp.norm_sqr()
            })
            .collect();
        Radio { refl_gain, incident, dir_gain, dir_incident }
    }
}

/// Gross/net figures at one schedule point.
#[derive(Clone, Copy, Debug)]
struct Point {
    snr: f64,
    rx_gross: f64,
    rx_net: f64,
    irs_gross: f64,
    irs_net: f64,
}

fn irs_harvest_sum(sc: &ModeScenario, incident: &[f64], p: f64, split: f64) -> f64 {
    incident
        .iter()
        .map(|&inc| sigmoid_eh(split * p * inc, &sc.eh_irs))
        .sum()
}

fn schedule_point(sc: &ModeScenario, radio: &Radio, p: f64, sched: &ModeSchedule) -> Point {
    let ne = radio.dir_incident.len() as f64;
    let (tau, delta, rho) = (sched.tau, sched.delta, sched.rho);
    // Index into the scale tables for PS-surface modes.
    let d_idx = ((delta * sc.grid as f64).round() as usize).min(sc.grid);
    match sched.mode {
        IrsMode::IA | IrsMode::IC => {
            // Energy sub-slot (1 - tau): surface harvesting, direct-only beam.
            // Information sub-slot tau: full reflection (I.C reflects only a
            // delta part but with the same decode SINR).
            let snr = p * radio.refl_gain[0] / (sc.sigma2 + sc.sigma_c2);
            let rx_gross = (1.0 - tau) * sigmoid_eh(p * radio.dir_gain, &sc.eh_rx);
            let reflect_time = match sched.mode {
                IrsMode::IA => tau,
                _ => delta * tau,
            };
            let harvest_time = match sched.mode {
                IrsMode::IA => 1.0 - tau,
                _ => (1.0 - tau) + (1.0 - delta) * tau,
            };
            let irs_gross = harvest_time * irs_harvest_sum(sc, &radio.dir_incident, p, 1.0);
            Point {
                snr,
                rx_gross,
                rx_net: rx_gross - tau * sc.rx_circuit_power,
                irs_gross,
                irs_net: irs_gross - reflect_time * ne * sc.irs_elem_power,
            }
        }
        IrsMode::IB => {
            // Surface reflects during a delta share of the energy sub-slot.
            let snr = p * radio.refl_gain[0] / (sc.sigma2 + sc.sigma_c2);
            let rx_gross = (1.0 - tau)
                * ((1.0 - delta) * sigmoid_eh(p * radio.dir_gain, &sc.eh_rx)
                    + delta * sigmoid_eh(p * radio.refl_gain[0], &sc.eh_rx));
            let irs_gross =
                (1.0 - tau) * (1.0 - delta) * irs_harvest_sum(sc, &radio.dir_incident, p, 1.0);
            let reflect_time = (1.0 - tau) * delta + tau;
            Point {
                snr,
                rx_gross,
                rx_net: rx_gross - tau * sc.rx_circuit_power,
                irs_gross,
                irs_net: irs_gross - reflect_time * ne * sc.irs_elem_power,
            }
        }
        IrsMode::II => {
            // Receiver PS all slot; surface TS with fraction tau reflecting.
            let snr = rho * p * radio.refl_gain[0] / (rho * sc.sigma2 + sc.sigma_c2);
            let rx_gross = (1.0 - tau)
                * sigmoid_eh((1.0 - rho) * p * radio.dir_gain, &sc.eh_rx)
                + tau * sigmoid_eh((1.0 - rho) * p * radio.refl_gain[0], &sc.eh_rx);
            let irs_gross =
                (1.0 - tau) * irs_harvest_sum(sc, &radio.dir_incident, p, 1.0);
            Point {
                snr,
                rx_gross,
                rx_net: rx_gross - sc.rx_circuit_power,
                irs_gross,
                irs_net: irs_gross - tau * ne * sc.irs_elem_power,
            }
        }
        IrsMode::III => {
            // Receiver TS; surface splits power all slot (scale sqrt(1-delta)).
            let gain = radio.refl_gain[d_idx];
            let snr = p * gain / (sc.sigma2 + sc.sigma_c2);
            let rx_gross = (1.0 - tau) * sigmoid_eh(p * gain, &sc.eh_rx);
            let irs_gross = irs_harvest_sum(sc, &radio.incident[d_idx], p, delta);
            Point {
                snr,
                rx_gross,
                rx_net: rx_gross - tau * sc.rx_circuit_power,
                irs_gross,
                irs_net: irs_gross - ne * sc.irs_elem_power,
            }
        }
        IrsMode::IV => {
            let gain = radio.refl_gain[d_idx];
            let snr = rho * p * gain / (rho * sc.sigma2 + sc.sigma_c2);
            let rx_gross = sigmoid_eh((1.0 - rho) * p * gain, &sc.eh_rx);
            let irs_gross = irs_harvest_sum(sc, &radio.incident[d_idx], p, delta);
            Point {
                snr,
                rx_gross,
                rx_net: rx_gross - sc.rx_circuit_power,
                irs_gross,
                irs_net: irs_gross - ne * sc.irs_elem_power,
            }
        }
    }
}

/// Best feasible gross harvests per transmit power, for one mode.
#[derive(Clone, Debug)]
pub struct ModeCurves {
    pub mode: IrsMode,
    pub p_grid: Vec<f64>,
    /// Max gross receiver harvest among feasible schedules (None: infeasible).
    pub rx_harvest: Vec<Option<f64>>,
    /// Max gross surface harvest among feasible schedules.
    pub irs_harvest: Vec<Option<f64>>,
    /// Decode SINR at the rx-optimal schedule.
    pub snr: Vec<Option<f64>>,
    /// Schedule achieving the rx optimum.
    pub best_schedule: Vec<Option<ModeSchedule>>,
}

fn fractions(grid: usize) -> Vec<f64> {
    (1..grid).map(|i| i as f64 / grid as f64).collect()
}

/// Grid search over the mode's schedule fractions at each transmit power.
pub fn mode_sim(sc: &ModeScenario, mode: IrsMode, p_grid: &[f64]) -> Result<ModeCurves> {
    let radio = Radio::build(sc);
    let fr = fractions(sc.grid);
    let one = [f64::NAN]; // placeholder for unused fractions
    let mut rx_best = Vec::with_capacity(p_grid.len());
    let mut irs_best = Vec::with_capacity(p_grid.len());
    let mut snr_at = Vec::with_capacity(p_grid.len());
    let mut sched_at = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let mut best_rx: Option<(f64, f64, ModeSchedule)> = None;
        let mut best_irs: Option<f64> = None;
        let (taus, deltas, rhos): (&[f64], &[f64], &[f64]) = match mode {
            IrsMode::IA => (&fr, &one, &one),
            IrsMode::IB | IrsMode::IC => (&fr, &fr, &one),
            IrsMode::II => (&fr, &one, &fr),
            IrsMode::III => (&fr, &fr, &one),
            IrsMode::IV => (&one, &fr, &fr),
        };
        for &tau in taus {
            for &delta in deltas {
                for &rho in rhos {
                    let sched = ModeSchedule { mode, tau, delta, rho };
                    let pt = schedule_point(sc, &radio, p, &sched);
                    let feasible =
                        pt.snr >= sc.snr_min && pt.rx_net >= 0.0 && pt.irs_net >= 0.0;
                    if !feasible {
                        continue;
                    }
                    if best_rx.as_ref().map(|(v, _, _)| pt.rx_gross > *v).unwrap_or(true) {
                        best_rx = Some((pt.rx_gross, pt.snr, sched));
                    }
                    if best_irs.map(|v| pt.irs_gross > v).unwrap_or(true) {
                        best_irs = Some(pt.irs_gross);
                    }
                }
            }
        }
        rx_best.push(best_rx.as_ref().map(|(v, _, _)| *v));
        snr_at.push(best_rx.as_ref().map(|(_, s, _)| *s));
        sched_at.push(best_rx.map(|(_, _, s)| s));
        irs_best.push(best_irs);
    }
    Ok(ModeCurves {
        mode,
        p_grid: p_grid.to_vec(),
        rx_harvest: rx_best,
        irs_harvest: irs_best,
        snr: snr_at,
        best_schedule: sched_at,
    })
}
