//! Superimposed-chirp transmission: harvested energy versus antenna count
//! against the multisine baseline, and the energy/rate trade across the
//! superposition count.

use wietsim_core::eh::DiodeSeries;
use wietsim_core::waveform::{link_mc, WaveformKind, WietLink};
use wietsim_core::RngStream;

use super::{RunContext, RunResult};

pub const KEYS: &[&str] = &[
    "waveform.n",
    "waveform.xi",
    "waveform.band_hz",
    "waveform.ptx",
    "waveform.beta",
    "waveform.pilot_mw",
    "waveform.tau_dl",
    "waveform.trials",
    "waveform.m_sweep",
    "waveform.m",
    "waveform.xi_sweep",
    "channel.noise_dbm",
    "pilot.len",
    "eh.is",
    "eh.delta",
    "eh.vt",
    "eh.rant",
];

fn link(ctx: &RunContext, m_antennas: usize) -> Result<WietLink, crate::config::ConfigError> {
    let cfg = ctx.cfg;
    Ok(WietLink {
        m_antennas,
        n_subbands: cfg.usize_or("waveform.n", 16)?,
        band_hz: cfg.f64_or("waveform.band_hz", 200e3)?,
        beta: cfg.f64_or("waveform.beta", 5e-4)?,
        p_tx: cfg.f64_or("waveform.ptx", 1.0)?,
        pilot_power: cfg.f64_or("waveform.pilot_mw", 0.1)? * 1e-3,
        pilot_len: cfg.f64_or("pilot.len", 16.0)?,
        noise_var: super::dbm_to_watts(cfg.f64_or("channel.noise_dbm", -170.0)?),
        tau_dl: cfg.f64_or("waveform.tau_dl", 1e-2)?,
    })
}

fn diode(ctx: &RunContext) -> Result<DiodeSeries, crate::config::ConfigError> {
    let cfg = ctx.cfg;
    Ok(DiodeSeries::new(
        cfg.f64_or("eh.is", 0.6e-3)?,
        cfg.f64_or("eh.delta", 1.0)?,
        cfg.f64_or("eh.vt", 25e-3)?,
        cfg.f64_or("eh.rant", 1.0)?,
    ))
}

/// Harvest versus antenna count for the superimposed chirp and the multisine.
pub fn run_harvest(ctx: &mut RunContext) -> RunResult {
    let m_sweep = ctx.cfg.list_or("waveform.m_sweep", &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0])?;
    let xi = ctx.cfg.usize_or("waveform.xi", 2)?;
    let trials = ctx.cfg.usize_or("waveform.trials", 2000)?;
    let d = diode(ctx)?;
    let mut rows = Vec::new();
    for &m in &m_sweep {
        let link = link(ctx, m as usize)?;
        let parent = RngStream::new(ctx.seed, m as u64);
        let chirp = link_mc(&link, xi, WaveformKind::Chirp, &d, trials, &parent)?;
        let ms = link_mc(&link, 1, WaveformKind::Multisine, &d, trials, &parent)?;
        rows.push((m as usize, chirp.harvest, ms.harvest, chirp.rate_bits));
    }
    let csv = ctx.out.csv(
        "chirp_harvest",
        &["m_antennas", "harvest_chirp", "harvest_multisine", "rate_bits"],
    );
    for (m, hc, hm, r) in rows {
        csv.row(vec![m.into(), hc.into(), hm.into(), r.into()]);
    }
    Ok(())
}

/// Energy and information per superposition count at fixed antenna count.
pub fn run_rate_energy(ctx: &mut RunContext) -> RunResult {
    let m = ctx.cfg.usize_or("waveform.m", 10)?;
    let xi_sweep = ctx.cfg.list_or("waveform.xi_sweep", &[1.0, 2.0, 4.0])?;
    let trials = ctx.cfg.usize_or("waveform.trials", 2000)?;
    let d = diode(ctx)?;
    let link = link(ctx, m)?;
    let parent = RngStream::new(ctx.seed, 0);
    let mut rows = Vec::new();
    for &xi in &xi_sweep {
        let stats = link_mc(&link, xi as usize, WaveformKind::Chirp, &d, trials, &parent)?;
        rows.push((xi as usize, stats.harvest, stats.rate_bits));
    }
    let csv = ctx.out.csv("rate_energy", &["xi", "harvest", "rate_bits"]);
    for (xi, h, r) in rows {
        csv.row(vec![xi.into(), h.into(), r.into()]);
    }
    Ok(())
}
