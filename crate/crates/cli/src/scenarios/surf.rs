//! Reflecting-surface scenarios: hybrid min-power sweeps, self-sustainable
//! operation modes, and the power-feedback beam algorithms.

use num_complex::Complex64;
use wietsim_core::channel::LosLink;
use wietsim_core::irs::feedback::BeamSharingNodes;
use wietsim_core::irs::{
    beam_sharing, mode_sim, mtbs_scan, multi_focus, solve_hp_pb_ps, FocusTechnique,
    HybridProblem, IrsEnv, IrsMode, IrsState, ModeScenario,
};
use wietsim_core::numerics::linalg::CMatrix;
use wietsim_core::RngStream;

use super::{dbm_to_watts, RunContext, RunResult};

pub const KEYS: &[&str] = &[
    "irs.ne",
    "irs.ne_sweep",
    "irs.bits",
    "irs.tile",
    "irs.chains",
    "irs.gamma_db_sweep",
    "irs.realizations",
    "irs.qk_dbm",
    "irs.ptx_sweep",
    "irs.envs",
    "irs.sweeps",
    "irs.direct_gain_db",
    "bsa.threshold_db",
    "mf.alpha",
];

/// Transmit sum power against element count and SINR floor, for optimized,
/// random, and absent surface phases.
pub fn run_hp(ctx: &mut RunContext) -> RunResult {
    let cfg = ctx.cfg;
    let ne_sweep = cfg.list_or("irs.ne_sweep", &[64.0, 128.0, 256.0])?;
    let gammas_db = cfg.list_or("irs.gamma_db_sweep", &[0.0, 5.0])?;
    let chains = cfg.usize_or("irs.chains", 6)?;
    let realizations = cfg.usize_or("irs.realizations", 10)?;
    let q_k = dbm_to_watts(cfg.f64_or("irs.qk_dbm", -15.0)?);
    let m = 24;
    let mut rows = Vec::new();
    for &gamma_db in &gammas_db {
        let gamma = 10f64.powf(gamma_db / 10.0);
        for &ne_f in &ne_sweep {
            let ne = ne_f as usize;
            let mut acc = [0.0f64; 3];
            for r in 0..realizations {
                let mut stream = RngStream::new(ctx.seed.wrapping_add(r as u64), ne as u64);
                let bd = 1e-5f64;
                let bc = 1e-3f64;
                let p = HybridProblem {
                    h_direct: (0..2)
                        .map(|_| {
                            stream
                                .complex_gaussian_vec(m)
                                .into_iter()
                                .map(|z| z * bd.sqrt())
                                .collect()
                        })
                        .collect(),
                    h_irs_rx: (0..2)
                        .map(|_| {
                            stream
                                .complex_gaussian_vec(ne)
                                .into_iter()
                                .map(|z| z * bc.sqrt())
                                .collect()
                        })
                        .collect(),
                    h_tx_irs: CMatrix::from_fn(ne, m, |_, _| {
                        stream.complex_gaussian() * bc.sqrt()
                    }),
                    l_chains: chains,
                    sinr_min: vec![gamma; 2],
                    e_min: vec![q_k; 2],
                    sigma2: 1e-10,
                    sigma_c2: 1e-8,
                    p_max: 1e6,
                };
                let opt = solve_hp_pb_ps(&p, &IrsState::zeros(ne), true, 5)?;
                let rnd_state = IrsState::random(ne, None, &mut stream);
                let rnd = solve_hp_pb_ps(&p, &rnd_state, false, 1)?;
                let off = HybridProblem {
                    h_tx_irs: CMatrix::zeros(0, m),
                    h_irs_rx: vec![vec![]; 2],
                    ..p
                };
                let no = solve_hp_pb_ps(&off, &IrsState::zeros(0), false, 1)?;
                acc[0] += opt.p_sum;
                acc[1] += rnd.p_sum;
                acc[2] += no.p_sum;
            }
            let n = realizations as f64;
            rows.push((gamma_db, chains, ne, acc[0] / n, acc[1] / n, acc[2] / n));
        }
    }
    let csv = ctx.out.csv(
        "hp_irs",
        &["gamma_db", "l_chains", "ne", "psum_opt", "psum_random", "psum_noirs"],
    );
    for (g, l, ne, a, b, c) in rows {
        csv.row(vec![g.into(), l.into(), ne.into(), a.into(), b.into(), c.into()]);
    }
    Ok(())
}

/// Receiver and surface harvest curves per operation mode.
pub fn run_modes(ctx: &mut RunContext) -> RunResult {
    let cfg = ctx.cfg;
    let p_grid = cfg.list_or("irs.ptx_sweep", &[5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0])?;
    let ne = cfg.usize_or("irs.ne", 64)?;
    let mut stream = RngStream::new(ctx.seed, 0);
    let sc = ModeScenario::sample(8, ne, 1e-5, 1e-3, 2e-3, 10f64.powf(0.5), &mut stream);
    let csv = ctx.out.csv(
        "modes",
        &["ptx_w", "mode", "rx_harvest_w", "irs_harvest_w", "snr"],
    );
    for mode in IrsMode::ALL {
        let curves = mode_sim(&sc, mode, &p_grid)?;
        for (i, &p) in p_grid.iter().enumerate() {
            if let (Some(rx), Some(irs)) = (curves.rx_harvest[i], curves.irs_harvest[i]) {
                let snr = curves.snr[i].unwrap_or(0.0);
                csv.row(vec![
                    p.into(),
                    mode.label().into(),
                    rx.into(),
                    irs.into(),
                    snr.into(),
                ]);
            }
        }
    }
    Ok(())
}

fn surface_env(ctx: &RunContext) -> Result<IrsEnv, crate::config::ConfigError> {
    let direct_db = ctx.cfg.f64_or("irs.direct_gain_db", -20.0)?;
    Ok(IrsEnv::planar(16, 16, 0.025, LosLink { c: 1e-2, lambda: 0.05 })
        .with_direct_gain(10f64.powf(direct_db / 10.0)))
}

/// Multi-tile scan trace on one simulated environment.
pub fn run_mtbs(ctx: &mut RunContext) -> RunResult {
    let env = surface_env(ctx)?;
    let tile = ctx.cfg.usize_or("irs.tile", 4)?;
    let sweeps = ctx.cfg.usize_or("irs.sweeps", 3)?;
    let bits = ctx.cfg.u64_or("irs.bits", 1)? as u32;
    let mut stream = RngStream::new(ctx.seed, 0);
    let tx = [-1.5, 2.5, 0.0];
    let rx = [1.2, 1.2, 0.1];
    let focals: Vec<[f64; 3]> = (0..8)
        .map(|_| {
            [
                stream.uniform_in(-1.5, 1.5),
                stream.uniform_in(0.5, 3.0),
                stream.uniform_in(-0.5, 0.5),
            ]
        })
        .chain(std::iter::once(rx))
        .collect();
    let init = IrsState::random(env.n_elements(), Some(bits), &mut stream);
    let out = mtbs_scan(&env, tx, rx, true, (tile, tile), &focals, &init, sweeps)?;
    let csv = ctx.out.csv("mtbs_trace", &["step", "rx_power"]);
    for (i, &p) in out.trace.iter().enumerate() {
        csv.row(vec![i.into(), p.into()]);
    }
    Ok(())
}

/// Received power at two targets for each multi-focus technique and weight.
pub fn run_multifocus(ctx: &mut RunContext) -> RunResult {
    let env = surface_env(ctx)?;
    let bits = ctx.cfg.u64_or("irs.bits", 1)? as u32;
    let alphas = ctx.cfg.list_or("mf.alpha", &[0.2, 0.35, 0.5, 0.65, 0.8])?;
    let tx = [0.0, 2.5, 0.0];
    let t1 = [0.9, 1.4, 0.0];
    let t2 = [-0.9, 1.4, 0.0];
    let mut stream = RngStream::new(ctx.seed, 0);
    let csv = ctx.out.csv("multifocus", &["technique", "alpha1", "p_er1", "p_er2"]);
    for (name, technique) in [
        ("pa", FocusTechnique::PatternAddition),
        ("rui", FocusTechnique::RandomInterleaving),
        ("itd", FocusTechnique::TileDivision),
    ] {
        for &a in &alphas {
            let state = multi_focus(
                &env,
                tx,
                &[t1, t2],
                &[a, 1.0 - a],
                technique,
                Some(bits),
                &mut stream,
            )?;
            let p1 = env.received_power(tx, t1, &state, true);
            let p2 = env.received_power(tx, t2, &state, true);
            csv.row(vec![name.into(), a.into(), p1.into(), p2.into()]);
        }
    }
    Ok(())
}

/// Beam-sharing trace: leakage suppression while both delivery targets grow.
pub fn run_bsa(ctx: &mut RunContext) -> RunResult {
    let env = surface_env(ctx)?;
    let sweeps = ctx.cfg.usize_or("irs.sweeps", 3)?;
    let nodes = BeamSharingNodes {
        dtx: [-1.0, 2.5, 0.0],
        ptx: [-1.25, 1.8, -0.3],
        du: [0.25, 4.0, 0.0],
        pu: [1.0, 1.8, -0.3],
        sigma2: 1e-13,
    };
    // Mixed-focus start: equal-weight pattern addition over both link pairs.
    let ne = env.n_elements();
    let mut pa = IrsState { phases: vec![0.0; ne], bits: Some(1) };
    for n in 0..ne {
        let zd = Complex64::from_polar(1.0, env.focus_phase(nodes.dtx, n, nodes.du));
        let zp = Complex64::from_polar(1.0, env.focus_phase(nodes.ptx, n, nodes.pu));
        pa.set_phase(n, (zd + zp).arg());
    }
    let pa_leak = env.received_power(nodes.ptx, nodes.du, &pa, true);
    let threshold = pa_leak * 10f64.powf(ctx.cfg.f64_or("bsa.threshold_db", -13.0)? / 10.0);
    let out = beam_sharing(&env, &nodes, threshold, (1.0, 1.0), (8, 8), &pa, 8, sweeps)?;
    let csv = ctx.out.csv("bsa_trace", &["step", "leakage", "dtx_du", "ptx_pu"]);
    for (i, &(l, d, p)) in out.trace.iter().enumerate() {
        csv.row(vec![i.into(), l.into(), d.into(), p.into()]);
    }
    let summary = ctx.out.csv(
        "bsa_summary",
        &["leakage", "dtx_du", "ptx_pu", "du_sinr", "feasible"],
    );
    summary.row(vec![
        out.leakage.into(),
        out.dtx_du.into(),
        out.ptx_pu.into(),
        out.du_sinr.into(),
        usize::from(out.feasible).into(),
    ]);
    Ok(())
}
