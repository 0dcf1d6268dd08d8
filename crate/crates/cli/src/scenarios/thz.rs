//! THz rate-power trade: optimal achievable rate and mutual information along
//! a harvest-floor sweep, plus the truncated-Gaussian baseline curve.

use wietsim_core::thz::{
    gaussian_baseline, mutual_information, optimal_input_pdf, optimal_rate, PsiCurve, ThzLink,
};

use super::{dbm_to_watts, RunContext, RunResult};

pub const KEYS: &[&str] = &[
    "thz.fc_ghz",
    "thz.gt_dbi",
    "thz.gr_dbi",
    "thz.d_m",
    "thz.sigma_n_dbm",
    "thz.a_volts",
    "thz.preq_sweep",
    "thz.psi_knee",
    "thz.psi_pmax",
    "thz.baseline_sigmas",
    "thz.quad",
];

pub fn run(ctx: &mut RunContext) -> RunResult {
    let cfg = ctx.cfg;
    let psi = PsiCurve::new(
        cfg.f64_or("thz.psi_knee", 3.9e-4)?,
        cfg.f64_or("thz.psi_pmax", 2e-4)?,
    );
    let base = ThzLink::los(
        cfg.f64_or("thz.fc_ghz", 300.0)? * 1e9,
        cfg.f64_or("thz.d_m", 0.3)?,
        cfg.f64_or("thz.gt_dbi", 30.0)?,
        cfg.f64_or("thz.gr_dbi", 10.0)?,
        dbm_to_watts(cfg.f64_or("thz.sigma_n_dbm", -50.0)?),
        cfg.f64_or("thz.a_volts", 1.0)?,
        0.0,
    );
    let n_quad = cfg.usize_or("thz.quad", 1200)?;
    let ratios = cfg.list_or(
        "thz.preq_sweep",
        &[0.05, 0.15, 0.25, 0.34, 0.45, 0.55, 0.65, 0.75, 0.85],
    )?;
    let csv = ctx.out.csv(
        "thz_tradeoff",
        &["preq_over_pmax", "preq_w", "j_star_nats", "mutual_info_nats"],
    );
    for &ratio in &ratios {
        let mut link = base;
        link.p_req = ratio * psi.p_max;
        let opt = optimal_rate(&link, &psi)?;
        let pdf = optimal_input_pdf(&link, &psi)?;
        let info = mutual_information(|s| pdf.at(s), &link, &psi, n_quad)?;
        csv.row(vec![ratio.into(), link.p_req.into(), opt.j_star.into(), info.into()]);
    }
    let sigmas = cfg.list_or(
        "thz.baseline_sigmas",
        &[0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0, 5.0],
    )?;
    let pairs = gaussian_baseline(&base, &psi, &sigmas, n_quad)?;
    let csv = ctx.out.csv("thz_baseline", &["sigma_s", "info_nats", "harvest_w"]);
    for (s, (info, harvest)) in sigmas.iter().zip(pairs) {
        csv.row(vec![(*s).into(), info.into(), harvest.into()]);
    }
    Ok(())
}
