//! Fluid-antenna selection against conventional arrays: outage and harvest
//! under both priorities across transmit power.

use wietsim_core::fluid::{
    ca_baseline, selection_mc, FluidField, FluidRx, FluidSpec, SelectionRule,
};
use wietsim_core::RngStream;

use super::{dbm_to_watts, RunContext, RunResult};

pub const KEYS: &[&str] = &[
    "fra.v_cm",
    "fra.v2_cm",
    "fra.lambda_cm",
    "fra.ni",
    "fra.rho",
    "fra.theta_db",
    "fra.k2",
    "fra.k4",
    "fra.rant",
    "fra.trials",
    "fra.ptx_dbm_sweep",
    "fra.ca_small",
    "fra.ca_large",
];

pub fn run(ctx: &mut RunContext) -> RunResult {
    let cfg = ctx.cfg;
    let spec = |cm: f64| -> Result<FluidSpec, crate::config::ConfigError> {
        Ok(FluidSpec {
            length: cm * 1e-2,
            lambda: cfg.f64_or("fra.lambda_cm", 1.0)? * 1e-2,
            spacing_divisor: 20.0,
            beta0: 1.0,
            beta_i: 1.0,
            n_interferers: cfg.usize_or("fra.ni", 2)?,
        })
    };
    let small_cm = cfg.f64_or("fra.v_cm", 3.0)?;
    let large_cm = cfg.f64_or("fra.v2_cm", 5.0)?;
    let ca_small = cfg.usize_or("fra.ca_small", 5)?;
    let ca_large = cfg.usize_or("fra.ca_large", 10)?;
    let trials = cfg.usize_or("fra.trials", 4000)?;
    let theta = 10f64.powf(cfg.f64_or("fra.theta_db", 0.0)? / 10.0).log2();
    let sweep = cfg.list_or("fra.ptx_dbm_sweep", &[-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0])?;
    let rx = |p_dbm: f64| -> Result<FluidRx, crate::config::ConfigError> {
        Ok(FluidRx {
            p_tx: dbm_to_watts(p_dbm),
            rho: cfg.f64_or("fra.rho", 0.5)?,
            sigma2: 1e-20,
            sigma_c2: 1e-5,
            k2: cfg.f64_or("fra.k2", 0.0034)?,
            k4: cfg.f64_or("fra.k4", 0.3829)?,
            r_ant: cfg.f64_or("fra.rant", 50.0)?,
        })
    };
    let ra_small = FluidField::new(spec(small_cm)?)?;
    let ra_large = FluidField::new(spec(large_cm)?)?;
    let stream = RngStream::new(ctx.seed, 0);

    for (file, rule) in [
        ("id_priority", SelectionRule::MaxRate),
        ("eh_priority", SelectionRule::MaxEnergy),
    ] {
        let mut rows = Vec::new();
        for &p_dbm in &sweep {
            let r = rx(p_dbm)?;
            let (o_s, h_s) = selection_mc(&ra_small, &r, rule, theta, trials, &stream)?;
            let (o_l, h_l) = selection_mc(&ra_large, &r, rule, theta, trials, &stream)?;
            let (oc_s, hc_s) =
                ca_baseline(ca_small, rule, &spec(small_cm)?, &r, theta, trials, &stream)?;
            let (oc_l, hc_l) =
                ca_baseline(ca_large, rule, &spec(large_cm)?, &r, theta, trials, &stream)?;
            rows.push([
                p_dbm,
                o_s.probability,
                o_l.probability,
                oc_s.probability,
                oc_l.probability,
                h_s,
                h_l,
                hc_s,
                hc_l,
            ]);
        }
        let csv = ctx.out.csv(
            file,
            &[
                "ptx_dbm",
                "ra_small_outage",
                "ra_large_outage",
                "ca_small_outage",
                "ca_large_outage",
                "ra_small_harvest",
                "ra_large_harvest",
                "ca_small_harvest",
                "ca_large_harvest",
            ],
        );
        for row in rows {
            csv.row(row.into_iter().map(Into::into).collect());
        }
    }
    Ok(())
}
