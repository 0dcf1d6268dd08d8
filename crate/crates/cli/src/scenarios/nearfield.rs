//! Near-field placement maps and the far/near beam scan.

use wietsim_core::channel::LosLink;
use wietsim_core::nearfield::{
    far_codebook, fnbs_scan, fraunhofer, gain_over_farfield, near_codebook, optimize_placement,
    ArrayGeometry, Room,
};
use wietsim_core::RngStream;

use super::{RunContext, RunResult};

pub const KEYS: &[&str] = &[
    "room.lx",
    "room.ly",
    "room.lz",
    "room.z0",
    "nearfield.grid",
    "fnbs.elements",
    "fnbs.spacing",
    "fnbs.lambda",
    "fnbs.far_beams",
    "fnbs.near_az",
    "fnbs.rx_range_frac",
    "fnbs.rx_offset",
];

/// Optimal symmetric placement over a grid of room aspect ratios.
pub fn run_placement(ctx: &mut RunContext) -> RunResult {
    let lx = ctx.cfg.f64_or("room.lx", 4.0)?;
    let z0 = ctx.cfg.f64_or("room.z0", 0.0)?;
    let grid = ctx.cfg.usize_or("nearfield.grid", 13)?;
    let mut rows = Vec::new();
    for i in 0..grid {
        let ly_ratio = 0.05 + 1.45 * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let lzp_ratio = 0.05 + 1.45 * j as f64 / (grid - 1) as f64;
            let room = Room { lx, ly: ly_ratio * lx, lz: lzp_ratio * lx - 2.0 * z0.abs(), z0 };
            if room.lz <= 0.0 {
                continue;
            }
            let placement = optimize_placement(&room, 2)?;
            rows.push((ly_ratio, lzp_ratio, placement.positions[0][0] / lx));
        }
    }
    let csv = ctx.out.csv("placement", &["ly_over_lx", "lzp_over_lx", "a1_star_over_lx"]);
    for (a, b, c) in rows {
        csv.row(vec![a.into(), b.into(), c.into()]);
    }
    Ok(())
}

/// Worst-case power gain of the optimal placement over the wall-center one.
pub fn run_gain(ctx: &mut RunContext) -> RunResult {
    let lx = ctx.cfg.f64_or("room.lx", 4.0)?;
    let z0 = ctx.cfg.f64_or("room.z0", 0.0)?;
    let grid = ctx.cfg.usize_or("nearfield.grid", 13)?;
    let mut rows = Vec::new();
    for i in 0..grid {
        let ly_ratio = 0.05 + 1.45 * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let lzp_ratio = 0.05 + 1.45 * j as f64 / (grid - 1) as f64;
            let room = Room { lx, ly: ly_ratio * lx, lz: lzp_ratio * lx - 2.0 * z0.abs(), z0 };
            if room.lz <= 0.0 {
                continue;
            }
            rows.push((ly_ratio, lzp_ratio, gain_over_farfield(&room)?));
        }
    }
    let csv = ctx.out.csv("gain", &["ly_over_lx", "lzp_over_lx", "gain"]);
    for (a, b, c) in rows {
        csv.row(vec![a.into(), b.into(), c.into()]);
    }
    Ok(())
}

/// Two-phase far/near beam scan power trace on a LoS channel.
pub fn run_fnbs(ctx: &mut RunContext) -> RunResult {
    let cfg = ctx.cfg;
    let n = cfg.usize_or("fnbs.elements", 32)?;
    let lambda = cfg.f64_or("fnbs.lambda", 0.125)?;
    let spacing = cfg.f64_or("fnbs.spacing", 0.0625)?;
    let far_beams = cfg.usize_or("fnbs.far_beams", 65)?;
    let near_az = cfg.usize_or("fnbs.near_az", 65)?;
    let array = ArrayGeometry::ula(n, spacing, lambda);
    let d_f = fraunhofer(array.aperture(), lambda);
    let range_frac = cfg.f64_or("fnbs.rx_range_frac", 0.5)?;
    let rx = [cfg.f64_or("fnbs.rx_offset", 0.3)?, range_frac * d_f, 0.0];
    let link = LosLink { c: 1.0, lambda };
    let far = far_codebook(&array, far_beams);
    let ranges: Vec<f64> = (1..=8).map(|i| 0.125 * d_f * i as f64).collect();
    let near = near_codebook(&array, &ranges, near_az);
    let mut stream = RngStream::new(ctx.seed, 0);
    let result = fnbs_scan(&array, rx, &far, &near, &link, 0.08, 0.0, &mut stream)?;
    let csv = ctx.out.csv("fnbs_trace", &["step", "phase", "power"]);
    for (i, &p) in result.trace.iter().enumerate() {
        let phase = if i < far_beams { 0usize } else { 1usize };
        csv.row(vec![i.into(), phase.into(), p.into()]);
    }
    let summary = ctx.out.csv("fnbs_summary", &["far_power", "near_power", "fraunhofer_m"]);
    summary.row(vec![result.far_power.into(), result.near_power.into(), d_f.into()]);
    Ok(())
}
