//! Fresnel-region propagation utilities: worst-case-optimal transmit
//! placement in a cuboid room, the closed-form worst-case received power, and
//! two-phase far/near beam scanning on LoS channels.

use num_complex::Complex64;

use crate::channel::{los_gain, LosLink};
use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;
use crate::numerics::roots::golden_max;

/// Cuboid room: width `lx` (x in [-lx/2, lx/2]), depth `ly` (y in [0, ly]),
/// height `lz` (z in [-lz/2, lz/2]). Transmit antennas sit on the wall y = 0
/// along the horizontal line z = z0.
#[derive(Clone, Copy, Debug)]
pub struct Room {
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
    pub z0: f64,
}

impl Room {
    /// Effective height `lz + 2 |z0|`, folding the mount offset.
    pub fn lz_prime(&self) -> f64 {
        self.lz + 2.0 * self.z0.abs()
    }

    /// Shape parameter `(4 ly^2 + lz'^2) / lx^2` selecting the closed-form branch.
    pub fn shape_q(&self) -> f64 {
        let lzp = self.lz_prime();
        (4.0 * self.ly * self.ly + lzp * lzp) / (self.lx * self.lx)
    }

    /// Squared distance from an antenna at `(a, 0, z0)` to the farthest
    /// vertical extreme at depth `y` and lateral position `x`.
    fn far_dist_sq(&self, a: f64, x: f64, y: f64) -> f64 {
        let dz = 0.5 * self.lz_prime();
        (x - a) * (x - a) + y * y + dz * dz
    }
}

/// Fraunhofer distance `2 L_A^2 / lambda` separating the Fresnel region from
/// the far field.
pub fn fraunhofer(aperture: f64, lambda: f64) -> f64 {
    2.0 * aperture * aperture / lambda
}

/// Received power under matched transmission: `p_tx c sum_i 1/D_i^2`.
pub fn received_power_mrt(
    tx_positions: &[[f64; 3]],
    rx: [f64; 3],
    p_tx: f64,
    c: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for p in tx_positions {
        let d2 = (p[0] - rx[0]).powi(2) + (p[1] - rx[1]).powi(2) + (p[2] - rx[2]).powi(2);
        if d2 == 0.0 {
            return Err(Error::Invalid("receiver coincides with an antenna".into()));
        }
        acc += 1.0 / d2;
    }
    Ok(p_tx * c * acc)
}

/// Worst-case received power for the symmetric two-antenna placement
/// `(+-a, 0, z0)`: the minimum over receiver positions of `1/D1^2 + 1/D2^2`,
/// scaled by `p_tx c`.
///
/// Power falls with every distance, so the worst receiver sits at maximal
/// depth and vertical offset; the lateral minimum is found by golden search
/// with the interval endpoints checked explicitly.
pub fn worst_case_power_at(room: &Room, a: f64, p_tx: f64, c: f64) -> f64 {
    let pair = |x: f64| 1.0 / room.far_dist_sq(a, x, room.ly) + 1.0 / room.far_dist_sq(-a, x, room.ly);
    let (_, interior) = golden_max(|x| -pair(x), 0.0, 0.5 * room.lx, 1e-12 * room.lx);
    let best = (-interior).min(pair(0.0)).min(pair(0.5 * room.lx));
    p_tx * c * best
}

/// Three-branch closed form for the optimal worst-case received power of a
/// symmetric two-antenna placement, keyed on the room shape parameter.
pub fn worst_case_power_closed_form(room: &Room, p_tx: f64, c: f64) -> f64 {
    let q = room.shape_q();
    let lx2 = room.lx * room.lx;
    let ly2 = room.ly * room.ly;
    let lzp2 = room.lz_prime().powi(2);
    let value = if q <= 1.25 {
        2.0 / (4.0 / 3.0 * ly2 + lx2 / 12.0 + lzp2 / 3.0)
    } else if q <= 3.0 {
        (2.0 * (q + 1.0).sqrt() + 2.0) / (4.0 * ly2 + lzp2)
    } else {
        2.0 / (ly2 + 0.25 * lx2 + 0.25 * lzp2)
    };
    p_tx * c * value
}

/// Result of the max-min placement search.
#[derive(Clone, Debug)]
pub struct Placement {
    pub positions: Vec<[f64; 3]>,
    pub worst_case_power: f64,
}

/// Grid-plus-refinement oracle for the worst receiver location given fixed
/// antenna positions. Searches the full room box; independent of the closed
/// form above.
pub fn worst_rx_power_grid(
    room: &Room,
    positions: &[[f64; 3]],
    p_tx: f64,
    c: f64,
    grid: (usize, usize, usize),
) -> f64 {
    let (nx, ny, nz) = grid;
    let eval = |x: f64, y: f64, z: f64| {
        received_power_mrt(positions, [x, y, z], p_tx, c).unwrap_or(f64::INFINITY)
    };
    let mut best = f64::INFINITY;
    let mut arg = (0.0, 0.0, 0.0);
    for ix in 0..=nx {
        let x = -0.5 * room.lx + room.lx * ix as f64 / nx as f64;
        for iy in 0..=ny {
            let y = room.ly * iy as f64 / ny as f64;
            for iz in 0..=nz {
                let z = -0.5 * room.lz + room.lz * iz as f64 / nz as f64;
                let v = eval(x, y, z);
                if v < best {
                    best = v;
                    arg = (x, y, z);
                }
            }
        }
    }
    // Coordinate-descent refinement within one grid cell of the incumbent.
    let steps = [room.lx / nx as f64, room.ly / ny as f64, room.lz / nz as f64];
    let (mut x, mut y, mut z) = arg;
    for _ in 0..4 {
        let (bx, _) = golden_max(
            |t| -eval(t, y, z),
            (x - steps[0]).max(-0.5 * room.lx),
            (x + steps[0]).min(0.5 * room.lx),
            1e-11 * room.lx.max(1.0),
        );
        x = bx;
        let (by, _) = golden_max(
            |t| -eval(x, t, z),
            (y - steps[1]).max(0.0),
            (y + steps[1]).min(room.ly),
            1e-11 * room.ly.max(1.0),
        );
        y = by;
        let (bz, _) = golden_max(
            |t| -eval(x, y, t),
            (z - steps[2]).max(-0.5 * room.lz),
            (z + steps[2]).min(0.5 * room.lz),
            1e-11 * room.lz.max(1.0),
        );
        z = bz;
    }
    best.min(eval(x, y, z))
}

/// Max-min transmit placement on the mount line.
///
/// For `n_t = 2` the search runs over the symmetric pair `(+-a, 0, z0)`:
/// a coarse scan over `a` brackets the peak, golden-section refines it.
/// `n_t = 1` sits at the wall center by symmetry; `n_t > 2` is handled by
/// coordinate ascent over positions.
pub fn optimize_placement(room: &Room, n_t: usize) -> Result<Placement> {
    let at = |a: f64| [a, 0.0, room.z0];
    match n_t {
        0 => Err(Error::Invalid("need at least one antenna".into())),
        1 => {
            let pos = vec![at(0.0)];
            let p = worst_rx_power_grid(room, &pos, 1.0, 1.0, (64, 64, 16));
            Ok(Placement { positions: pos, worst_case_power: p })
        }
        2 => {
            let objective = |a: f64| worst_case_power_at(room, a, 1.0, 1.0);
            // Coarse scan to bracket the global peak, then golden refinement.
            let n_scan = 129usize;
            let mut best_i = 0usize;
            let mut best_v = f64::NEG_INFINITY;
            for i in 0..n_scan {
                let a = 0.5 * room.lx * i as f64 / (n_scan - 1) as f64;
                let v = objective(a);
                if v > best_v {
                    best_v = v;
                    best_i = i;
                }
            }
            let lo = 0.5 * room.lx * (best_i.saturating_sub(1)) as f64 / (n_scan - 1) as f64;
            let hi = 0.5 * room.lx * ((best_i + 1).min(n_scan - 1)) as f64 / (n_scan - 1) as f64;
            let (a_star, v_star) = golden_max(objective, lo, hi, 1e-12 * room.lx);
            let (a_star, v_star) = if best_v > v_star {
                (0.5 * room.lx * best_i as f64 / (n_scan - 1) as f64, best_v)
            } else {
                (a_star, v_star)
            };
            Ok(Placement {
                positions: vec![at(a_star), at(-a_star)],
                worst_case_power: v_star,
            })
        }
        _ => {
            // Coordinate ascent over individual positions on the mount line.
            let mut xs: Vec<f64> = (0..n_t)
                .map(|i| room.lx * ((i as f64 + 0.5) / n_t as f64 - 0.5))
                .collect();
            let eval = |xs: &[f64]| {
                let pos: Vec<[f64; 3]> = xs.iter().map(|&x| at(x)).collect();
                worst_rx_power_grid(room, &pos, 1.0, 1.0, (32, 32, 8))
            };
            let mut best = eval(&xs);
            for _round in 0..4 {
                for i in 0..n_t {
                    let saved = xs[i];
                    let (xi, v) = golden_max(
                        |x| {
                            let mut trial = xs.clone();
                            trial[i] = x;
                            eval(&trial)
                        },
                        -0.5 * room.lx,
                        0.5 * room.lx,
                        1e-4 * room.lx,
                    );
                    if v > best {
                        xs[i] = xi;
                        best = v;
                    } else {
                        xs[i] = saved;
                    }
                }
            }
            Ok(Placement {
                positions: xs.iter().map(|&x| at(x)).collect(),
                worst_case_power: best,
            })
        }
    }
}

/// Ratio of the optimal worst-case power to the far-field placement
/// (both antennas at the wall center); lies in [1, 3].
pub fn gain_over_farfield(room: &Room) -> Result<f64> {
    let opt = optimize_placement(room, 2)?;
    let ff = worst_case_power_at(room, 0.0, 1.0, 1.0);
    Ok(opt.worst_case_power / ff)
}

/// Uniform linear array along x, centered at the origin.
#[derive(Clone, Debug)]
pub struct ArrayGeometry {
    pub elements: Vec<[f64; 3]>,
    pub lambda: f64,
}

impl ArrayGeometry {
    pub fn ula(n: usize, spacing: f64, lambda: f64) -> Self {
        let offset = 0.5 * (n as f64 - 1.0) * spacing;
        let elements = (0..n)
            .map(|i| [i as f64 * spacing - offset, 0.0, 0.0])
            .collect();
        ArrayGeometry { elements, lambda }
    }

    /// Maximum pairwise extent of the element positions.
    pub fn aperture(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2))
                    .sqrt();
                best = best.max(d);
            }
        }
        best
    }
}

/// One scanning beam: unit-norm weights plus the steering metadata used to
/// restrict the near-field phase of the scan.
#[derive(Clone, Debug)]
pub struct Beam {
    pub weights: Vec<Complex64>,
    /// Steering direction sine (azimuth) of the beam.
    pub sin_az: f64,
    /// Focal range in meters; infinite for far-field beams.
    pub range: f64,
}

/// Far-field codebook: progressive-phase beams over `sin(az)` in [-1, 1].
pub fn far_codebook(array: &ArrayGeometry, n_beams: usize) -> Vec<Beam> {
    let norm = 1.0 / (array.elements.len() as f64).sqrt();
    (0..n_beams)
        .map(|b| {
            let s = -1.0 + 2.0 * (b as f64 + 0.5) / n_beams as f64;
            let weights = array
                .elements
                .iter()
                .map(|e| {
                    Complex64::from_polar(norm, 2.0 * std::f64::consts::PI * e[0] * s / array.lambda)
                })
                .collect();
            Beam { weights, sin_az: s, range: f64::INFINITY }
        })
        .collect()
}

/// Near-field codebook: phase-conjugate focusing onto a range x azimuth grid.
pub fn near_codebook(array: &ArrayGeometry, ranges: &[f64], n_az: usize) -> Vec<Beam> {
    let norm = 1.0 / (array.elements.len() as f64).sqrt();
    let mut beams = Vec::with_capacity(ranges.len() * n_az);
    for &r in ranges {
        for b in 0..n_az {
            let s = -1.0 + 2.0 * (b as f64 + 0.5) / n_az as f64;
            let focal = [r * s, r * (1.0 - s * s).max(0.0).sqrt(), 0.0];
            let weights = array
                .elements
                .iter()
                .map(|e| {
                    let d = ((e[0] - focal[0]).powi(2)
                        + (e[1] - focal[1]).powi(2)
                        + (e[2] - focal[2]).powi(2))
                    .sqrt();
                    Complex64::from_polar(norm, 2.0 * std::f64::consts::PI * d / array.lambda)
                })
                .collect();
            beams.push(Beam { weights, sin_az: s, range: r });
        }
    }
    beams
}

/// Received power of a beam on the LoS channel to `rx`.
pub fn beam_power(array: &ArrayGeometry, beam: &Beam, rx: [f64; 3], link: &LosLink) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, w) in array.elements.iter().zip(&beam.weights) {
        let d = ((e[0] - rx[0]).powi(2) + (e[1] - rx[1]).powi(2) + (e[2] - rx[2]).powi(2)).sqrt();
        acc += los_gain(d, link).unwrap() * w;
    }
    acc.norm_sqr()
}

#[derive(Clone, Debug)]
pub struct FnbsResult {
    pub far_winner: usize,
    pub near_winner: Option<usize>,
    pub far_power: f64,
    pub near_power: f64,
    /// Measured power per examined beam, far phase then near phase.
    pub trace: Vec<f64>,
}

/// Two-phase far/near beam scan: pick the strongest far-field beam, then
/// re-scan only the near-field beams aimed within `az_window` of that
/// direction (the far winner stays in the candidate set, so the result never
/// loses power).
pub fn fnbs_scan(
    array: &ArrayGeometry,
    rx: [f64; 3],
    far: &[Beam],
    near: &[Beam],
    link: &LosLink,
    az_window: f64,
    noise_std: f64,
    stream: &mut RngStream,
) -> Result<FnbsResult> {
    if far.is_empty() {
        return Err(Error::Invalid("far codebook is empty".into()));
    }
    let mut trace = Vec::new();
    let measure = |beam: &Beam, stream: &mut RngStream| {
        let p = beam_power(array, beam, rx, link)
            + if noise_std > 0.0 { noise_std * stream.gaussian() } else { 0.0 };
        p.max(0.0)
    };
    let mut far_winner = 0;
    let mut far_power = f64::NEG_INFINITY;
    for (i, b) in far.iter().enumerate() {
        let p = measure(b, stream);
        trace.push(p);
        if p > far_power {
            far_power = p;
            far_winner = i;
        }
    }
    let target = far[far_winner].sin_az;
    let mut near_winner = None;
    let mut near_power = far_power;
    for (i, b) in near.iter().enumerate() {
        if (b.sin_az - target).abs() > az_window {
            continue;
        }
        let p = measure(b, stream);
        trace.push(p);
        if p > near_power {
            near_power = p;
            near_winner = Some(i);
        }
    }
    Ok(FnbsResult { far_winner, near_winner, far_power, near_power, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraunhofer_reference_points() {
        let c0 = 299_792_458.0;
        let d1 = fraunhofer(0.20, c0 / 2.4e9);
        assert!((d1 - 0.64).abs() < 0.01 * 0.64, "2.4 GHz: {d1}");
        let d2 = fraunhofer(0.20, c0 / 60e9);
        assert!((d2 - 16.0).abs() < 0.01 * 16.0, "60 GHz: {d2}");
        // Doubling the aperture quadruples the distance.
        assert!((fraunhofer(0.4, 0.1) - 4.0 * fraunhofer(0.2, 0.1)).abs() < 1e-12);
    }

    #[test]
    fn received_power_basics() {
        let p = received_power_mrt(&[[0.0, 0.0, 0.0]], [0.0, 1.0, 0.0], 1.0, 1.0).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        let two = received_power_mrt(
            &[[0.5, 0.0, 0.0], [-0.5, 0.0, 0.0]],
            [0.0, 2.0, 0.0],
            3.0,
            1.0,
        )
        .unwrap();
        let d2 = 0.25 + 4.0;
        assert!((two - 3.0 * 2.0 / d2).abs() < 1e-12);
        assert!(received_power_mrt(&[[0.0; 3]], [0.0; 3], 1.0, 1.0).is_err());
    }

    #[test]
    fn received_power_matches_los_gain_amplitudes() {
        let link = LosLink { c: 2.0, lambda: 0.05 };
        let mut stream = RngStream::new(9, 0);
        for _ in 0..20 {
            let positions: Vec<[f64; 3]> = (0..4)
                .map(|_| {
                    [
                        stream.uniform_in(-1.0, 1.0),
                        0.0,
                        stream.uniform_in(-0.5, 0.5),
                    ]
                })
                .collect();
            let rx = [stream.uniform_in(-1.0, 1.0), stream.uniform_in(1.0, 4.0), 0.2];
            let direct = received_power_mrt(&positions, rx, 1.0, link.c).unwrap();
            let via_gain: f64 = positions
                .iter()
                .map(|p| {
                    let d = ((p[0] - rx[0]).powi(2)
                        + (p[1] - rx[1]).powi(2)
                        + (p[2] - rx[2]).powi(2))
                    .sqrt();
                    los_gain(d, &link).unwrap().norm_sqr()
                })
                .sum();
            assert!((direct - via_gain).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn closed_form_branch_continuity() {
        // Branch boundaries q = 5/4 and q = 3, sweeping lx with ly, lz fixed.
        let make = |q: f64| {
            // Choose ly = lz' source: set z0 = 0, lz such that shape hits q.
            let ly = 2.0;
            let lzp = 1.5;
            let lx = ((4.0 * ly * ly + lzp * lzp) / q).sqrt();
            Room { lx, ly, lz: lzp, z0: 0.0 }
        };
        for q in [1.25, 3.0] {
            let below = worst_case_power_closed_form(&make(q - 1e-9), 1.0, 1.0);
            let above = worst_case_power_closed_form(&make(q + 1e-9), 1.0, 1.0);
            assert!(
                (below - above).abs() < 1e-6 * below,
                "discontinuity at q = {q}: {below} vs {above}"
            );
            let exact_lo = worst_case_power_closed_form(&make(q), 1.0, 1.0);
            assert!((exact_lo - below).abs() < 1e-6 * below);
        }
    }

    #[test]
    fn cube_room_matches_grid_oracle() {
        let room = Room { lx: 4.0, ly: 4.0, lz: 4.0, z0: 0.0 };
        let closed = worst_case_power_closed_form(&room, 1.0, 1.0);
        let placement = optimize_placement(&room, 2).unwrap();
        assert!(
            (placement.worst_case_power - closed).abs() < 1e-6 * closed,
            "closed {closed} vs search {}",
            placement.worst_case_power
        );
        // Cross-check the optimum against the full-box grid oracle.
        let oracle = worst_rx_power_grid(&room, &placement.positions, 1.0, 1.0, (64, 64, 16));
        assert!((oracle - closed).abs() < 1e-5 * closed);
    }

    #[test]
    fn deep_room_prefers_farfield_placement() {
        let room = Room { lx: 2.0, ly: 10.0, lz: 2.0, z0: 0.0 };
        let placement = optimize_placement(&room, 2).unwrap();
        assert!(placement.positions[0][0].abs() < 0.02 * room.lx);
        let gain = gain_over_farfield(&room).unwrap();
        assert!((gain - 1.0).abs() < 1e-6, "gain {gain}");
    }

    #[test]
    fn single_antenna_centers() {
        let room = Room { lx: 5.0, ly: 3.0, lz: 2.5, z0: 0.2 };
        let placement = optimize_placement(&room, 1).unwrap();
        assert_eq!(placement.positions.len(), 1);
        assert!(placement.positions[0][0].abs() < 1e-9);
    }

    #[test]
    fn three_antennas_beat_one() {
        let room = Room { lx: 6.0, ly: 2.0, lz: 2.0, z0: 0.0 };
        let one = optimize_placement(&room, 1).unwrap();
        let three = optimize_placement(&room, 3).unwrap();
        assert_eq!(three.positions.len(), 3);
        assert!(three.worst_case_power > one.worst_case_power);
    }

    #[test]
    fn placement_symmetry_and_gain_bounds() {
        let mut stream = RngStream::new(21, 0);
        for _ in 0..10 {
            let room = Room {
                lx: 10f64.powf(stream.uniform_in(0.0, 1.3)),
                ly: 10f64.powf(stream.uniform_in(0.0, 1.3)),
                lz: 10f64.powf(stream.uniform_in(0.0, 1.3)),
                z0: stream.uniform_in(-1.0, 1.0),
            };
            let placement = optimize_placement(&room, 2).unwrap();
            assert!((placement.positions[0][0] + placement.positions[1][0]).abs() < 1e-9);
            let gain = gain_over_farfield(&room).unwrap();
            assert!((1.0 - 1e-9..=3.0 + 1e-9).contains(&gain), "gain {gain}");
        }
    }

    #[test]
    fn flat_wide_room_gain_approaches_three() {
        let room = Room { lx: 10.0, ly: 0.05, lz: 0.05, z0: 0.0 };
        let gain = gain_over_farfield(&room).unwrap();
        assert!(gain > 2.97, "gain {gain}");
        assert!(gain <= 3.0 + 1e-9);
    }

    fn test_link() -> LosLink {
        LosLink { c: 1.0, lambda: 0.125 }
    }

    #[test]
    fn fnbs_boresight_far_winner() {
        let array = ArrayGeometry::ula(16, 0.0625, 0.125);
        let link = test_link();
        let far = far_codebook(&array, 33);
        let near = near_codebook(&array, &[1.0, 2.0, 5.0], 33);
        // True far field on boresight: d_F = 2 * (15*0.0625)^2 / 0.125 = 14 m.
        let rx = [0.0, 30.0, 0.0];
        let res = fnbs_scan(&array, rx, &far, &near, &link, 0.1, 0.0, &mut RngStream::new(1, 0))
            .unwrap();
        let winner_sin = far[res.far_winner].sin_az;
        assert!(winner_sin.abs() < 0.04, "far winner points at {winner_sin}");
        assert!(res.near_power >= res.far_power);
    }

    #[test]
    fn fnbs_near_refinement_improves_inside_fresnel() {
        let array = ArrayGeometry::ula(32, 0.0625, 0.125);
        let link = test_link();
        let d_f = fraunhofer(array.aperture(), array.lambda);
        let rx = [0.3, 0.5 * d_f, 0.0];
        let far = far_codebook(&array, 65);
        let ranges: Vec<f64> = (1..=8).map(|i| 0.125 * d_f * i as f64).collect();
        let near = near_codebook(&array, &ranges, 65);
        let res = fnbs_scan(&array, rx, &far, &near, &link, 0.08, 0.0, &mut RngStream::new(2, 0))
            .unwrap();
        assert!(res.near_winner.is_some());
        assert!(
            res.near_power > res.far_power * 1.02,
            "near {} vs far {}",
            res.near_power,
            res.far_power
        );
        // Exhaustive oracle over the restricted candidate set.
        let target = far[res.far_winner].sin_az;
        let oracle = near
            .iter()
            .filter(|b| (b.sin_az - target).abs() <= 0.08)
            .map(|b| beam_power(&array, b, rx, &link))
            .fold(res.far_power, f64::max);
        assert!((oracle - res.near_power).abs() <= 1e-12 * oracle);
    }
}
