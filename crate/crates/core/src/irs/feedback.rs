//! Power-feedback-only surface configuration on simulated LoS channels:
//! multi-tile beam scanning, multi-focus pattern synthesis, and beam sharing
//! with leakage suppression. Nothing here reads channel phases; every update
//! is driven by simulated received power alone, mirroring what a testbed can
//! measure.

use num_complex::Complex64;

use crate::channel::{los_gain, LosLink};
use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;

use super::IrsState;

/// Planar reflecting surface in the x-z plane plus the LoS propagation law.
#[derive(Clone, Debug)]
pub struct IrsEnv {
    pub elements: Vec<[f64; 3]>,
    pub nrows: usize,
    pub ncols: usize,
    pub link: LosLink,
    /// Power gain applied to the direct (panel-bypassing) paths. Directive
    /// transmit antennas pointed at the panel make this well below one.
    pub direct_gain: f64,
}

impl IrsEnv {
    pub fn planar(nrows: usize, ncols: usize, spacing: f64, link: LosLink) -> Self {
        let x0 = 0.5 * (ncols as f64 - 1.0) * spacing;
        let z0 = 0.5 * (nrows as f64 - 1.0) * spacing;
        let mut elements = Vec::with_capacity(nrows * ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                elements.push([c as f64 * spacing - x0, 0.0, r as f64 * spacing - z0]);
            }
        }
        IrsEnv { elements, nrows, ncols, link, direct_gain: 1.0 }
    }

    pub fn with_direct_gain(mut self, gain: f64) -> Self {
        self.direct_gain = gain;
        self
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    /// LoS product channel from `from` via element `n` to `to`.
    pub fn cascade_gain(&self, from: [f64; 3], n: usize, to: [f64; 3]) -> Complex64 {
        let e = self.elements[n];
        los_gain(Self::dist(from, e), &self.link).unwrap()
            * los_gain(Self::dist(e, to), &self.link).unwrap()
    }

    /// Received amplitude with the given surface state; the direct path is
    /// included unless blocked.
    pub fn received_amplitude(
        &self,
        from: [f64; 3],
        to: [f64; 3],
        state: &IrsState,
        direct: bool,
    ) -> Complex64 {
        let mut acc = if direct {
            self.direct_gain.sqrt() * los_gain(Self::dist(from, to), &self.link).unwrap()
        } else {
            Complex64::new(0.0, 0.0)
        };
        for n in 0..self.n_elements() {
            acc += state.coeff(n) * self.cascade_gain(from, n, to);
        }
        acc
    }

    pub fn received_power(
        &self,
        from: [f64; 3],
        to: [f64; 3],
        state: &IrsState,
        direct: bool,
    ) -> f64 {
        self.received_amplitude(from, to, state, direct).norm_sqr()
    }

    /// Ideal focusing phase for element `n` on the `from -> n -> to` path.
    pub fn focus_phase(&self, from: [f64; 3], n: usize, to: [f64; 3]) -> f64 {
        -self.cascade_gain(from, n, to).arg()
    }

    /// Element indices of one tile in a `tile_rows x tile_cols` partition.
    pub fn tile_elements(&self, tile_rows: usize, tile_cols: usize, tile: usize) -> Vec<usize> {
        let tiles_per_row = self.ncols / tile_cols;
        let tr = tile / tiles_per_row;
        let tc = tile % tiles_per_row;
        let mut idx = Vec::with_capacity(tile_rows * tile_cols);
        for r in 0..tile_rows {
            for c in 0..tile_cols {
                idx.push((tr * tile_rows + r) * self.ncols + (tc * tile_cols + c));
            }
        }
        idx
    }

    pub fn n_tiles(&self, tile_rows: usize, tile_cols: usize) -> usize {
        (self.nrows / tile_rows) * (self.ncols / tile_cols)
    }
}

/// Multi-tile scan outcome: the converged state and the power trace after
/// each tile update (nondecreasing because the incumbent always competes).
#[derive(Clone, Debug)]
pub struct MtbsOutcome {
    pub state: IrsState,
    pub trace: Vec<f64>,
}

/// Iterative per-tile codebook scan using only received-power feedback.
///
/// Each tile tries the focusing pattern toward every candidate focal point
/// (quantized to the state's lattice) while the rest of the surface is held;
/// the best measurement wins, the incumbent included.
#[allow(clippy::too_many_arguments)]
pub fn mtbs_scan(
    env: &IrsEnv,
    tx: [f64; 3],
    rx: [f64; 3],
    direct: bool,
    tile_dims: (usize, usize),
    focals: &[[f64; 3]],
    init: &IrsState,
    n_sweeps: usize,
) -> Result<MtbsOutcome> {
    if focals.is_empty() {
        return Err(Error::Invalid("empty scanning codebook".into()));
    }
    if !env.nrows.is_multiple_of(tile_dims.0) || !env.ncols.is_multiple_of(tile_dims.1) {
        return Err(Error::Invalid("tile dimensions must divide the panel".into()));
    }
    let mut state = init.clone();
    let mut trace = vec![env.received_power(tx, rx, &state, direct)];
    let n_tiles = env.n_tiles(tile_dims.0, tile_dims.1);
    for _ in 0..n_sweeps {
        for tile in 0..n_tiles {
            let members = env.tile_elements(tile_dims.0, tile_dims.1, tile);
            let incumbent: Vec<f64> = members.iter().map(|&n| state.phases[n]).collect();
            let mut best_power = env.received_power(tx, rx, &state, direct);
            let mut best_phases = incumbent.clone();
            for focal in focals {
                for &n in &members {
                    state.set_phase(n, env.focus_phase(tx, n, *focal));
                }
                let p = env.received_power(tx, rx, &state, direct);
                if p > best_power {
                    best_power = p;
                    best_phases = members.iter().map(|&n| state.phases[n]).collect();
                }
            }
            for (&n, &ph) in members.iter().zip(&best_phases) {
                state.phases[n] = ph;
            }
            trace.push(best_power);
        }
    }
    Ok(MtbsOutcome { state, trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FocusTechnique {
    /// Phase of the weighted sum of per-target focusing patterns.
    PatternAddition,
    /// Random per-element assignment to a target, probability = weight.
    RandomInterleaving,
    /// Contiguous tile blocks assigned proportionally to the weights.
    TileDivision,
}

/// Multi-focus state serving several receivers at once from one transmitter.
pub fn multi_focus(
    env: &IrsEnv,
    tx: [f64; 3],
    targets: &[[f64; 3]],
    weights: &[f64],
    technique: FocusTechnique,
    bits: Option<u32>,
    stream: &mut RngStream,
) -> Result<IrsState> {
    if targets.is_empty() || targets.len() != weights.len() {
        return Err(Error::Invalid("targets and weights must match".into()));
    }
    let wsum: f64 = weights.iter().sum();
    if (wsum - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("weights sum to {wsum}, expected 1")));
    }
    let ne = env.n_elements();
    let mut state = IrsState { phases: vec![0.0; ne], bits };
    match technique {
        FocusTechnique::PatternAddition => {
            for n in 0..ne {
                let z: Complex64 = targets
                    .iter()
                    .zip(weights)
                    .map(|(t, &w)| w * Complex64::from_polar(1.0, env.focus_phase(tx, n, *t)))
                    .sum();
                state.set_phase(n, z.arg());
            }
        }
        FocusTechnique::RandomInterleaving => {
            for n in 0..ne {
                let mut u = stream.uniform();
                let mut pick = targets.len() - 1;
                for (l, &w) in weights.iter().enumerate() {
                    if u < w {
                        pick = l;
                        break;
                    }
                    u -= w;
                }
                state.set_phase(n, env.focus_phase(tx, n, targets[pick]));
            }
        }
        FocusTechnique::TileDivision => {
            // Contiguous runs of elements, proportional to the weights.
            let mut start = 0usize;
            for (l, &w) in weights.iter().enumerate() {
                let len = if l + 1 == targets.len() {
                    ne - start
                } else {
                    (w * ne as f64).round() as usize
                };
                for n in start..(start + len).min(ne) {
                    state.set_phase(n, env.focus_phase(tx, n, targets[l]));
                }
                start = (start + len).min(ne);
            }
        }
    }
    Ok(state)
}

/// Beam-sharing outcome on the four-node layout.
#[derive(Clone, Debug)]
pub struct BeamSharingOutcome {
    pub state: IrsState,
    /// Power transmitter to data user (the suppressed path).
    pub leakage: f64,
    pub dtx_du: f64,
    pub ptx_pu: f64,
    pub du_sinr: f64,
    /// Whether the leakage threshold was reached.
    pub feasible: bool,
    /// Per-tile-update trace of (leakage, dtx_du, ptx_pu).
    pub trace: Vec<(f64, f64, f64)>,
}

/// Four-node inputs for the beam-sharing design.
#[derive(Clone, Copy, Debug)]
pub struct BeamSharingNodes {
    pub dtx: [f64; 3],
    pub ptx: [f64; 3],
    pub du: [f64; 3],
    pub pu: [f64; 3],
    /// Data-user noise floor used in the reported SINR.
    pub sigma2: f64,
}

fn bs_metrics(env: &IrsEnv, nodes: &BeamSharingNodes, state: &IrsState) -> (f64, f64, f64, f64) {
    let dtx_du = env.received_power(nodes.dtx, nodes.du, state, true);
    let ptx_pu = env.received_power(nodes.ptx, nodes.pu, state, true);
    let leakage = env.received_power(nodes.ptx, nodes.du, state, true);
    let sinr = dtx_du / (leakage + nodes.sigma2);
    (dtx_du, ptx_pu, leakage, sinr)
}

/// Per-tile coordinate updates that maximize the weighted delivered powers
/// while forcing the power-transmitter leakage at the data user below
/// `threshold`.
///
/// An update is accepted only if the data user's SINR does not regress, so
/// the reported SINR is monotone from the starting state. While the incumbent
/// leakage exceeds the threshold, candidates that strictly reduce it are
/// chased; afterwards a candidate must keep the leakage under the threshold
/// and improve the weighted objective.
#[allow(clippy::too_many_arguments)]
pub fn beam_sharing(
    env: &IrsEnv,
    nodes: &BeamSharingNodes,
    threshold: f64,
    obj_weights: (f64, f64),
    tile_dims: (usize, usize),
    init: &IrsState,
    mix_grid: usize,
    n_sweeps: usize,
) -> Result<BeamSharingOutcome> {
    if !env.nrows.is_multiple_of(tile_dims.0) || !env.ncols.is_multiple_of(tile_dims.1) {
        return Err(Error::Invalid("tile dimensions must divide the panel".into()));
    }
    let mut state = init.clone();
    let objective = |d: f64, p: f64| obj_weights.0 * d + obj_weights.1 * p;
    let n_tiles = env.n_tiles(tile_dims.0, tile_dims.1);
    let mut perturb = RngStream::new(0xB5A, 0);
    let mut trace = Vec::new();
    for _ in 0..n_sweeps {
        for tile in 0..n_tiles {
            let members = env.tile_elements(tile_dims.0, tile_dims.1, tile);
            let incumbent: Vec<f64> = members.iter().map(|&n| state.phases[n]).collect();
            let (d0, p0, l0, s0) = bs_metrics(env, nodes, &state);
            let mut best = (incumbent.clone(), d0, p0, l0, s0);
            let try_candidate = |state: &mut IrsState,
                                     best: &mut (Vec<f64>, f64, f64, f64, f64)| {
                let (d, p, l, s) = bs_metrics(env, nodes, state);
                let accept = if best.3 > threshold {
                    // Bootstrap toward the threshold without hurting the SINR.
                    l < best.3 && s >= best.4
                } else {
                    l <= threshold
                        && s >= best.4 * (1.0 - 1e-12)
                        && objective(d, p) > objective(best.1, best.2)
                };
                if accept {
                    *best = (
                        members.iter().map(|&n| state.phases[n]).collect(),
                        d,
                        p,
                        l,
                        s,
                    );
                }
            };
            // Candidate family: phase-addition mixtures of the two links,
            // then a few measured random patterns.
            for mix in 0..=mix_grid {
                let alpha = mix as f64 / mix_grid as f64;
                for &n in &members {
                    let zd =
                        Complex64::from_polar(1.0, env.focus_phase(nodes.dtx, n, nodes.du));
                    let zp =
                        Complex64::from_polar(1.0, env.focus_phase(nodes.ptx, n, nodes.pu));
                    state.set_phase(n, (alpha * zd + (1.0 - alpha) * zp).arg());
                }
                try_candidate(&mut state, &mut best);
            }
            for _ in 0..2 * mix_grid {
                for &n in &members {
                    state.set_phase(n, perturb.uniform_in(0.0, 2.0 * std::f64::consts::PI));
                }
                try_candidate(&mut state, &mut best);
            }
            for (&n, &ph) in members.iter().zip(&best.0) {
                state.phases[n] = ph;
            }
            trace.push((best.3, best.1, best.2));
        }
    }
    let (dtx_du, ptx_pu, leakage, du_sinr) = bs_metrics(env, nodes, &state);
    Ok(BeamSharingOutcome {
        state,
        leakage,
        dtx_du,
        ptx_pu,
        du_sinr,
        feasible: leakage <= threshold,
        trace,
    })
}
