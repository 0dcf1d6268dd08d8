//! Reflecting-surface assisted SWIPT: effective channels, power-splitting
//! metrics, a hybrid-precoding min-power design, self-sustainable surface
//! operation modes, and power-feedback-only beam algorithms.

pub mod feedback;
pub mod hybrid;
pub mod modes;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::CMatrix;
use crate::numerics::rng::RngStream;

pub use feedback::{beam_sharing, mtbs_scan, multi_focus, BeamSharingOutcome, FocusTechnique, IrsEnv, MtbsOutcome};
pub use hybrid::{solve_hp_pb_ps, HybridProblem, HybridSolution};
pub use modes::{mode_sim, IrsMode, ModeCurves, ModeScenario};

/// Phase configuration of a reflecting surface.
#[derive(Clone, Debug)]
pub struct IrsState {
    /// Phase per element, radians in [0, 2 pi).
    pub phases: Vec<f64>,
    /// Quantization depth; `None` keeps continuous phases.
    pub bits: Option<u32>,
}

impl IrsState {
    pub fn zeros(n: usize) -> Self {
        IrsState { phases: vec![0.0; n], bits: None }
    }

    pub fn random(n: usize, bits: Option<u32>, stream: &mut RngStream) -> Self {
        let mut s = IrsState {
            phases: (0..n)
                .map(|_| stream.uniform_in(0.0, 2.0 * std::f64::consts::PI))
                .collect(),
            bits,
        };
        s.requantize();
        s
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Unit-modulus reflection coefficient of element `n`.
    pub fn coeff(&self, n: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.phases[n])
    }

    /// Snap a phase onto the quantization lattice.
    pub fn quantize(&self, phase: f64) -> f64 {
        match self.bits {
            None => phase.rem_euclid(2.0 * std::f64::consts::PI),
            Some(b) => {
                let levels = (1u64 << b) as f64;
                let step = 2.0 * std::f64::consts::PI / levels;
                let idx = (phase / step).round().rem_euclid(levels);
                idx * step
            }
        }
    }

    pub fn set_phase(&mut self, n: usize, phase: f64) {
        self.phases[n] = self.quantize(phase);
    }

    fn requantize(&mut self) {
        if self.bits.is_some() {
            for i in 0..self.phases.len() {
                self.phases[i] = self.quantize(self.phases[i]);
            }
        }
    }
}

/// Analog/digital transmitter: unit-modulus RF precoder (M x L) and digital
/// per-user vectors (length L).
#[derive(Clone, Debug)]
pub struct HybridTx {
    pub f_rf: CMatrix,
    pub f_bb: Vec<Vec<Complex64>>,
}

impl HybridTx {
    /// Antenna-domain beam for user k: `F_R f_k`.
    pub fn beam(&self, k: usize) -> Vec<Complex64> {
        self.f_rf.mul_vec(&self.f_bb[k])
    }

    /// Transmit sum power over all users.
    pub fn p_sum(&self) -> f64 {
        (0..self.f_bb.len())
            .map(|k| self.beam(k).iter().map(|x| x.norm_sqr()).sum::<f64>())
            .sum()
    }
}

/// Effective row channel `h^H = h_d^H + theta^H H_k`, where
/// `H_k = diag(h_r^H) H` is the cascade matrix of user k.
///
/// All channels are stored as row vectors of the conjugated form used in the
/// SINR expressions, so `row_dot(h, x)` is the received amplitude.
pub fn effective_channel(
    h_direct_row: &[Complex64],
    cascade: &CMatrix,
    state: &IrsState,
) -> Result<Vec<Complex64>> {
    let m = h_direct_row.len();
    if cascade.rows != state.len() || (cascade.rows > 0 && cascade.cols != m) {
        return Err(Error::Dimension(format!(
            "cascade {}x{} vs {} phases and {} antennas",
            cascade.rows, cascade.cols, state.len(), m
        )));
    }
    let mut out = h_direct_row.to_vec();
    for n in 0..cascade.rows {
        let c = state.coeff(n);
        for (j, o) in out.iter_mut().enumerate() {
            *o += c * cascade[(n, j)];
        }
    }
    Ok(out)
}

/// Cascade matrix `diag(h_r^H) H` for one user.
pub fn cascade_matrix(h_irs_rx_row: &[Complex64], h_tx_irs: &CMatrix) -> CMatrix {
    CMatrix::from_fn(h_tx_irs.rows, h_tx_irs.cols, |n, m| {
        h_irs_rx_row[n] * h_tx_irs[(n, m)]
    })
}

/// Row-channel inner product (the row is already conjugated).
pub fn row_dot(row: &[Complex64], x: &[Complex64]) -> Complex64 {
    row.iter().zip(x).map(|(r, v)| r * v).sum()
}

/// Power-splitting receiver metrics for one user set.
#[derive(Clone, Debug)]
pub struct PsMetrics {
    pub sinr: Vec<f64>,
    /// RF power entering the harvesting branch.
    pub e_rf: Vec<f64>,
    /// Harvested power after the EH law.
    pub e_harvested: Vec<f64>,
}

/// SINR and harvesting figures at each PS receiver:
/// `SINR_k = rho |h_k F f_k|^2 / (rho (sum_j |h_k F f_j|^2 + s2) + sC2)` and
/// `E_k = (1 - rho) sum_j |h_k F f_j|^2`.
pub fn ps_metrics(
    rows: &[Vec<Complex64>],
    tx: &HybridTx,
    rho: &[f64],
    sigma2: f64,
    sigma_c2: f64,
    eh: &crate::eh::EhModel,
) -> Result<PsMetrics> {
    let k_users = rows.len();
    if rho.len() != k_users || tx.f_bb.len() != k_users {
        return Err(Error::Dimension("per-user fields disagree".into()));
    }
    let beams: Vec<Vec<Complex64>> = (0..k_users).map(|k| tx.beam(k)).collect();
    let mut sinr = Vec::with_capacity(k_users);
    let mut e_rf = Vec::with_capacity(k_users);
    let mut e_harvested = Vec::with_capacity(k_users);
    for k in 0..k_users {
        if !(0.0..=1.0).contains(&rho[k]) {
            return Err(Error::Invalid(format!("rho[{k}] = {} outside [0,1]", rho[k])));
        }
        let powers: Vec<f64> = beams
            .iter()
            .map(|b| row_dot(&rows[k], b).norm_sqr())
            .collect();
        let own = powers[k];
        let interference: f64 = powers
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| p)
            .sum();
        sinr.push(rho[k] * own / (rho[k] * (interference + sigma2) + sigma_c2));
        let total: f64 = powers.iter().sum();
        let e = (1.0 - rho[k]) * total;
        e_rf.push(e);
        e_harvested.push(eh.harvest(e)?);
    }
    Ok(PsMetrics { sinr, e_rf, e_harvested })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eh::{EhModel, LinearEh};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quantization_lattice() {
        let mut s = IrsState { phases: vec![0.0; 4], bits: Some(1) };
        s.set_phase(0, 0.2);
        s.set_phase(1, 3.0);
        s.set_phase(2, 6.0);
        assert_eq!(s.phases[0], 0.0);
        assert!((s.phases[1] - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(s.phases[2], 0.0);
        for n in 0..4 {
            assert!((s.coeff(n).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn effective_channel_identity_and_zero_cascade() {
        let h_d = vec![c(1.0, 0.5), c(-0.2, 0.1)];
        // Zero cascade leaves the direct channel.
        let zero = CMatrix::zeros(3, 2);
        let s = IrsState::zeros(3);
        let eff = effective_channel(&h_d, &zero, &s).unwrap();
        for (a, b) in eff.iter().zip(&h_d) {
            assert!((a - b).norm() < 1e-15);
        }
        // Zero phases sum the cascade rows directly.
        let mut stream = RngStream::new(3, 0);
        let cas = CMatrix::from_fn(3, 2, |_, _| stream.complex_gaussian());
        let eff = effective_channel(&h_d, &cas, &s).unwrap();
        for j in 0..2 {
            let want = h_d[j] + cas[(0, j)] + cas[(1, j)] + cas[(2, j)];
            assert!((eff[j] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn effective_channel_matches_elementwise_oracle() {
        let mut stream = RngStream::new(4, 0);
        let m = 4;
        let ne = 6;
        let h_d = stream.complex_gaussian_vec(m);
        let h_r = stream.complex_gaussian_vec(ne);
        let h = CMatrix::from_fn(ne, m, |_, _| stream.complex_gaussian());
        let state = IrsState::random(ne, None, &mut stream);
        let cas = cascade_matrix(&h_r, &h);
        let eff = effective_channel(&h_d, &cas, &state).unwrap();
        for j in 0..m {
            let mut want = h_d[j];
            for n in 0..ne {
                want += Complex64::from_polar(1.0, state.phases[n]) * h_r[n] * h[(n, j)];
            }
            assert!((eff[j] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn ps_metrics_edges_and_oracle() {
        let mut stream = RngStream::new(5, 0);
        let m = 4;
        let rows: Vec<Vec<Complex64>> =
            (0..2).map(|_| stream.complex_gaussian_vec(m)).collect();
        let f_rf = CMatrix::from_fn(m, 2, |_, _| {
            Complex64::from_polar(1.0, stream.uniform_in(0.0, 6.28))
        });
        let f_bb: Vec<Vec<Complex64>> = (0..2).map(|_| stream.complex_gaussian_vec(2)).collect();
        let tx = HybridTx { f_rf, f_bb };
        let eh = EhModel::Linear(LinearEh { eta: 1.0 });

        // rho = 1: nothing reaches the harvester.
        let m1 = ps_metrics(&rows, &tx, &[1.0, 1.0], 1e-3, 1e-4, &eh).unwrap();
        assert_eq!(m1.e_rf, vec![0.0, 0.0]);

        // Single user: no interference term.
        let single = ps_metrics(&rows[..1], &tx_single(&tx), &[0.4], 1e-3, 1e-4, &eh)
            .unwrap();
        let own = row_dot(&rows[0], &tx.beam(0)).norm_sqr();
        let want = 0.4 * own / (0.4 * 1e-3 + 1e-4);
        assert!((single.sinr[0] - want).abs() < 1e-9 * want);

        // Two users: direct scalar expansion.
        let m2 = ps_metrics(&rows, &tx, &[0.3, 0.7], 1e-3, 1e-4, &eh).unwrap();
        for k in 0..2 {
            let p: Vec<f64> = (0..2)
                .map(|j| row_dot(&rows[k], &tx.beam(j)).norm_sqr())
                .collect();
            let inter: f64 = p.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v).sum();
            let rho = [0.3, 0.7][k];
            let want = rho * p[k] / (rho * (inter + 1e-3) + 1e-4);
            assert!((m2.sinr[k] - want).abs() < 1e-9 * want);
            assert!((m2.e_rf[k] - (1.0 - rho) * (p[0] + p[1])).abs() < 1e-12);
        }
    }

    fn tx_single(tx: &HybridTx) -> HybridTx {
        HybridTx { f_rf: tx.f_rf.clone(), f_bb: vec![tx.f_bb[0].clone()] }
    }
}
