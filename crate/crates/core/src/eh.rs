//! Rectenna energy-harvesting transfer laws: a linear efficiency model, a
//! sigmoid saturation model, a circuit law built on LambertW/Bessel terms, and
//! a truncated diode Taylor series for sample-based evaluation.

use crate::error::{Error, Result};
use crate::numerics::special::{bessel_i0_ln, lambert_w0_of_ln};

/// Linear conversion with efficiency `eta` in (0, 1].
#[derive(Clone, Copy, Debug)]
pub struct LinearEh {
    pub eta: f64,
}

/// Sigmoid saturation law with saturation power `psat` (W), slope `a` (1/W)
/// and sensitivity `b` (W). Output lives in [0, psat).
#[derive(Clone, Copy, Debug)]
pub struct SigmoidEh {
    pub psat: f64,
    pub a: f64,
    pub b: f64,
}

/// Circuit law driven by the diode's exponential characteristic. `bcoef` is
/// the B in `xi = sqrt(2 p_in) * B`; output clamps at the breakdown level
/// `b_v^2 / (4 r_l)`.
#[derive(Clone, Copy, Debug)]
pub struct CircuitEh {
    pub alpha: f64,
    pub bcoef: f64,
    pub i_s: f64,
    pub r_l: f64,
    pub b_v: f64,
}

/// Even-term Taylor truncation of the diode current, evaluated on received
/// signal samples. `order` is the highest kept power (4 by default).
#[derive(Clone, Copy, Debug)]
pub struct DiodeSeries {
    pub i_s: f64,
    pub delta: f64,
    pub v_t: f64,
    pub r_ant: f64,
    pub order: usize,
}

impl DiodeSeries {
    pub fn new(i_s: f64, delta: f64, v_t: f64, r_ant: f64) -> Self {
        DiodeSeries { i_s, delta, v_t, r_ant, order: 4 }
    }

    /// Taylor coefficient k_n = i_s / (n! (delta v_t)^n).
    pub fn coefficient(&self, n: usize) -> f64 {
        let mut fact = 1.0;
        for j in 1..=n {
            fact *= j as f64;
        }
        self.i_s / (fact * (self.delta * self.v_t).powi(n as i32))
    }
}

/// Two-term diode law with explicit k2/k4 coefficients, used where the
/// coefficients are given directly instead of diode constants.
#[derive(Clone, Copy, Debug)]
pub struct DiodeSeriesK {
    pub k2: f64,
    pub k4: f64,
    pub r_ant: f64,
}

impl DiodeSeriesK {
    /// Harvest metric from the second and fourth moments of the received
    /// signal: `k2 R m2 + k4 R^2 m4`.
    pub fn from_moments(&self, m2: f64, m4: f64) -> f64 {
        self.k2 * self.r_ant * m2 + self.k4 * self.r_ant * self.r_ant * m4
    }
}

/// Average-power harvesting models behind one evaluation interface.
#[derive(Clone, Copy, Debug)]
pub enum EhModel {
    Linear(LinearEh),
    Sigmoid(SigmoidEh),
    Circuit(CircuitEh),
}

impl EhModel {
    pub fn harvest(&self, p_rf: f64) -> Result<f64> {
        match self {
            EhModel::Linear(m) => linear_eh(p_rf, m),
            EhModel::Sigmoid(m) => Ok(sigmoid_eh(p_rf, m)),
            EhModel::Circuit(m) => Ok(circuit_eh(p_rf, m)),
        }
    }

    /// Received power needed to harvest `p_out`, when invertible.
    pub fn required_input(&self, p_out: f64) -> Result<f64> {
        match self {
            EhModel::Linear(m) => Ok(p_out / m.eta),
            EhModel::Sigmoid(m) => m.inverse(p_out),
            EhModel::Circuit(_) => Err(Error::Invalid(
                "circuit model inversion is not supported".into(),
            )),
        }
    }

    /// Upper bound of the output range (infinite for the linear model).
    pub fn saturation(&self) -> f64 {
        match self {
            EhModel::Linear(_) => f64::INFINITY,
            EhModel::Sigmoid(m) => m.psat,
            EhModel::Circuit(m) => m.b_v * m.b_v / (4.0 * m.r_l),
        }
    }
}

/// Linear harvest `eta * p_rf`.
pub fn linear_eh(p_rf: f64, m: &LinearEh) -> Result<f64> {
    if p_rf < 0.0 {
        return Err(Error::Invalid(format!("negative input power {p_rf}")));
    }
    Ok(m.eta * p_rf)
}

/// Sigmoid harvest `(Y - psat psi) / (1 - psi)` with
/// `Y = psat / (1 + exp(-a (p_rf - b)))` and `psi = 1 / (1 + exp(a b))`.
pub fn sigmoid_eh(p_rf: f64, m: &SigmoidEh) -> f64 {
    let upsilon = m.psat / (1.0 + (-m.a * (p_rf - m.b)).exp());
    let psi = 1.0 / (1.0 + (m.a * m.b).exp());
    ((upsilon - m.psat * psi) / (1.0 - psi)).max(0.0)
}

impl SigmoidEh {
    /// Inverse of the sigmoid law on [0, psat).
    pub fn inverse(&self, p_out: f64) -> Result<f64> {
        if !(0.0..self.psat).contains(&p_out) {
            return Err(Error::Invalid(format!(
                "sigmoid inverse: output {p_out} outside [0, {})",
                self.psat
            )));
        }
        let psi = 1.0 / (1.0 + (self.a * self.b).exp());
        let upsilon = p_out * (1.0 - psi) + self.psat * psi;
        // Solve 1 + exp(-a(x-b)) = psat / upsilon for x.
        let x = self.b - (self.psat / upsilon - 1.0).ln() / self.a;
        Ok(x.max(0.0))
    }
}

/// Circuit harvest
/// `min(((1/alpha) W0(alpha e^alpha I0(xi)) - 1)^2 Is^2 RL, Bv^2/(4 RL))`
/// with `xi = sqrt(2 p_in) * B`.
///
/// For xi > 700 the I0 factor is folded into W0 through logs so the clamp is
/// reached without overflow.
pub fn circuit_eh(p_in: f64, m: &CircuitEh) -> f64 {
    let clamp = m.b_v * m.b_v / (4.0 * m.r_l);
    let xi = (2.0 * p_in.max(0.0)).sqrt() * m.bcoef;
    // W0(alpha e^alpha I0(xi)) = W0(exp(ln alpha + alpha + ln I0(xi))); the
    // log form never overflows even though the argument itself would.
    let ln_arg = m.alpha.ln() + m.alpha + bessel_i0_ln(xi);
    let w = lambert_w0_of_ln(ln_arg)
        .expect("circuit_eh: LambertW argument is always >= alpha e^alpha > 0");
    let current_term = (w / m.alpha - 1.0).max(0.0);
    (current_term * current_term * m.i_s * m.i_s * m.r_l).min(clamp)
}

/// Time-average of the even diode terms over received-signal samples.
pub fn diode_avg_power(samples: &[f64], m: &DiodeSeries) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Invalid("diode_avg_power: empty sample set".into()));
    }
    if m.order < 2 || !m.order.is_multiple_of(2) {
        return Err(Error::Invalid(format!(
            "diode_avg_power: order {} must be a positive even number",
            m.order
        )));
    }
    let n_samples = samples.len() as f64;
    let mut total = 0.0;
    let mut n = 2;
    while n <= m.order {
        let kn = m.coefficient(n);
        let moment: f64 = samples.iter().map(|y| y.powi(n as i32)).sum::<f64>() / n_samples;
        total += kn * m.r_ant.powi(n as i32 / 2) * moment;
        n += 2;
    }
    Ok(total)
}
