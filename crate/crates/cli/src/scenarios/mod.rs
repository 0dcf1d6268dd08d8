//! Scenario runners: each maps a validated configuration onto the simulation
//! routines and emits CSV plot data.

pub mod fluidra;
pub mod nearfield;
pub mod resalloc;
pub mod surf;
pub mod thz;
pub mod waveform;

use crate::config::ConfigError;
use crate::output::Outputs;
use std::fmt;

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Infeasible(String),
    Numeric(String),
    Io(std::io::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Infeasible(m) => write!(f, "infeasible: {m}"),
            RunError::Numeric(m) => write!(f, "numeric failure: {m}"),
            RunError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Infeasible(_) => 3,
            RunError::Numeric(_) | RunError::Io(_) => 4,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<wietsim_core::Error> for RunError {
    fn from(e: wietsim_core::Error) -> Self {
        match e {
            wietsim_core::Error::Infeasible(m) => RunError::Infeasible(m),
            other => RunError::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

pub type RunResult = Result<(), RunError>;

/// Shared context handed to every runner.
pub struct RunContext<'a> {
    pub cfg: &'a crate::config::Config,
    pub seed: u64,
    pub out: &'a mut Outputs,
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}
