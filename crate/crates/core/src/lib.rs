//! Simulation toolkit for wireless information and energy transfer (WIET) links.
//!
//! The crate is organized around the physical layers of a SWIPT system:
//! rectenna harvesting models ([`eh`]), fading and LoS channels ([`channel`]),
//! superimposed-chirp waveforms ([`waveform`]), near-field placement and beam
//! scanning ([`nearfield`]), multi-user resource allocation ([`resalloc`]),
//! reflecting-surface beamforming ([`irs`]), fluid-antenna selection
//! ([`fluid`]), and THz input-distribution design ([`thz`]). Everything is
//! deterministic given an explicit [`RngStream`].

pub mod channel;
pub mod eh;
pub mod error;
pub mod fluid;
pub mod irs;
pub mod nearfield;
pub mod numerics;
pub mod resalloc;
pub mod thz;
pub mod waveform;

pub use error::{Error, Result};
pub use numerics::rng::RngStream;
