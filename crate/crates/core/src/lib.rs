//! Simulation of a pulsed-LFM SAR satellite pass observed by two ground
//! receivers: a swept narrowband receiver that steps a filter across the
//! band, and a wideband envelope detector used as the baseline.
//!
//! The library covers phased-array pattern evaluation ([`antenna`]),
//! waveform synthesis and link-budget modeling ([`waveform`]), the two
//! receiver chains with sweep-plan validation ([`receiver`]),
//! pattern-cut extraction and receiver comparison ([`analysis`]), and a
//! config-driven run pipeline ([`pipeline`], [`scenario`]) behind the `nsr`
//! binary.
//!
//! See the crate examples for one runnable demonstration per capability.

pub mod analysis;
pub mod antenna;
pub mod error;
pub mod pipeline;
pub mod receiver;
pub mod scenario;
pub mod waveform;

pub use error::{Error, Result};
