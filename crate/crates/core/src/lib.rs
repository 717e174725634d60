//! Finite-alphabet information theory for wiretap and Gelfand-Pinsker
//! broadcast channels.
//!
//! The crate is `no_std` and only needs `alloc`. It covers four layers:
//!
//! - [`prob`]: PMFs over named axes, kernels, and information measures in bits.
//! - [`channel`]: wiretap and state-dependent broadcast models, their
//!   classification, and the wiretap-to-GP transformation.
//! - [`regions`]: single-letter rate bounds, capacity search, frontier sweeps
//!   and auxiliary reduction.
//! - [`lab`]: finite-blocklength superposition codes, exactly enumerated or
//!   simulated, with the secrecy and reliability metrics built on them.
//!
//! IO, file formats and the command line live in the companion `wtgp` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
mod error;
pub mod lab;
pub mod math;
pub mod prob;
pub mod regions;
pub mod rng;

pub use error::{Error, Result};
