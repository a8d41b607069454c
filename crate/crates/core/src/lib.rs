//! Simulation and power-control toolkit for UAV-supported ultra-dense
//! networks: flying base station, mobile relay, wireless energy transfer
//! and mobile caching scenarios, plus the optimizers and experiment
//! harness that drive them.

pub mod channel;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod optimize;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};
