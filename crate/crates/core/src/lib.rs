//! Measurement-driven single-temperature quantum heat engine whose working
//! medium is a Heisenberg-coupled spin pair.
//!
//! The cycle: thermal state at field `B1`, quasi-static change to `B2` (state
//! frozen), non-selective measurement at `B2`, quasi-static return to `B1`,
//! re-thermalisation with the single bath. All energies are in units with
//! `k_B = 1`.

pub mod analysis;
pub mod closed_forms;
pub mod cli;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod medium;
pub mod spin;
pub mod thermal;
pub mod validate;

pub use error::{Error, Result};
