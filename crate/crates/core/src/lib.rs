//! Exact desk-scale models of truncated de Rham period rings, toric algebras
//! with their two Gamma-actions, and the local Riemann-Hilbert correspondence
//! between semilinear cocycles and integrable t-connections.

pub mod bdr;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod normal_forms;
pub mod random;
pub mod rh;
pub mod toric;

pub use error::{Error, Result};
