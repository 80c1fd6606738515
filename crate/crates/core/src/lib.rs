//! Simulation of topological pumping in driven spin chains related by
//! Kramers-Wannier duality: spin flips, kinks and cluster excitations.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod pauli;
pub mod quantum_info;
pub mod topology;

pub use error::{Error, Result};
