//! Simulation of 1-to-M quantum telecloning.
//!
//! The crate builds the telecloning resource state, runs the Bell-measurement
//! protocol with its Pauli corrections, checks the distributed clones against
//! the optimal universal cloning fidelity, and computes the entanglement
//! diagnostics of the resource state.

pub mod analysis;
pub mod cli;
pub mod cloning;
pub mod error;
pub mod linalg;
pub mod protocol;

pub use error::{Error, Result};

/// Default upper bound on the number of copies.
pub const DEFAULT_M_CAP: usize = 12;
/// Environment variable overriding [`DEFAULT_M_CAP`].
pub const M_CAP_ENV: &str = "TELECLONE_M_CAP";

/// Copy-count cap, honoring `TELECLONE_M_CAP` when it parses as a positive integer.
pub fn m_cap() -> usize {
    std::env::var(M_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(DEFAULT_M_CAP)
}
