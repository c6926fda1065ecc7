//! Pendulum with a randomly vibrating suspension point.
//!
//! The suspension is driven by a pair of periodically forced OU processes
//! ([`rpsde`]). [`dynamics`] holds the exact and noise-averaged Hamiltonian
//! systems, [`bifurcation`] the equilibrium structure of the averaged
//! potential, [`verification`] Monte Carlo estimates of how well averaging
//! works, and [`poincare`] stroboscopic sections of the exact flow. [`cli`]
//! and [`io`] turn all of it into files.

pub mod bifurcation;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod poincare;
pub mod rng;
pub mod rpsde;
pub mod verification;

pub use error::{Error, Result};
