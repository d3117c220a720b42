//! Exact diagonalization of driven Ising qubit chains in the rotating frame.
//!
//! The crate builds the single-pulse Hamiltonian of a chain of `L` spin-1/2
//! qubits (z-representation and mean-field representation), diagonalizes it
//! densely, and measures the spectral and eigenstate observables used to
//! locate the delocalization and chaos borders: band widths, nearest-neighbour
//! level-spacing distributions, the inverse participation ratio and the
//! statistics of directly coupled states. Every closed-form border estimate is
//! available in [`theory`] so numerics and theory can be compared in sweeps.
//!
//! Module map:
//!
//! * [`model`]: parameters, coupling matrices and every Hamiltonian variant.
//! * [`eigensolve`]: dense Hermitian eigendecomposition with an accuracy record.
//! * [`spectral`]: band identification, band widths and `P(s)` statistics.
//! * [`metrics`]: `N_pc`, state width `σ`, coupled-state census.
//! * [`theory`]: closed-form border estimates.
//! * [`config`], [`sweep`], [`emit`]: configuration, seeded sweeps, CSV/JSONL output.

pub mod config;
pub mod eigensolve;
pub mod emit;
mod error;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod par;
pub mod rng;
pub mod spectral;
pub mod sweep;
pub mod theory;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
