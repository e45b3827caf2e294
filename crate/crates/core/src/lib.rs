//! Optimal-control synthesis of single- and two-qubit gates on a pair of
//! inductively coupled three-junction flux qubits.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`qubit_model`] solves each loop's phase-space eigenproblem and derives
//!    the reduced two-level coefficients of the pair.
//! 2. [`hamiltonian`] assembles the time-dependent reduced (4×4) and
//!    multi-level (25×25) Hamiltonians for a [`PulseSequence`].
//! 3. [`krotov`] shapes the two flux channels to hit a target gate, either
//!    unitarily or under a Lindblad model ([`propagation`]).
//! 4. [`gates`] scores the result: trace-distance error `η`, projected
//!    multi-level error `η_P` and dissipative error `η_D`.
//!
//! The `fluxgate` binary wraps the same stages behind `derive-params`,
//! `optimize`, `validate` and `report`; the `examples/` directory walks
//! through each capability from library code.

pub mod cli;
pub mod error;
pub mod gates;
pub mod hamiltonian;
pub mod io;
pub mod krotov;
pub mod linalg;
pub mod propagation;
pub mod qubit_model;

pub use error::{FluxError, Result};




pub use qubit_model::{Device, QubitDesign, ReducedCoefficients};
