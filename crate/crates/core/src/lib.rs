//! # csr-core
//!
//! Controlled state reconstruction with three-qubit resources.
//!
//! A dealer holding an unknown qubit shares it with two parties through a
//! three-qubit resource state; one party assists with a σx measurement and the
//! other rebuilds the qubit. This crate computes the best achievable expected
//! fidelity in closed form from the Pauli expansion of the resource, explains
//! where any advantage over the classical 2/3 comes from, checks whether the
//! resource supports secret sharing, and re-derives the same numbers by
//! simulating the protocol explicitly.
//!
//! - [`qstate`]: density matrices, Pauli expansion, partial traces, validation.
//! - [`fidelity`]: ϑ, `F_max`, teleportation fidelities, case labels, QSS check.
//! - [`protocol`]: branch-by-branch protocol simulation and optimal corrections.
//! - [`classical`]: classical baseline and dishonest-shareholder guesses.
//! - [`wclass`]: generalized W-class states and the fidelity scatter.

#![forbid(unsafe_code)]

pub mod classical;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod presets;
pub mod protocol;
pub mod qstate;
pub mod sampling;
pub mod state_file;
pub mod wclass;

pub use error::{Error, Result};
pub use fidelity::{full_report, FidelityReport, Setting};
pub use qstate::{BlochDecomposition, DensityMatrix3Q, PureState3Q, Qubit};
