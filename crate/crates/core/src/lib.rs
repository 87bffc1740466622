//! Numerical model of a near-horizon black-hole source and clock.
//!
//! The source is an su(1,1) system with Bargmann index `K` whose coherent
//! states live on the Poincaré disk. In the large-`K` limit its energy
//! `J w` pulls back to the Hamiltonian of a uniformly accelerated test
//! particle; its two-mode bosonic realisation yields a thermal escaping
//! mode that can be matched to the Hawking temperature, and the composite
//! constraint `H_psi |Psi>> = 0` is a finite Page–Wootters clock.
//!
//! Modules:
//! - [`su11`]: truncated generator matrices and the source Hamiltonian.
//! - [`coherent`], [`crossover`]: coherent-state geometry and classical-limit diagnostics.
//! - [`two_mode`]: pair states, reduced thermal state, temperature matching.
//! - [`units`], [`horizon`]: Schwarzschild radial dynamics and the phase-space map.
//! - [`paw`]: composite constraint, kernel states, conditional evolution.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod coherent;
pub mod crossover;
pub mod error;
pub mod exec;
pub mod horizon;
pub mod linalg;
pub mod paw;
pub mod quadrature;
pub mod su11;
pub mod table;
pub mod two_mode;
pub mod units;

pub use coherent::{CoherentState, DiskPoint, HalfPlanePoint};
pub use error::{Error, Result};
pub use exec::Execution;
pub use su11::{HamiltonianXi, Su11Rep};
