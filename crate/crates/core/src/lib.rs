//! Cooling dynamics of a single damped harmonic mode coupled to a thermal bath.
//!
//! Three levels of description live side by side:
//!
//! * closed-form relaxation laws for temperature or occupation ([`analytic`]),
//! * a truncated Fock-space master-equation integrator with constant or
//!   time-dependent dissipator rates ([`lindblad`]) and its population-only
//!   birth–death restriction ([`ladder`]),
//! * thermal bath correlators, the four-point pairing decomposition and the
//!   evolved bath spectral density ([`correlators`]).
//!
//! Every numerical path is checked against an independent one: integrators
//! against the closed forms, the ladder against the full density matrix, and
//! pairings against brute-force traces. The [`verify`] module bundles those
//! checks into suites used by the command-line tool.

pub mod analytic;
pub mod cli;
pub mod correlators;
mod error;
pub mod ladder;
pub mod lindblad;
pub mod rk4;
pub mod scales;
pub mod trajectory;
pub mod verify;

pub use error::{Error, Result};
pub use scales::{Occupation, PhysicalScales, Temperature};
pub use trajectory::Trajectory;
