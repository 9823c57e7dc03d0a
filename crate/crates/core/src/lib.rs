//! Finite-temperature detection of quantum critical points in spin-1/2 chains.
//!
//! Two neighbouring spins of a thermal chain serve as the entangled resource of
//! a teleportation protocol, and a third adjacent spin is the input state. The
//! efficiency of that protocol (maximum mean fidelity, minimum mean trace
//! distance) changes abruptly across quantum critical points; tracking the
//! extrema of its derivatives at several temperatures and extrapolating to
//! `kT = 0` locates the critical point.
//!
//! Modules:
//! - [`qmat`]: small dense complex-matrix toolkit (Pauli and Bell operators,
//!   tensor products, partial traces, fidelity, trace distance).
//! - [`teleport`]: the protocol itself, both as a brute-force engine and as
//!   closed-form efficiency measures of the pair correlators.
//! - [`chains`]: XXZ and XY Hamiltonians, symmetry-resolved exact
//!   diagonalization, free-fermion correlators, and the XXZ critical fields.
//! - [`detector`]: parameter scans, finite differences, extremum tracking,
//!   crossing points, and extrapolation to zero temperature.
//! - [`cli`]: configuration, CSV output and the verification suites behind
//!   the `teleqcp` binary.

// `!(x >= 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chains;
pub mod cli;
pub mod detector;
pub mod error;
pub mod qmat;
pub mod teleport;

pub use error::{Error, Result};
