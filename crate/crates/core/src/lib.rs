//! Qudit statevector simulation for non-destructive discrimination of
//! generalized Bell states.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`StateVector`] and [`DenseOperator`]: a dense register of `n` wires of
//!   dimension `d`, with strided application of small unitaries, projective
//!   measurement of a single wire and phase-insensitive comparison.
//! * [`gates`]: the clock and shift operators `Z_d`, `X_d`, the Fourier gate
//!   `H_d`, the C-SUM pair and generic ancilla-controlled `U`.
//! * [`bell`]: qubit and qudit Bell families indexed by phase and parities.
//! * [`discriminator`]: the phase and relative-parity circuits, run one fresh
//!   ancilla at a time, recovering the full Bell label while leaving the
//!   input intact.
//! * [`outsourcing`]: measurement of observables compatible with a unitary
//!   through a controlled-`U` onto an ancilla, separable decomposition,
//!   control reversal and closure of the Bell family under Fourier gates.
//! * [`netcost`]: qudit-movement and two-qudit gate tallies on star and
//!   linear networks, plus the disentangle/re-entangle baseline transform.
//!
//! Wire 0 is the most significant base-`d` digit of an amplitude index.
//! Ancillas are appended after the system wires.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod circuit;
pub mod discriminator;
mod error;
pub mod gates;
pub mod math;
pub mod netcost;
mod operator;
pub mod outsourcing;
mod state;

pub use bell::{BellIndex, QubitBellIndex, Sign};
pub use circuit::{Circuit, Step};
pub use error::{Error, Result};
pub use gates::Gate;
pub use math::Complex64;
pub use operator::{orthonormalize_columns, DenseOperator};
pub use state::{
    amplitude_cap, checked_len, set_amplitude_cap, MeasurementOutcome, StateVector,
    DEFAULT_AMPLITUDE_CAP,
};

/// Tolerance for construction-time checks (unitarity, normalization).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Tolerance for end-to-end assertions (fidelities, determinism).
pub const END_TO_END_TOL: f64 = 1e-10;
