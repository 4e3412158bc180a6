//! Numerical kernels for maximal CHSH correlations of qubit pairs inside
//! many-body states.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure arithmetic:
//!
//! - [`qstate`]: pure states, two-qubit reduced density operators, partial
//!   traces and Pauli correlation matrices.
//! - [`random`]: counter-based random pure states (complex Haar or real).
//! - [`chsh`]: the closed-form maximal Bell value, a direction-search oracle,
//!   tripartite and N-party monogamy reports, and the Wootters concurrence.
//! - [`spinchain`]: the dimerized Heisenberg ring restricted to the
//!   zero-magnetization sector, power/Lanczos ground-state solvers,
//!   correlators and J2/J1 sweeps.
//! - [`sampling`]: streaming statistics of the summed squared Bell values of
//!   random states.
//!
//! Basis convention: computational basis index bit `k` holds qubit `k`, qubit
//! 0 is the least significant bit. Qubits and sites are 0-based here.
//!
//! Parallel execution is abstracted by [`exec::Executor`]; this crate ships a
//! serial implementation and the `bellmono` crate adds a rayon one that
//! produces bit-identical results.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod chsh;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod qstate;
pub mod random;
pub mod sampling;
pub mod spinchain;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// 2√2, the largest CHSH expectation allowed by quantum mechanics.
pub const TSIRELSON: f64 = 2.0 * core::f64::consts::SQRT_2;

/// Absolute slack used when asserting the monogamy and Tsirelson bounds.
pub const BOUND_TOL: f64 = 1e-9;
