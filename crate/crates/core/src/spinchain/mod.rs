//! Dimerized Heisenberg ring
//! `H = Σᵢ J1 σ⃗₂ᵢ₋₁·σ⃗₂ᵢ + J2 σ⃗₂ᵢ·σ⃗₂ᵢ₊₁` with periodic boundary, solved in
//! the zero-magnetization sector.
//!
//! Sites are 0-based: the J1 bonds are `(2k, 2k+1)` and the J2 bonds
//! `(2k+1, 2k+2 mod N)`.

mod hamiltonian;
mod observables;
mod sector;
mod solver;
mod sweep;

pub use hamiltonian::{ChainSpec, DimerizedHamiltonian, FullSpaceHamiltonian, MAX_SITES};
pub use observables::{pair_bell, DistanceEntry, DistanceScan, PairBell, CLOSED_FORM_TOL};
pub use sector::{binomial, SectorBasis};
pub use solver::{
    ground_state, lanczos_lowest, neel_start, power_iteration, Eigenpair, GroundFlags, GroundState,
    SolverKind, SolverOptions,
};
pub use sweep::{
    default_grid, peak_derivative_near, sweep, uniform_grid, SweepOptions, SweepPoint, SweepResult,
};
