//! Forward quantum Markov chains of the Ising model on semi-infinite Cayley
//! trees.
//!
//! The crate builds the finite-volume states `φ^(n)` attached to boundary
//! conditions `(w0, {h_x})`, analyzes the planar recursion that governs the
//! level fields, and certifies the phase transition at `θ_c = (k+1)/(k-1)`
//! through the spectral gap of a 2×2 transfer matrix, cross-checked by exact
//! enumeration of spin configurations on small volumes.
//!
//! Module map:
//!
//! - [`tree`] — coordinates and combinatorics of the rooted tree `Γ^k`;
//! - [`algebra`] — the 2×2 Pauli algebra, its diagonal subalgebra, and the
//!   conditional expectation onto it;
//! - [`dynamics`] — the ratio map `g_θ`, the planar map `f`, fixed points,
//!   invariant lines, and trajectory classification;
//! - [`qmc`] — edge kernels, boundary conditions, the exact-enumeration
//!   oracle, and state evaluation;
//! - [`transition`] — the transfer matrix, leaf magnetizations, and the
//!   quasi-equivalence gap report.
//!
//! The crate is `no_std` (with `alloc`); all IO, parsing of command lines,
//! and file formats live in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod dynamics;
mod error;
pub(crate) mod math;
pub mod qmc;
pub mod transition;
pub mod tree;

pub use error::Error;

/// Convenience alias for fallible operations in this crate.
pub type Result<T> = core::result::Result<T, Error>;
