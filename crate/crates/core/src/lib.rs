//! Workbench for rational conformal field theory modular data.
//!
//! The crate builds `S` and `T` matrices from a fusion ring together with
//! exact conformal weights, enumerates every non-negative integer coupling
//! matrix commuting with them, and classifies the resulting modular
//! invariants (permutation, simple current, type I/II, heterotic). Around
//! that core sit the graph side (A-D-E and tadpole graphs, nimreps,
//! spectrum matching, orbifold quotients) and the simple-current extension
//! calculus (admissibility, locality, the ℤ_n family, branching
//! restriction).

pub mod catalog;
pub mod classify;
pub mod commutant;
pub mod enumerate;
pub mod error;
pub mod extension;
pub mod fusion;
pub mod gram;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod modular;
pub mod nimrep;
pub mod par;
pub mod render;
pub mod spin;

pub use error::{Error, Result};
pub use fusion::FusionRing;
pub use matrix::IntMatrix;
pub use modular::{ModelSpec, ModularData};
pub use spin::SpinAssignment;
