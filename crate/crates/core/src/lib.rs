//! Symbolic tools for stabilizer codes built on Pauli operators in
//! `(ζ, α)` form: coset partitions, syndromes, Clifford synthesis, encodings,
//! and fault-tolerant encoded gate actions, with a dense reference simulator
//! for cross-checks.

pub mod clifford;
pub mod code;
pub mod ftgate;
pub mod gf2;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod spinor;

pub use gf2::{BitString, Gf2Matrix, Solution};
pub use spinor::Spinor;
