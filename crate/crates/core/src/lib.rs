//! Quasi-cyclic and quasi-orthogonal error-correcting codes over small qubit
//! registers.
//!
//! The crate builds the four preset code families (`[8,3,3]`, `[10,4,3]`,
//! `[13,1,5]` and `[29,1,11]`), encodes logical bit patterns, injects
//! bit-flip errors, simulates the resulting Clifford circuits on two
//! independent backends, decodes every measured shot and summarizes the
//! resulting histograms.
//!
//! Module map:
//!
//! - [`bits`]: packed bit-vectors shared by every other module.
//! - [`pauli`]: exact Pauli algebra with phase tracking.
//! - [`groups`]: dense matrices, Hadamard layers, ε-perturbed operators and
//!   cyclic group generation.
//! - [`qoccc`]: 2D quasi-orthogonal complementary arrays and amplitude states.
//! - [`aqecc`]: quasi-cyclic code construction, distance certification and
//!   minimum-distance decoding.
//! - [`sim`]: stabilizer tableau and state-vector simulators.
//! - [`experiments`]: end-to-end case pipelines and exhaustive sweeps.
//! - [`stats`]: count statistics and reference-table comparison.
//! - [`cli`]: the `qgqec` command-line front end.

pub mod aqecc;
pub mod bits;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod groups;
pub mod json;
pub mod pauli;
pub mod qoccc;
pub mod sim;
pub mod stats;

pub use bits::Bits;
pub use error::{Error, Result};
