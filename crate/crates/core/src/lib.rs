//! Quantum state trees and the tools around them.
//!
//! The crate covers tree-shaped state representations (sums and tensor
//! products over leaf qubits), conversion to and from multilinear formulas,
//! exact minimum tree sizes for manifestly orthogonal trees over GF(2)
//! cosets, compilation of orthogonal trees into circuits, and randomized
//! rank experiments on partition matrices.

pub mod builders;
pub mod circuit;
pub mod error;
pub mod formula;
pub mod gf2;
pub mod linalg;
pub mod mots;
pub mod rank;
pub mod rng;
mod sexpr;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Amplitude threshold used for normalization and support checks.
pub const TOL: f64 = 1e-9;

/// Default cap on the number of qubits for dense evaluation.
pub const DEFAULT_MAX_QUBITS: usize = 20;
