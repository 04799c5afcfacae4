//! Pauli-network and Clifford-circuit synthesis for limited-connectivity
//! qubit architectures.
//!
//! The crate is organized around a register tableau ([`cer::Cer`]) that
//! tracks, for every qubit, the Pauli rotation a single-qubit Z/X/Y rotation
//! would implement at the current point of a circuit. The synthesizers in
//! [`synth`] place target Pauli exponentials by compressing information into
//! small subgraphs using precomputed Clifford databases ([`db`]), and
//! [`clifford_synth`] resynthesizes Clifford circuits with the same
//! machinery. [`verify`] provides independent dense-matrix and tableau
//! oracles that back the whole test suite.

pub mod arch;
pub mod bench;
pub mod cer;
pub mod circuit;
pub mod clifford_synth;
pub mod db;
pub mod error;
pub mod mapping;
pub mod pauli;
pub mod qasm;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
