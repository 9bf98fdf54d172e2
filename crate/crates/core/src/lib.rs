//! Synthesis of two- and three-qubit unitaries into circuits over
//! `{RY, RZ, PH, CNOT}`.
//!
//! Qubit 1 is the most significant bit of a basis index throughout, and a
//! circuit's gate list is in time order.

pub mod batch;
pub mod circuit;
pub mod error;
pub mod library;
pub mod matfile;
pub mod numkit;
pub mod pauli;
pub mod selftest;
pub mod synth1q;
pub mod synth2q;
pub mod synth3q;

pub use error::{Error, Result};
pub use num_complex::Complex64;
