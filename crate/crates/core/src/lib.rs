//! Functional bootstrapping of LWE ciphertexts with look-up tables stored in
//! vectors of polynomials, rotated by monic monomial permutation matrices.

pub mod arith;
pub mod bootstrap;
pub mod ciphertext;
pub mod error;
pub mod mmpm;
pub mod noise;
pub mod params;
pub mod ring;
pub mod sampling;
pub mod serialize;
pub mod switching;

pub use error::{Error, Result};
