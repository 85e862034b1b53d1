//! LWE, RLWE and RGSW ciphertexts.

pub mod gadget;
pub mod lwe;
pub mod rgsw;
pub mod rlwe;

pub use gadget::GadgetVector;
pub use lwe::{decode, LweCiphertext, LweSecret};
pub use rgsw::{rgsw_rgsw_mul, rlwe_rgsw_mul, RgswCiphertext};
pub use rlwe::{encode, RlweCiphertext, RlweSecret};
