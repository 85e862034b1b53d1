use std::sync::Arc;

use rand::Rng;

use crate::ciphertext::{GadgetVector, LweSecret, RgswCiphertext, RlweSecret};
use crate::error::{config, Result};
use crate::params::ParameterSet;
use crate::ring::Ring;
use crate::sampling::DiscreteGaussian;
use crate::switching::{gen_ksk, KeySwitchingKey};

/// For every LWE secret coordinate `s_k`, RGSW encryptions of
/// `s_{k+} = [s_k = 1]` and `s_{k-} = [s_k = -1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrappingKeySet {
    keys: Vec<[RgswCiphertext; 2]>,
}

impl BootstrappingKeySet {
    pub fn generate<R: Rng + ?Sized>(
        s: &LweSecret,
        z: &RlweSecret,
        gadget: GadgetVector,
        noise: &DiscreteGaussian,
        rng: &mut R,
    ) -> Result<Self> {
        let ring = z.ring();
        let bit = |b: bool| if b { ring.one() } else { ring.zero() };
        let keys = s
            .coeffs()
            .iter()
            .map(|&sk| {
                Ok([
                    RgswCiphertext::encrypt(&bit(sk == 1), z, gadget, noise, rng)?,
                    RgswCiphertext::encrypt(&bit(sk == -1), z, gadget, noise, rng)?,
                ])
            })
            .collect::<Result<_>>()?;
        Ok(Self { keys })
    }

    pub fn from_keys(keys: Vec<[RgswCiphertext; 2]>) -> Result<Self> {
        if let Some(first) = keys.first() {
            let ring = first[0].ring().clone();
            let gadget = first[0].gadget();
            if keys.iter().flatten().any(|k| *k.ring() != ring || k.gadget() != gadget) {
                return Err(config!("bootstrapping keys with inconsistent ring or gadget"));
            }
        }
        Ok(Self { keys })
    }

    /// `(ct_{k+}, ct_{k-})`.
    pub fn get(&self, k: usize) -> (&RgswCiphertext, &RgswCiphertext) {
        (&self.keys[k][0], &self.keys[k][1])
    }

    pub fn keys(&self) -> &[[RgswCiphertext; 2]] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Stored size in 64-bit words: `2n` ciphertexts of `2l_B` rows of two
    /// length-`N` polynomials, i.e. `8·n·l_B·N`.
    pub fn word_count(&self) -> u64 {
        self.keys
            .iter()
            .flatten()
            .map(|k| 2 * k.rows().len() as u64 * k.ring().degree() as u64)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecretKeySet {
    pub lwe: LweSecret,
    pub ring: RlweSecret,
}

/// Public evaluation material: bootstrapping and key-switching keys.
#[derive(Debug, Clone)]
pub struct EvaluationKeySet {
    pub params: ParameterSet,
    pub ring: Arc<Ring>,
    pub bsk: BootstrappingKeySet,
    pub ksk: KeySwitchingKey,
}

/// Samples `s`, `z`, the bootstrapping keys and the key-switching key, in
/// that order, from `rng`.
pub fn keygen<R: Rng + ?Sized>(params: &ParameterSet, rng: &mut R) -> Result<(SecretKeySet, EvaluationKeySet)> {
    params.validate()?;
    let ring = params.ring()?;
    let lwe = LweSecret::random(params.n, rng);
    let z = RlweSecret::random(&ring, rng);
    let bsk = BootstrappingKeySet::generate(
        &lwe,
        &z,
        params.gadget()?,
        &DiscreteGaussian::new(params.sigma_boot),
        rng,
    )?;
    let ksk = gen_ksk(&z, &lwe, params.ks_gadget()?, &DiscreteGaussian::new(params.sigma_ks), rng)?;
    Ok((
        SecretKeySet { lwe, ring: z },
        EvaluationKeySet {
            params: params.clone(),
            ring,
            bsk,
            ksk,
        },
    ))
}
