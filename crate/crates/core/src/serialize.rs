//! On-disk format: a nine-word header followed by the payload, every word a
//! little-endian `u64` and every coefficient one word.
//!
//! Header: `magic, version, kind, n, N, q, Q, t, B`. Fields that do not apply
//! to a kind are zero: an LWE ciphertext fills `n` and `q`, ring objects fill
//! `N` and `Q`, gadget-based objects fill `B`, and key-switching keys use `n`
//! for the target and `N` for the source dimension.

use std::io::{Read, Write};
use std::sync::Arc;

use crate::bootstrap::BootstrappingKeySet;
use crate::ciphertext::{GadgetVector, LweCiphertext, RgswCiphertext, RlweCiphertext};
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::switching::KeySwitchingKey;

pub const MAGIC: u64 = u64::from_le_bytes(*b"MMPMBOOT");
pub const VERSION: u64 = 1;
pub const HEADER_WORDS: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Kind {
    Lwe = 1,
    Rlwe = 2,
    Rgsw = 3,
    BootstrappingKey = 4,
    KeySwitchingKey = 5,
}

impl Kind {
    fn from_word(w: u64) -> Result<Self> {
        Ok(match w {
            1 => Self::Lwe,
            2 => Self::Rlwe,
            3 => Self::Rgsw,
            4 => Self::BootstrappingKey,
            5 => Self::KeySwitchingKey,
            _ => return Err(format_err(format!("unknown object kind {w}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub kind: Kind,
    pub n: u64,
    pub degree: u64,
    pub q: u64,
    pub big_q: u64,
    pub t: u64,
    pub base: u64,
}

impl Header {
    fn blank(kind: Kind) -> Self {
        Self {
            kind,
            n: 0,
            degree: 0,
            q: 0,
            big_q: 0,
            t: 0,
            base: 0,
        }
    }

    fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        let words = [MAGIC, VERSION, self.kind as u64, self.n, self.degree, self.q, self.big_q, self.t, self.base];
        write_words(w, &words)
    }

    pub fn read<R: Read>(r: &mut R) -> Result<Self> {
        let words = read_words(r, HEADER_WORDS as usize)?;
        if words[0] != MAGIC {
            return Err(format_err("bad magic".into()));
        }
        if words[1] != VERSION {
            return Err(format_err(format!("unsupported version {}", words[1])));
        }
        Ok(Self {
            kind: Kind::from_word(words[2])?,
            n: words[3],
            degree: words[4],
            q: words[5],
            big_q: words[6],
            t: words[7],
            base: words[8],
        })
    }

    fn expect(self, kind: Kind) -> Result<Self> {
        if self.kind != kind {
            return Err(format_err(format!("expected {kind:?}, found {:?}", self.kind)));
        }
        Ok(self)
    }

    fn ring(&self) -> Result<Arc<Ring>> {
        let degree = to_usize(self.degree)?;
        Ring::new_ntt(degree, self.big_q).or_else(|_| Ring::new(degree, self.big_q))
    }

    fn gadget(&self) -> Result<GadgetVector> {
        GadgetVector::new(self.base, self.big_q)
    }
}

fn format_err(msg: String) -> Error {
    Error::Format(msg)
}

fn to_usize(x: u64) -> Result<usize> {
    usize::try_from(x).map_err(|_| format_err(format!("{x} does not fit in usize")))
}

fn write_words<W: Write>(w: &mut W, words: &[u64]) -> Result<()> {
    for x in words {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

fn read_words<R: Read>(r: &mut R, len: usize) -> Result<Vec<u64>> {
    let mut buf = [0u8; 8];
    (0..len)
        .map(|_| {
            r.read_exact(&mut buf)?;
            Ok(u64::from_le_bytes(buf))
        })
        .collect()
}

fn write_lwe_body<W: Write>(w: &mut W, ct: &LweCiphertext) -> Result<()> {
    write_words(w, ct.a())?;
    write_words(w, &[ct.b()])
}

fn read_lwe_body<R: Read>(r: &mut R, n: usize, q: u64) -> Result<LweCiphertext> {
    let mut words = read_words(r, n + 1)?;
    let b = words.pop().expect("n + 1 words");
    LweCiphertext::new(words, b, q)
}

fn write_rlwe_body<W: Write>(w: &mut W, ct: &RlweCiphertext) -> Result<()> {
    write_words(w, ct.a().coeffs())?;
    write_words(w, ct.b().coeffs())
}

fn read_rlwe_body<R: Read>(r: &mut R, ring: &Arc<Ring>) -> Result<RlweCiphertext> {
    let a = ring.from_coeffs(read_words(r, ring.degree())?)?;
    let b = ring.from_coeffs(read_words(r, ring.degree())?)?;
    RlweCiphertext::new(a, b)
}

fn write_rgsw_body<W: Write>(w: &mut W, ct: &RgswCiphertext) -> Result<()> {
    ct.rows().iter().try_for_each(|row| write_rlwe_body(w, row))
}

fn read_rgsw_body<R: Read>(r: &mut R, ring: &Arc<Ring>, gadget: GadgetVector) -> Result<RgswCiphertext> {
    let rows = (0..2 * gadget.len())
        .map(|_| read_rlwe_body(r, ring))
        .collect::<Result<_>>()?;
    RgswCiphertext::from_rows(rows, gadget)
}

/// `t` is recorded for the reader's benefit; ciphertexts do not carry it.
pub fn write_lwe<W: Write>(w: &mut W, ct: &LweCiphertext, t: u64) -> Result<()> {
    Header {
        n: ct.dim() as u64,
        q: ct.modulus(),
        t,
        ..Header::blank(Kind::Lwe)
    }
    .write(w)?;
    write_lwe_body(w, ct)
}

pub fn read_lwe<R: Read>(r: &mut R) -> Result<(LweCiphertext, u64)> {
    let h = Header::read(r)?.expect(Kind::Lwe)?;
    Ok((read_lwe_body(r, to_usize(h.n)?, h.q)?, h.t))
}

pub fn write_rlwe<W: Write>(w: &mut W, ct: &RlweCiphertext, t_prime: u64) -> Result<()> {
    Header {
        degree: ct.ring().degree() as u64,
        big_q: ct.ring().modulus(),
        t: t_prime,
        ..Header::blank(Kind::Rlwe)
    }
    .write(w)?;
    write_rlwe_body(w, ct)
}

pub fn read_rlwe<R: Read>(r: &mut R) -> Result<(RlweCiphertext, u64)> {
    let h = Header::read(r)?.expect(Kind::Rlwe)?;
    Ok((read_rlwe_body(r, &h.ring()?)?, h.t))
}

pub fn write_rgsw<W: Write>(w: &mut W, ct: &RgswCiphertext) -> Result<()> {
    Header {
        degree: ct.ring().degree() as u64,
        big_q: ct.ring().modulus(),
        base: ct.gadget().base(),
        ..Header::blank(Kind::Rgsw)
    }
    .write(w)?;
    write_rgsw_body(w, ct)
}

pub fn read_rgsw<R: Read>(r: &mut R) -> Result<RgswCiphertext> {
    let h = Header::read(r)?.expect(Kind::Rgsw)?;
    read_rgsw_body(r, &h.ring()?, h.gadget()?)
}

/// Payload is `(ct_{k+}, ct_{k-})` for `k = 0..n`: `8·n·l_B·N` words.
pub fn write_bsk<W: Write>(w: &mut W, bsk: &BootstrappingKeySet) -> Result<()> {
    let first = bsk
        .keys()
        .first()
        .ok_or_else(|| format_err("cannot serialize an empty key set".into()))?;
    Header {
        n: bsk.len() as u64,
        degree: first[0].ring().degree() as u64,
        big_q: first[0].ring().modulus(),
        base: first[0].gadget().base(),
        ..Header::blank(Kind::BootstrappingKey)
    }
    .write(w)?;
    bsk.keys().iter().flatten().try_for_each(|k| write_rgsw_body(w, k))
}

pub fn read_bsk<R: Read>(r: &mut R) -> Result<BootstrappingKeySet> {
    let h = Header::read(r)?.expect(Kind::BootstrappingKey)?;
    let ring = h.ring()?;
    let gadget = h.gadget()?;
    let keys = (0..h.n)
        .map(|_| Ok([read_rgsw_body(r, &ring, gadget)?, read_rgsw_body(r, &ring, gadget)?]))
        .collect::<Result<_>>()?;
    BootstrappingKeySet::from_keys(keys)
}

/// Payload is the `N·l_KS·B_KS` entries in `[i][j][k]` order, `n + 1` words each.
pub fn write_ksk<W: Write>(w: &mut W, ksk: &KeySwitchingKey) -> Result<()> {
    Header {
        n: ksk.to_dim() as u64,
        degree: ksk.from_dim() as u64,
        big_q: ksk.modulus(),
        base: ksk.gadget().base(),
        ..Header::blank(Kind::KeySwitchingKey)
    }
    .write(w)?;
    ksk.entries().iter().try_for_each(|e| write_lwe_body(w, e))
}

pub fn read_ksk<R: Read>(r: &mut R) -> Result<KeySwitchingKey> {
    let h = Header::read(r)?.expect(Kind::KeySwitchingKey)?;
    let gadget = h.gadget()?;
    let (to_dim, from_dim) = (to_usize(h.n)?, to_usize(h.degree)?);
    let count = from_dim * gadget.len() * gadget.base() as usize;
    let entries = (0..count)
        .map(|_| read_lwe_body(r, to_dim, h.big_q))
        .collect::<Result<_>>()?;
    KeySwitchingKey::from_entries(gadget, from_dim, to_dim, h.big_q, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ciphertext::{LweSecret, RlweSecret};
    use crate::sampling::DiscreteGaussian;
    use crate::switching::gen_ksk;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: u64 = 134176769;

    #[test]
    fn round_trips_and_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let ring = Ring::new_ntt(16, Q).unwrap();
        let noise = DiscreteGaussian::new(3.2);
        let s = LweSecret::random(4, &mut rng);
        let z = RlweSecret::random(&ring, &mut rng);

        let lwe = s.encrypt(3, 8, 512, &noise, &mut rng).unwrap();
        let mut buf = Vec::new();
        write_lwe(&mut buf, &lwe, 8).unwrap();
        assert_eq!(buf.len() as u64, 8 * (HEADER_WORDS + 5));
        assert_eq!(read_lwe(&mut &buf[..]).unwrap(), (lwe, 8));

        let rlwe = z.encrypt(&(0..16).collect::<Vec<u64>>(), 17, &noise, &mut rng).unwrap();
        buf.clear();
        write_rlwe(&mut buf, &rlwe, 8).unwrap();
        assert_eq!(read_rlwe(&mut &buf[..]).unwrap(), (rlwe, 8));

        let gadget = GadgetVector::new(512, Q).unwrap();
        let bsk = BootstrappingKeySet::generate(&s, &z, gadget, &noise, &mut rng).unwrap();
        buf.clear();
        write_rgsw(&mut buf, &bsk.keys()[0][1]).unwrap();
        assert_eq!(read_rgsw(&mut &buf[..]).unwrap(), bsk.keys()[0][1]);
        buf.clear();
        write_bsk(&mut buf, &bsk).unwrap();
        assert_eq!(buf.len() as u64, 8 * (HEADER_WORDS + bsk.word_count()));
        assert_eq!(read_bsk(&mut &buf[..]).unwrap(), bsk);

        let ksk = gen_ksk(&z, &s, GadgetVector::new(25, Q).unwrap(), &noise, &mut rng).unwrap();
        buf.clear();
        write_ksk(&mut buf, &ksk).unwrap();
        assert_eq!(buf.len() as u64, 8 * (HEADER_WORDS + ksk.word_count()));
        assert_eq!(read_ksk(&mut &buf[..]).unwrap(), ksk);
    }

    #[test]
    fn rejects_corrupt_input() {
        let ct = LweCiphertext::trivial(1, 4, 3, 64);
        let mut buf = Vec::new();
        write_lwe(&mut buf, &ct, 4).unwrap();
        assert!(matches!(read_rlwe(&mut &buf[..]), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[0] ^= 1;
        assert!(matches!(read_lwe(&mut &bad[..]), Err(Error::Format(_))));
        assert!(matches!(read_lwe(&mut &buf[..buf.len() - 1]), Err(Error::Io(_))));
        // A coefficient outside [0, q).
        let mut big = buf.clone();
        let at = 8 * HEADER_WORDS as usize;
        big[at..at + 8].copy_from_slice(&1000u64.to_le_bytes());
        assert!(read_lwe(&mut &big[..]).is_err());
    }
}
