// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Hash-and-sign: message hashing, signing and verification.
//!
//! The target is `H(H(msg) ‖ salt)`: SHA3-256 of the message, then
//! SHAKE256 over the digest, the salt and a domain tag, read out as `m`
//! field elements.

use alloc::vec;

use rand_core::RngCore;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Digest, Sha3_256, Shake256};

use crate::central::{Inversion, InversionFailure};
use crate::error::{Error, Result};
use crate::expander::RngSource;
use crate::field::Field;
use crate::keypair::{PublicKey, SecretKey};
use crate::linalg::FieldVector;
use crate::params::VdooParams;

pub const SALT_LEN: usize = 16;
pub const DIGEST_LEN: usize = 32;
/// Signing gives up after this many salts.
pub const MAX_SIGN_ATTEMPTS: usize = 256;
pub const HASH_DOMAIN: &[u8] = b"VDOO-H";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub s: FieldVector,
    pub salt: [u8; SALT_LEN],
}

/// Incremental SHA3-256 over the message.
#[derive(Clone, Default)]
pub struct MessageHasher(Sha3_256);

impl MessageHasher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, data: &[u8]) {
        Digest::update(&mut self.0, data);
    }

    pub fn finalize(self) -> [u8; DIGEST_LEN] {
        self.0.finalize().into()
    }
}

pub fn message_digest(msg: &[u8]) -> [u8; DIGEST_LEN] {
    Sha3_256::digest(msg).into()
}

/// Byte length of the outer expansion: `⌈m·log2(q)/8⌉`.
pub fn target_len(params: &VdooParams) -> usize {
    (params.m() * params.field().bits() as usize).div_ceil(8)
}

/// The outer hash of a message digest and salt, as `m` field elements.
pub fn hash_digest_to_field(digest: &[u8; DIGEST_LEN], salt: &[u8; SALT_LEN], params: &VdooParams) -> FieldVector {
    let mut xof = Shake256::default();
    xof.update(digest);
    xof.update(salt);
    xof.update(HASH_DOMAIN);
    let mut bytes = vec![0u8; target_len(params)];
    xof.finalize_xof().read(&mut bytes);

    let field = params.field();
    let m = params.m();
    let elements = match field {
        Field::Gf256 => bytes,
        Field::Gf16 => bytes.iter().flat_map(|&b| [b & 0x0f, b >> 4]).take(m).collect(),
    };
    FieldVector::from_raw(field, elements)
}

/// `H(H(msg) ‖ salt)` as `m` field elements.
pub fn hash_to_field(msg: &[u8], salt: &[u8; SALT_LEN], params: &VdooParams) -> FieldVector {
    hash_digest_to_field(&message_digest(msg), salt, params)
}

/// A signature plus the number of salts it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigningOutcome {
    pub signature: Signature,
    pub attempts: usize,
    /// Failed attempts by cause: zero diagonal slope, first oil, second oil.
    pub failures: [usize; 3],
}

/// Signs a precomputed message digest.
pub fn sign_digest_with_stats<R: RngCore + ?Sized>(
    sk: &SecretKey,
    digest: &[u8; DIGEST_LEN],
    rng: &mut R,
) -> Result<SigningOutcome> {
    let params = sk.params();
    let mut failures = [0usize; 3];
    for attempt in 1..=MAX_SIGN_ATTEMPTS {
        let mut salt = [0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let target = hash_digest_to_field(digest, &salt, params);
        let t = sk.inv_s().mul_vec(&target.add(sk.a())?)?;
        let inversion = sk.central().invert(&t, &mut RngSource::new(&mut *rng))?;
        match inversion {
            Inversion::Solved(y) => {
                let s = sk.inv_t().mul_vec(&y.add(sk.b())?)?;
                return Ok(SigningOutcome {
                    signature: Signature { s, salt },
                    attempts: attempt,
                    failures,
                });
            }
            Inversion::Failed(cause) => {
                let slot = match cause {
                    InversionFailure::ZeroDiagonalCoefficient { .. } => 0,
                    InversionFailure::SingularFirstOil => 1,
                    InversionFailure::SingularSecondOil => 2,
                };
                failures[slot] += 1;
            }
        }
    }
    Err(Error::RetryLimit(MAX_SIGN_ATTEMPTS))
}

pub fn sign_digest<R: RngCore + ?Sized>(sk: &SecretKey, digest: &[u8; DIGEST_LEN], rng: &mut R) -> Result<Signature> {
    sign_digest_with_stats(sk, digest, rng).map(|o| o.signature)
}

/// Signs `msg`, drawing a fresh salt and fresh vinegars per attempt.
pub fn sign<R: RngCore + ?Sized>(sk: &SecretKey, msg: &[u8], rng: &mut R) -> Result<Signature> {
    sign_digest(sk, &message_digest(msg), rng)
}

pub fn verify_digest(pk: &PublicKey, digest: &[u8; DIGEST_LEN], sig: &Signature) -> bool {
    let params = pk.params();
    if sig.s.field() != params.field() || sig.s.len() != params.n() {
        return false;
    }
    match pk.evaluate(&sig.s) {
        Ok(image) => image == hash_digest_to_field(digest, &sig.salt, params),
        Err(_) => false,
    }
}

/// Accepts iff `P(s) = H(H(msg) ‖ salt)`.
pub fn verify(pk: &PublicKey, msg: &[u8], sig: &Signature) -> bool {
    verify_digest(pk, &message_digest(msg), sig)
}

/// [`verify`] over raw parts; any length or range mismatch rejects.
pub fn verify_parts(pk: &PublicKey, msg: &[u8], s: &[u8], salt: &[u8]) -> bool {
    let Ok(salt) = <[u8; SALT_LEN]>::try_from(salt) else {
        return false;
    };
    let Ok(s) = FieldVector::from_elements(pk.params().field(), s.to_vec()) else {
        return false;
    };
    verify(pk, msg, &Signature { s, salt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keypair::{keygen, KeygenMode};
    use alloc::collections::BTreeSet;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> VdooParams {
        VdooParams::new(16, 8, 4, 4, 4).unwrap()
    }

    #[test]
    fn hash_is_deterministic_and_sized() {
        let p = toy();
        let a = hash_to_field(b"msg", &[1; 16], &p);
        assert_eq!(a, hash_to_field(b"msg", &[1; 16], &p));
        assert_ne!(a, hash_to_field(b"msg", &[2; 16], &p));
        assert_eq!(a.len(), p.m());
        let odd = VdooParams::new(16, 4, 1, 2, 2).unwrap();
        assert_eq!(target_len(&odd), 3);
        assert_eq!(hash_to_field(b"", &[0; 16], &odd).len(), 5);
    }

    #[test]
    fn streaming_digest_matches() {
        let mut h = MessageHasher::new();
        h.update(b"hello ");
        h.update(b"world");
        assert_eq!(h.finalize(), message_digest(b"hello world"));
    }

    #[test]
    fn hash_coordinates_uniform_over_salts() {
        // Chi-square over 10^4 salts, pooled across coordinates, both fields.
        for q in [16u32, 256] {
            let p = VdooParams::new(q, 8, 4, 4, 4).unwrap();
            let mut counts = vec![0u64; q as usize];
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..10_000 {
                let salt: [u8; 16] = rng.random();
                for &e in hash_to_field(b"fixed", &salt, &p).as_slice() {
                    counts[e as usize] += 1;
                }
            }
            let total: u64 = counts.iter().sum();
            let expected = total as f64 / q as f64;
            let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            let dof = (q - 1) as f64;
            // Roughly the 0.9999 quantile.
            let bound = dof + 6.0 * (2.0 * dof).sqrt();
            assert!(chi2 < bound, "q={q}: chi2 {chi2} >= {bound}");
        }
    }

    #[test]
    fn sign_verify_roundtrip_both_fields() {
        for (q, mode) in [(16, KeygenMode::Affine), (256, KeygenMode::Homogeneous)] {
            let p = VdooParams::new(q, 8, 4, 4, 4).unwrap();
            let (pk, sk) = keygen(&p, &[9; 32], mode).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for i in 0..50u32 {
                let msg = i.to_le_bytes();
                let sig = sign(&sk, &msg, &mut rng).unwrap();
                assert!(verify(&pk, &msg, &sig));
                assert_eq!(pk.evaluate(&sig.s).unwrap(), hash_to_field(&msg, &sig.salt, &p));
            }
        }
    }

    #[test]
    fn tampering_rejects() {
        let p = toy();
        let (pk, sk) = keygen(&p, &[10; 32], KeygenMode::Affine).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let msg = b"tamper me".to_vec();
        let sig = sign(&sk, &msg, &mut rng).unwrap();
        for _ in 0..1000 {
            let mut s = sig.s.as_slice().to_vec();
            let mut salt = sig.salt.to_vec();
            let mut m = msg.clone();
            match rng.random_range(0..3) {
                0 => {
                    let i = rng.random_range(0..s.len());
                    s[i] ^= rng.random_range(1..16);
                }
                1 => salt[rng.random_range(0..SALT_LEN)] ^= rng.random_range(1..=255),
                _ => {
                    let i = rng.random_range(0..m.len());
                    m[i] ^= rng.random_range(1..=255);
                }
            }
            assert!(!verify_parts(&pk, &m, &s, &salt));
        }
        assert!(verify_parts(&pk, &msg, sig.s.as_slice(), &sig.salt));
        assert!(!verify_parts(&pk, &msg, sig.s.as_slice(), &sig.salt[..15]));
        assert!(!verify_parts(&pk, &msg, &sig.s.as_slice()[1..], &sig.salt));
    }

    #[test]
    fn salts_are_fresh() {
        let p = VdooParams::new(16, 4, 2, 2, 2).unwrap();
        let (_, sk) = keygen(&p, &[11; 32], KeygenMode::Affine).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let salts: BTreeSet<[u8; 16]> = (0..10_000)
            .map(|_| sign(&sk, b"same", &mut rng).unwrap().salt)
            .collect();
        assert_eq!(salts.len(), 10_000);
    }

    #[test]
    fn stats_count_failures() {
        let p = VdooParams::new(16, 2, 2, 2, 2).unwrap();
        let (pk, sk) = keygen(&p, &[12; 32], KeygenMode::Affine).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let outcomes: Vec<_> = (0..200)
            .map(|_| sign_digest_with_stats(&sk, &[0; 32], &mut rng).unwrap())
            .collect();
        for o in &outcomes {
            assert_eq!(o.attempts, o.failures.iter().sum::<usize>() + 1);
            assert!(verify_digest(&pk, &[0; 32], &o.signature));
        }
        assert!(outcomes.iter().any(|o| o.attempts > 1));
    }
}
