// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Key generation and key-size accounting.

use crate::central::{central_coefficient_count, diagonal_layer_elements, oil_layer_elements, CentralMap};
use crate::error::{Error, Result};
use crate::expander::Expander;
use crate::linalg::{random_invertible_matrix, FieldMatrix, FieldVector};
use crate::packing::packed_len;
use crate::params::VdooParams;
use crate::quadratic::{compose_affine, AffineMap, MapEvaluator, PolynomialMap, QuadraticPolynomial};
use crate::signer::SALT_LEN;

pub const SEED_LEN: usize = 32;

/// Domain labels of the per-component seed streams.
pub mod labels {
    pub const S: &[u8] = b"S";
    pub const T: &[u8] = b"T";
    pub const A: &[u8] = b"a";
    pub const B: &[u8] = b"b";
    pub const F: &[u8] = b"F";
}

/// Whether the secret affine maps carry random offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KeygenMode {
    /// Random offsets `a` and `b`; the public map has linear and constant terms.
    #[default]
    Affine,
    /// `a = b = 0`; the public map is homogeneous.
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: VdooParams,
    map: PolynomialMap,
    evaluator: MapEvaluator,
}

impl PublicKey {
    pub fn new(params: VdooParams, map: PolynomialMap) -> Result<Self> {
        if map.field() != params.field() {
            return Err(Error::FieldMismatch {
                left: params.field().order(),
                right: map.field().order(),
            });
        }
        if map.num_vars() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: params.n(),
                found: map.num_vars(),
            });
        }
        if map.num_polys() != params.m() {
            return Err(Error::DimensionMismatch {
                expected: params.m(),
                found: map.num_polys(),
            });
        }
        let evaluator = MapEvaluator::new(&map);
        Ok(Self { params, map, evaluator })
    }

    pub fn params(&self) -> &VdooParams {
        &self.params
    }

    pub fn map(&self) -> &PolynomialMap {
        &self.map
    }

    /// `P(x)`.
    pub fn evaluate(&self, x: &FieldVector) -> Result<FieldVector> {
        self.evaluator.evaluate(x)
    }

    /// Stored field elements: `m(n+1)(n+2)/2`.
    pub fn stored_slots(&self) -> usize {
        self.map.polys().iter().map(|p| p.coefficients().count()).sum()
    }
}

/// The trapdoor: inverses of `S` and `T`, their offsets, and `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    params: VdooParams,
    mode: KeygenMode,
    seed: [u8; SEED_LEN],
    inv_s: FieldMatrix,
    a: FieldVector,
    inv_t: FieldMatrix,
    b: FieldVector,
    central: CentralMap,
}

impl SecretKey {
    /// Assembles a key from stored components, checking shapes.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        params: VdooParams,
        mode: KeygenMode,
        seed: [u8; SEED_LEN],
        inv_s: FieldMatrix,
        a: FieldVector,
        inv_t: FieldMatrix,
        b: FieldVector,
        central: CentralMap,
    ) -> Result<Self> {
        let (m, n) = (params.m(), params.n());
        for (found, expected) in [
            (inv_s.rows(), m),
            (inv_s.cols(), m),
            (a.len(), m),
            (inv_t.rows(), n),
            (inv_t.cols(), n),
            (b.len(), n),
        ] {
            if found != expected {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        if *central.params() != params {
            return Err(Error::InvalidParams(
                "central map parameters differ from key parameters",
            ));
        }
        Ok(Self {
            params,
            mode,
            seed,
            inv_s,
            a,
            inv_t,
            b,
            central,
        })
    }

    /// Re-expands a secret key from its seed.
    pub fn from_seed(params: &VdooParams, seed: &[u8; SEED_LEN], mode: KeygenMode) -> Self {
        expand(params, seed, mode).1
    }

    pub fn params(&self) -> &VdooParams {
        &self.params
    }

    pub fn mode(&self) -> KeygenMode {
        self.mode
    }

    pub fn seed(&self) -> &[u8; SEED_LEN] {
        &self.seed
    }

    pub fn inv_s(&self) -> &FieldMatrix {
        &self.inv_s
    }

    pub fn a(&self) -> &FieldVector {
        &self.a
    }

    pub fn inv_t(&self) -> &FieldMatrix {
        &self.inv_t
    }

    pub fn b(&self) -> &FieldVector {
        &self.b
    }

    pub fn central(&self) -> &CentralMap {
        &self.central
    }

    /// Stored field elements of the expanded form: `m² + m + n² + n + |F|`.
    pub fn stored_slots(&self) -> usize {
        self.inv_s.as_slice().len()
            + self.a.len()
            + self.inv_t.as_slice().len()
            + self.b.len()
            + self.central.stored_slots()
    }
}

fn expand(params: &VdooParams, seed: &[u8; SEED_LEN], mode: KeygenMode) -> (PolynomialMap, SecretKey) {
    let field = params.field();
    let (m, n) = (params.m(), params.n());
    let s = random_invertible_matrix(field, m, &mut Expander::new(seed, labels::S));
    let t = random_invertible_matrix(field, n, &mut Expander::new(seed, labels::T));
    let (a, b) = match mode {
        KeygenMode::Affine => (
            FieldVector::random(field, m, &mut Expander::new(seed, labels::A)),
            FieldVector::random(field, n, &mut Expander::new(seed, labels::B)),
        ),
        KeygenMode::Homogeneous => (FieldVector::zeros(field, m), FieldVector::zeros(field, n)),
    };
    let inv_s = s.inverse().ok().flatten().expect("sampled invertible");
    let inv_t = t.inverse().ok().flatten().expect("sampled invertible");
    let central = CentralMap::generate(params, &mut Expander::new(seed, labels::F));

    let s_map = AffineMap::new(s, a.clone()).expect("shapes match");
    let t_map = AffineMap::new(t, b.clone()).expect("shapes match");
    let public = compose_affine(&central.to_polynomial_map(), &s_map, &t_map).expect("shapes match");
    let sk = SecretKey {
        params: *params,
        mode,
        seed: *seed,
        inv_s,
        a,
        inv_t,
        b,
        central,
    };
    (public, sk)
}

/// Deterministic key generation from a 32-byte seed.
///
/// `S` and `T` are drawn from independent SHAKE256 streams until invertible,
/// then `P = S ∘ F ∘ T` is expanded symbolically.
pub fn keygen(params: &VdooParams, seed: &[u8; SEED_LEN], mode: KeygenMode) -> Result<(PublicKey, SecretKey)> {
    let (public, sk) = expand(params, seed, mode);
    Ok((PublicKey::new(*params, public)?, sk))
}

/// Element and byte counts implied by the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SizeReport {
    pub diagonal_elements: usize,
    pub first_oil_elements: usize,
    pub second_oil_elements: usize,
    pub central_elements: usize,
    /// `m(m+1)`: matrix plus offset.
    pub s_elements: usize,
    /// `n(n+1)`.
    pub t_elements: usize,
    /// `m(n+1)(n+2)/2`.
    pub public_key_elements: usize,
    pub secret_key_elements: usize,
    pub public_key_bytes: usize,
    pub secret_key_bytes: usize,
    pub signature_elements: usize,
    /// Packed `s` plus the salt.
    pub signature_bytes: usize,
}

pub fn expected_sizes(params: &VdooParams) -> SizeReport {
    let field = params.field();
    let (v, d, o1, o2, m, n) = (params.v(), params.d(), params.o1(), params.o2(), params.m(), params.n());
    // The first diagonal polynomial has n - m = v vinegars.
    let diagonal_elements = diagonal_layer_elements(n - m, d);
    let first_oil_elements = oil_layer_elements(v + d, o1);
    let second_oil_elements = oil_layer_elements(v + d + o1, o2);
    let central_elements = diagonal_elements + first_oil_elements + second_oil_elements;
    debug_assert_eq!(central_elements, central_coefficient_count(params));
    let s_elements = m * (m + 1);
    let t_elements = n * (n + 1);
    let public_key_elements = m * QuadraticPolynomial::coefficient_count(n);
    let secret_key_elements = s_elements + t_elements + central_elements;
    SizeReport {
        diagonal_elements,
        first_oil_elements,
        second_oil_elements,
        central_elements,
        s_elements,
        t_elements,
        public_key_elements,
        secret_key_elements,
        public_key_bytes: packed_len(field, public_key_elements),
        secret_key_bytes: packed_len(field, secret_key_elements),
        signature_elements: n,
        signature_bytes: packed_len(field, n) + SALT_LEN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::RngSource;
    use crate::params::SecurityLevel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy() -> VdooParams {
        VdooParams::new(16, 6, 3, 3, 3).unwrap()
    }

    #[test]
    fn deterministic_from_seed() {
        let p = toy();
        let (pk1, sk1) = keygen(&p, &[1; 32], KeygenMode::Affine).unwrap();
        let (pk2, sk2) = keygen(&p, &[1; 32], KeygenMode::Affine).unwrap();
        assert_eq!(pk1, pk2);
        assert_eq!(sk1, sk2);
        let (pk3, _) = keygen(&p, &[2; 32], KeygenMode::Affine).unwrap();
        assert_ne!(pk1, pk3);
        assert_eq!(SecretKey::from_seed(&p, &[1; 32], KeygenMode::Affine), sk1);
    }

    #[test]
    fn public_map_is_composition() {
        let p = toy();
        let field = p.field();
        let (pk, sk) = keygen(&p, &[3; 32], KeygenMode::Affine).unwrap();
        assert!(!pk.map().is_homogeneous());
        let s = sk.inv_s().inverse().unwrap().unwrap();
        let t = sk.inv_t().inverse().unwrap().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut src = RngSource::new(&mut rng);
        for _ in 0..10_000 {
            let x = FieldVector::random(field, p.n(), &mut src);
            let tx = t.mul_vec(&x).unwrap().add(sk.b()).unwrap();
            let fx = sk.central().evaluate(&tx).unwrap();
            let expected = s.mul_vec(&fx).unwrap().add(sk.a()).unwrap();
            assert_eq!(pk.evaluate(&x).unwrap(), expected);
        }
    }

    #[test]
    fn homogeneous_mode() {
        let (pk, sk) = keygen(&toy(), &[4; 32], KeygenMode::Homogeneous).unwrap();
        assert!(pk.map().is_homogeneous());
        assert!(sk.a().is_zero() && sk.b().is_zero());
    }

    #[test]
    fn sizes_match_slot_counts() {
        let p = toy();
        let (pk, sk) = keygen(&p, &[5; 32], KeygenMode::Affine).unwrap();
        let sizes = expected_sizes(&p);
        assert_eq!(pk.stored_slots(), sizes.public_key_elements);
        assert_eq!(sk.stored_slots(), sizes.secret_key_elements);
        assert_eq!(sk.central().stored_slots(), sizes.central_elements);
    }

    #[test]
    fn level_one_sizes() {
        let sizes = expected_sizes(&SecurityLevel::L1.params());
        assert_eq!(sizes.signature_bytes, 96);
        assert_eq!(sizes.public_key_elements, 1_304_100);
        assert_eq!(sizes.public_key_bytes, 652_050);
        assert_eq!(sizes.s_elements, 100 * 101);
        assert_eq!(sizes.t_elements, 160 * 161);
        assert_eq!(expected_sizes(&SecurityLevel::L3.params()).signature_bytes, 226);
        assert_eq!(expected_sizes(&SecurityLevel::L5.params()).signature_bytes, 316);
    }
}
