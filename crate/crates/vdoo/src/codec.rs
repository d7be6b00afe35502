// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Binary wire format.
//!
//! Every object starts with a 7-byte header:
//!
//! | Offset | Size | Field |
//! |--------|------|-------|
//! | 0 | 4 | magic `"VDOO"` |
//! | 4 | 1 | format version ([`FORMAT_VERSION`]) |
//! | 5 | 1 | level: 1, 3, 5, or 0 for custom parameters |
//! | 6 | 1 | kind: 1 public key, 2 secret key, 3 signature |
//!
//! Custom parameters follow the header as `log2(q)` (one byte) and `v, d,
//! o1, o2` as little-endian `u16`. Field elements are packed low nibble
//! first for `q = 16`.
//!
//! Format version 1 fixes the field polynomials `x⁴+x+1` and
//! `x⁸+x⁴+x³+x+1`, SHA3-256 as the message hash and SHAKE256 as the
//! expander for both seeds and hash targets.

use vdoo_core::keypair::SEED_LEN;
use vdoo_core::packing::{pack_into, packed_len, unpack_elements};
use vdoo_core::{
    expected_sizes, CentralMap, FieldMatrix, FieldVector, KeygenMode, PolynomialMap, PublicKey, QuadraticPolynomial,
    SecretKey, SecurityLevel, Signature, VdooParams, SALT_LEN,
};

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"VDOO";
pub const FORMAT_VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 7;
/// Length of the custom-parameter block.
pub const PARAMS_BLOCK_LEN: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    PublicKey = 1,
    SecretKey = 2,
    Signature = 3,
}

impl ObjectKind {
    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            1 => Ok(ObjectKind::PublicKey),
            2 => Ok(ObjectKind::SecretKey),
            3 => Ok(ObjectKind::Signature),
            other => Err(Error::UnknownKind(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::PublicKey => "public key",
            ObjectKind::SecretKey => "secret key",
            ObjectKind::Signature => "signature",
        }
    }
}

/// Secret keys are stored either fully expanded or as the seed alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SecretKeyForm {
    #[default]
    Full = 0,
    Seed = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub version: u8,
    pub params: VdooParams,
    pub kind: ObjectKind,
}

impl Header {
    /// Header plus the optional parameter block.
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN
            + if self.params.level().is_some() {
                0
            } else {
                PARAMS_BLOCK_LEN
            }
    }
}

pub fn encode_header(params: &VdooParams, kind: ObjectKind, out: &mut Vec<u8>) {
    out.extend_from_slice(&MAGIC);
    out.push(FORMAT_VERSION);
    match params.level() {
        Some(level) => {
            out.push(level.number());
            out.push(kind as u8);
        }
        None => {
            out.push(0);
            out.push(kind as u8);
            out.push(params.field().bits() as u8);
            for x in [params.v(), params.d(), params.o1(), params.o2()] {
                out.extend_from_slice(&(x as u16).to_le_bytes());
            }
        }
    }
}

fn take<'a>(bytes: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Truncated {
            needed: n,
            found: bytes.len(),
        });
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

/// Parses the header and returns it with the remaining body.
pub fn decode_header(bytes: &[u8]) -> Result<(Header, &[u8])> {
    let mut rest = bytes;
    let fixed = take(&mut rest, HEADER_LEN)?;
    if fixed[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if fixed[4] != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(fixed[4]));
    }
    let kind = ObjectKind::from_byte(fixed[6])?;
    let params = match fixed[5] {
        0 => {
            let block = take(&mut rest, PARAMS_BLOCK_LEN)?;
            let q: u32 = match block[0] {
                4 => 16,
                8 => 256,
                _ => return Err(Error::Malformed("field size must be 2^4 or 2^8")),
            };
            let word = |i: usize| u16::from_le_bytes([block[1 + 2 * i], block[2 + 2 * i]]) as usize;
            VdooParams::new(q, word(0), word(1), word(2), word(3))?
        }
        n => SecurityLevel::from_number(n).ok_or(Error::UnknownLevel(n))?.params(),
    };
    Ok((
        Header {
            version: fixed[4],
            params,
            kind,
        },
        rest,
    ))
}

fn expect_kind(header: &Header, kind: ObjectKind) -> Result<()> {
    if header.kind != kind {
        return Err(Error::WrongKind {
            expected: kind.name(),
            found: header.kind.name(),
        });
    }
    Ok(())
}

fn check_len(body: &[u8], expected: usize) -> Result<()> {
    if body.len() != expected {
        return Err(Error::Length {
            expected,
            found: body.len(),
        });
    }
    Ok(())
}

/// Splits a flat element sequence into consecutive pieces.
struct Cursor<'a> {
    data: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn next(&mut self, n: usize) -> &'a [u8] {
        let (head, tail) = self.data.split_at(n);
        self.data = tail;
        head
    }
}

pub fn signature_body_len(params: &VdooParams) -> usize {
    packed_len(params.field(), params.n()) + SALT_LEN
}

pub fn public_key_body_len(params: &VdooParams) -> usize {
    expected_sizes(params).public_key_bytes
}

pub fn secret_key_body_len(params: &VdooParams, form: SecretKeyForm) -> usize {
    let prefix = 2 + SEED_LEN;
    match form {
        SecretKeyForm::Full => prefix + expected_sizes(params).secret_key_bytes,
        SecretKeyForm::Seed => prefix,
    }
}

/// `pack(s) ‖ salt`, without a header.
pub fn encode_signature_body(params: &VdooParams, sig: &Signature) -> Result<Vec<u8>> {
    if sig.s.len() != params.n() || sig.s.field() != params.field() {
        return Err(Error::Malformed("signature does not match parameters"));
    }
    let mut out = Vec::with_capacity(signature_body_len(params));
    pack_into(params.field(), sig.s.as_slice(), &mut out)?;
    out.extend_from_slice(&sig.salt);
    Ok(out)
}

pub fn decode_signature_body(params: &VdooParams, body: &[u8]) -> Result<Signature> {
    check_len(body, signature_body_len(params))?;
    let split = body.len() - SALT_LEN;
    let s = unpack_elements(params.field(), &body[..split], params.n())?;
    let salt = body[split..].try_into().expect("salt length checked");
    Ok(Signature {
        s: FieldVector::from_elements(params.field(), s)?,
        salt,
    })
}

pub fn encode_signature(params: &VdooParams, sig: &Signature) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    encode_header(params, ObjectKind::Signature, &mut out);
    out.extend(encode_signature_body(params, sig)?);
    Ok(out)
}

pub fn decode_signature(bytes: &[u8]) -> Result<(VdooParams, Signature)> {
    let (header, body) = decode_header(bytes)?;
    expect_kind(&header, ObjectKind::Signature)?;
    Ok((header.params, decode_signature_body(&header.params, body)?))
}

pub fn encode_public_key(pk: &PublicKey) -> Vec<u8> {
    let params = pk.params();
    let field = params.field();
    let coeffs: Vec<u8> = pk.map().polys().iter().flat_map(|p| p.coefficients()).collect();
    let mut out = Vec::with_capacity(HEADER_LEN + PARAMS_BLOCK_LEN + public_key_body_len(params));
    encode_header(params, ObjectKind::PublicKey, &mut out);
    pack_into(field, &coeffs, &mut out).expect("coefficients are field elements");
    out
}

pub fn decode_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let (header, body) = decode_header(bytes)?;
    expect_kind(&header, ObjectKind::PublicKey)?;
    let params = header.params;
    let field = params.field();
    check_len(body, public_key_body_len(&params))?;
    let n = params.n();
    let per_poly = QuadraticPolynomial::coefficient_count(n);
    let coeffs = unpack_elements(field, body, params.m() * per_poly)?;
    let polys = coeffs
        .chunks_exact(per_poly)
        .map(|c| QuadraticPolynomial::from_coefficients(field, n, c))
        .collect::<vdoo_core::Result<Vec<_>>>()?;
    Ok(PublicKey::new(params, PolynomialMap::new(field, n, polys)?)?)
}

fn mode_byte(mode: KeygenMode) -> u8 {
    match mode {
        KeygenMode::Affine => 0,
        KeygenMode::Homogeneous => 1,
    }
}

pub fn encode_secret_key(sk: &SecretKey, form: SecretKeyForm) -> Vec<u8> {
    let params = sk.params();
    let mut out = Vec::with_capacity(HEADER_LEN + PARAMS_BLOCK_LEN + secret_key_body_len(params, form));
    encode_header(params, ObjectKind::SecretKey, &mut out);
    out.push(form as u8);
    out.push(mode_byte(sk.mode()));
    out.extend_from_slice(sk.seed());
    if form == SecretKeyForm::Full {
        let elements: Vec<u8> = sk
            .inv_s()
            .as_slice()
            .iter()
            .chain(sk.a().as_slice())
            .chain(sk.inv_t().as_slice())
            .chain(sk.b().as_slice())
            .copied()
            .chain(sk.central().coefficients())
            .collect();
        pack_into(params.field(), &elements, &mut out).expect("key components are field elements");
    }
    out
}

pub fn decode_secret_key(bytes: &[u8]) -> Result<SecretKey> {
    Ok(decode_secret_key_with_form(bytes)?.0)
}

/// Decodes a secret key and reports how it was stored.
pub fn decode_secret_key_with_form(bytes: &[u8]) -> Result<(SecretKey, SecretKeyForm)> {
    let (header, mut body) = decode_header(bytes)?;
    expect_kind(&header, ObjectKind::SecretKey)?;
    let params = header.params;
    let prefix = take(&mut body, 2 + SEED_LEN)?;
    let form = match prefix[0] {
        0 => SecretKeyForm::Full,
        1 => SecretKeyForm::Seed,
        _ => return Err(Error::Malformed("unknown secret-key form")),
    };
    let mode = match prefix[1] {
        0 => KeygenMode::Affine,
        1 => KeygenMode::Homogeneous,
        _ => return Err(Error::Malformed("unknown key-generation mode")),
    };
    let seed: [u8; SEED_LEN] = prefix[2..].try_into().expect("seed length");
    if form == SecretKeyForm::Seed {
        check_len(body, 0)?;
        return Ok((SecretKey::from_seed(&params, &seed, mode), form));
    }

    let field = params.field();
    let sizes = expected_sizes(&params);
    check_len(body, sizes.secret_key_bytes)?;
    let elements = unpack_elements(field, body, sizes.secret_key_elements)?;
    let (m, n) = (params.m(), params.n());
    let mut cur = Cursor { data: &elements };
    let inv_s = FieldMatrix::from_elements(field, m, m, cur.next(m * m).to_vec())?;
    let a = FieldVector::from_elements(field, cur.next(m).to_vec())?;
    let inv_t = FieldMatrix::from_elements(field, n, n, cur.next(n * n).to_vec())?;
    let b = FieldVector::from_elements(field, cur.next(n).to_vec())?;
    let central = CentralMap::from_coefficients(&params, cur.next(sizes.central_elements))?;
    if !inv_s.is_invertible() || !inv_t.is_invertible() {
        return Err(Error::Malformed("secret transform is singular"));
    }
    let sk = SecretKey::from_parts(params, mode, seed, inv_s, a, inv_t, b, central)?;
    Ok((sk, form))
}

/// Summary of an encoded object, without decoding the body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Description {
    pub header: Header,
    pub body_len: usize,
    pub expected_body_len: usize,
    pub secret_form: Option<SecretKeyForm>,
}

pub fn describe(bytes: &[u8]) -> Result<Description> {
    let (header, body) = decode_header(bytes)?;
    let params = &header.params;
    let (expected_body_len, secret_form) = match header.kind {
        ObjectKind::PublicKey => (public_key_body_len(params), None),
        ObjectKind::Signature => (signature_body_len(params), None),
        ObjectKind::SecretKey => {
            let form = match body.first() {
                Some(1) => SecretKeyForm::Seed,
                _ => SecretKeyForm::Full,
            };
            (secret_key_body_len(params, form), Some(form))
        }
    };
    Ok(Description {
        header,
        body_len: body.len(),
        expected_body_len,
        secret_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use vdoo_core::{keygen, sign, verify};

    fn toy() -> VdooParams {
        VdooParams::new(16, 6, 3, 3, 3).unwrap()
    }

    #[test]
    fn header_layout() {
        let mut out = Vec::new();
        encode_header(&SecurityLevel::L3.params(), ObjectKind::Signature, &mut out);
        assert_eq!(out, [b'V', b'D', b'O', b'O', 1, 3, 3]);
        let mut custom = Vec::new();
        encode_header(&toy(), ObjectKind::PublicKey, &mut custom);
        assert_eq!(custom, [b'V', b'D', b'O', b'O', 1, 0, 1, 4, 6, 0, 3, 0, 3, 0, 3, 0]);
        let (h, rest) = decode_header(&custom).unwrap();
        assert_eq!((h.params, h.kind, rest.len()), (toy(), ObjectKind::PublicKey, 0));
        assert_eq!(h.encoded_len(), custom.len());
    }

    #[test]
    fn header_rejections() {
        let mut good = Vec::new();
        encode_header(&SecurityLevel::L1.params(), ObjectKind::Signature, &mut good);
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode_header(&bad), Err(Error::BadMagic)));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(decode_header(&bad), Err(Error::UnsupportedVersion(2))));
        let mut bad = good.clone();
        bad[5] = 2;
        assert!(matches!(decode_header(&bad), Err(Error::UnknownLevel(2))));
        let mut bad = good.clone();
        bad[6] = 9;
        assert!(matches!(decode_header(&bad), Err(Error::UnknownKind(9))));
        assert!(matches!(decode_header(&good[..5]), Err(Error::Truncated { .. })));
    }

    #[test]
    fn signature_body_sizes() {
        let expected = [96, 226, 316];
        for (level, len) in SecurityLevel::ALL.into_iter().zip(expected) {
            let p = level.params();
            assert_eq!(signature_body_len(&p), len);
            let sig = Signature {
                s: FieldVector::zeros(p.field(), p.n()),
                salt: [7; SALT_LEN],
            };
            let body = encode_signature_body(&p, &sig).unwrap();
            assert_eq!(body.len(), len);
            assert_eq!(encode_signature(&p, &sig).unwrap().len(), HEADER_LEN + len);
            assert_eq!(decode_signature_body(&p, &body).unwrap(), sig);
        }
    }

    #[test]
    fn key_roundtrips_and_kinds() {
        let p = toy();
        let (pk, sk) = keygen(&p, &[1; 32], KeygenMode::Affine).unwrap();
        let pk_bytes = encode_public_key(&pk);
        assert_eq!(decode_public_key(&pk_bytes).unwrap(), pk);
        for form in [SecretKeyForm::Full, SecretKeyForm::Seed] {
            let bytes = encode_secret_key(&sk, form);
            assert_eq!(
                bytes.len(),
                HEADER_LEN + PARAMS_BLOCK_LEN + secret_key_body_len(&p, form)
            );
            assert_eq!(decode_secret_key_with_form(&bytes).unwrap(), (sk.clone(), form));
        }
        assert!(matches!(decode_secret_key(&pk_bytes), Err(Error::WrongKind { .. })));
        assert!(matches!(
            decode_public_key(&pk_bytes[..pk_bytes.len() - 1]),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn seed_form_signs_for_original_key() {
        let p = toy();
        let (pk, sk) = keygen(&p, &[2; 32], KeygenMode::Homogeneous).unwrap();
        let restored = decode_secret_key(&encode_secret_key(&sk, SecretKeyForm::Seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sig = sign(&restored, b"m", &mut rng).unwrap();
        assert!(verify(&pk, b"m", &sig));
    }

    #[test]
    fn nonzero_pad_nibble_rejected() {
        let p = VdooParams::new(16, 1, 1, 1, 2).unwrap();
        assert_eq!(p.n() % 2, 1);
        let sig = Signature {
            s: FieldVector::zeros(p.field(), p.n()),
            salt: [0; SALT_LEN],
        };
        let mut body = encode_signature_body(&p, &sig).unwrap();
        let last = body.len() - SALT_LEN - 1;
        body[last] |= 0x10;
        assert!(decode_signature_body(&p, &body).is_err());
    }
}
