// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Sources of uniformly random field elements.
//!
//! Key material is expanded from a 32-byte seed with SHAKE256, one
//! independent stream per key component. Signing takes its randomness from
//! any caller-supplied [`RngCore`].

use rand_core::RngCore;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Shake256, Shake256Reader};

use crate::field::Field;

/// Anything that can hand out uniform field elements and bytes.
pub trait ElementSource {
    fn next_byte(&mut self) -> u8;

    /// A uniform element of `field`. GF(16) elements consume half a byte.
    fn next_element(&mut self, field: Field) -> u8;

    fn fill_elements(&mut self, field: Field, out: &mut [u8]) {
        for slot in out {
            *slot = self.next_element(field);
        }
    }
}

/// Deterministic SHAKE256 stream keyed by a seed and a domain label.
pub struct Expander {
    reader: Shake256Reader,
    block: [u8; 136],
    pos: usize,
    pending_nibble: Option<u8>,
}

impl Expander {
    /// Stream `SHAKE256(seed || label)`.
    pub fn new(seed: &[u8], label: &[u8]) -> Self {
        let mut shake = Shake256::default();
        shake.update(seed);
        shake.update(label);
        Self {
            reader: shake.finalize_xof(),
            block: [0; 136],
            pos: 136,
            pending_nibble: None,
        }
    }
}

impl ElementSource for Expander {
    fn next_byte(&mut self) -> u8 {
        if self.pos == self.block.len() {
            self.reader.read(&mut self.block);
            self.pos = 0;
        }
        let byte = self.block[self.pos];
        self.pos += 1;
        byte
    }

    fn next_element(&mut self, field: Field) -> u8 {
        match field {
            Field::Gf256 => self.next_byte(),
            Field::Gf16 => match self.pending_nibble.take() {
                Some(high) => high,
                None => {
                    let byte = self.next_byte();
                    self.pending_nibble = Some(byte >> 4);
                    byte & 0x0f
                }
            },
        }
    }
}

/// Adapter turning an [`RngCore`] into an [`ElementSource`].
pub struct RngSource<'a, R: RngCore + ?Sized> {
    rng: &'a mut R,
    pending_nibble: Option<u8>,
}

impl<'a, R: RngCore + ?Sized> RngSource<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Self {
            rng,
            pending_nibble: None,
        }
    }
}

impl<R: RngCore + ?Sized> ElementSource for RngSource<'_, R> {
    fn next_byte(&mut self) -> u8 {
        let mut b = [0u8; 1];
        self.rng.fill_bytes(&mut b);
        b[0]
    }

    fn next_element(&mut self, field: Field) -> u8 {
        match field {
            Field::Gf256 => self.next_byte(),
            Field::Gf16 => match self.pending_nibble.take() {
                Some(high) => high,
                None => {
                    let byte = self.next_byte();
                    self.pending_nibble = Some(byte >> 4);
                    byte & 0x0f
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn expander_is_deterministic_and_labelled() {
        let seed = [9u8; 32];
        let mut a = Expander::new(&seed, b"S");
        let mut b = Expander::new(&seed, b"S");
        let mut c = Expander::new(&seed, b"T");
        let xs: alloc::vec::Vec<u8> = (0..500).map(|_| a.next_element(Field::Gf256)).collect();
        let ys: alloc::vec::Vec<u8> = (0..500).map(|_| b.next_element(Field::Gf256)).collect();
        let zs: alloc::vec::Vec<u8> = (0..500).map(|_| c.next_element(Field::Gf256)).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn expander_matches_shake256() {
        let mut shake = Shake256::default();
        shake.update(b"seedlabel");
        let mut expected = vec![0u8; 300];
        shake.finalize_xof().read(&mut expected);
        let mut ex = Expander::new(b"seed", b"label");
        let got: alloc::vec::Vec<u8> = (0..300).map(|_| ex.next_byte()).collect();
        assert_eq!(got, expected);
        // Nibbles come low first.
        let mut ex = Expander::new(b"seed", b"label");
        assert_eq!(ex.next_element(Field::Gf16), expected[0] & 0xf);
        assert_eq!(ex.next_element(Field::Gf16), expected[0] >> 4);
    }
}
