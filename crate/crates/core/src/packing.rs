// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Byte packing of field elements.
//!
//! GF(256) elements take one byte each. GF(16) elements are packed two per
//! byte, the first element in the low nibble; an odd count leaves the final
//! high nibble zero.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;

/// Bytes needed for `count` elements.
pub const fn packed_len(field: Field, count: usize) -> usize {
    (count * field.bits() as usize).div_ceil(8)
}

pub fn pack_elements(field: Field, elements: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(packed_len(field, elements.len()));
    pack_into(field, elements, &mut out)?;
    Ok(out)
}

/// Appends the packed form of `elements` to `out`.
pub fn pack_into(field: Field, elements: &[u8], out: &mut Vec<u8>) -> Result<()> {
    if let Some(&value) = elements.iter().find(|&&e| !field.contains(e)) {
        return Err(Error::ElementOutOfRange {
            value,
            order: field.order(),
        });
    }
    match field {
        Field::Gf256 => out.extend_from_slice(elements),
        Field::Gf16 => out.extend(
            elements
                .chunks(2)
                .map(|pair| pair[0] | pair.get(1).map_or(0, |hi| hi << 4)),
        ),
    }
    Ok(())
}

/// Unpacks exactly `count` elements from the front of `bytes`.
///
/// `bytes` must hold exactly [`packed_len`] bytes. For GF(16) with an odd
/// count the unused high nibble must be zero.
pub fn unpack_elements(field: Field, bytes: &[u8], count: usize) -> Result<Vec<u8>> {
    let expected = packed_len(field, count);
    if bytes.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: bytes.len(),
        });
    }
    match field {
        Field::Gf256 => Ok(bytes.to_vec()),
        Field::Gf16 => {
            if count % 2 == 1 && bytes[expected - 1] >> 4 != 0 {
                return Err(Error::ElementOutOfRange {
                    value: bytes[expected - 1],
                    order: 16,
                });
            }
            let mut out = Vec::with_capacity(count);
            for &byte in bytes {
                out.push(byte & 0x0f);
                out.push(byte >> 4);
            }
            out.truncate(count);
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_nibble_first() {
        assert_eq!(pack_elements(Field::Gf16, &[0x3, 0x5]).unwrap(), [0x53]);
        assert_eq!(pack_elements(Field::Gf16, &[0x3]).unwrap(), [0x03]);
        assert_eq!(packed_len(Field::Gf16, 160), 80);
        assert_eq!(packed_len(Field::Gf256, 210), 210);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(pack_elements(Field::Gf16, &[0x10]).is_err());
        assert!(unpack_elements(Field::Gf16, &[0x13], 1).is_err());
        assert!(unpack_elements(Field::Gf16, &[0x13], 3).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(raw in proptest::collection::vec(any::<u8>(), 0..300), wide in any::<bool>()) {
            let field = if wide { Field::Gf256 } else { Field::Gf16 };
            let elements: Vec<u8> = raw.iter().map(|b| if wide { *b } else { b & 0xf }).collect();
            let packed = pack_elements(field, &elements).unwrap();
            prop_assert_eq!(packed.len(), packed_len(field, elements.len()));
            prop_assert_eq!(unpack_elements(field, &packed, elements.len()).unwrap(), elements);
        }
    }
}
