// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Arithmetic in GF(16) and GF(256).
//!
//! GF(16) is GF(2)\[x\]/(x^4 + x + 1) and GF(256) is GF(2)\[x\]/(x^8 + x^4 +
//! x^3 + x + 1). Elements are stored as `u8` with bit `i` holding the
//! coefficient of `x^i`. Multiplication and inversion are table driven; the
//! tables are evaluated at compile time. Nothing here is constant time.

use core::fmt;

use crate::error::{Error, Result};

/// Reduction polynomial of GF(16), including the `x^4` bit.
pub const GF16_MODULUS: u16 = 0x13;
/// Reduction polynomial of GF(256), including the `x^8` bit.
pub const GF256_MODULUS: u16 = 0x11b;

const fn clmul_reduce(a: u8, b: u8, bits: u32, modulus: u16) -> u8 {
    let mut acc: u16 = 0;
    let mut i = 0;
    while i < bits {
        if (b >> i) & 1 == 1 {
            acc ^= (a as u16) << i;
        }
        i += 1;
    }
    let mut deg = 2 * bits - 2;
    while deg >= bits {
        if (acc >> deg) & 1 == 1 {
            acc ^= modulus << (deg - bits);
        }
        deg -= 1;
    }
    acc as u8
}

const fn build_mul_table<const N: usize>(bits: u32, modulus: u16) -> [u8; N] {
    let size = 1usize << bits;
    let mut table = [0u8; N];
    let mut a = 0;
    while a < size {
        let mut b = 0;
        while b < size {
            table[(a << bits) | b] = clmul_reduce(a as u8, b as u8, bits, modulus);
            b += 1;
        }
        a += 1;
    }
    table
}

const fn build_inv_table<const N: usize>(mul: &[u8], bits: u32) -> [u8; N] {
    let mut table = [0u8; N];
    let mut a = 1;
    while a < N {
        let mut b = 1;
        while b < N {
            if mul[(a << bits) | b] == 1 {
                table[a] = b as u8;
                break;
            }
            b += 1;
        }
        a += 1;
    }
    table
}

static GF16_MUL: [u8; 256] = build_mul_table::<256>(4, GF16_MODULUS);
static GF16_INV: [u8; 16] = build_inv_table::<16>(&GF16_MUL, 4);
static GF256_MUL: [u8; 65536] = build_mul_table::<65536>(8, GF256_MODULUS);
static GF256_INV: [u8; 256] = build_inv_table::<256>(&GF256_MUL, 8);

/// One of the two supported binary extension fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Gf16,
    Gf256,
}

impl Field {
    pub fn from_order(q: u32) -> Result<Self> {
        match q {
            16 => Ok(Field::Gf16),
            256 => Ok(Field::Gf256),
            other => Err(Error::UnsupportedField(other)),
        }
    }

    /// The field order `q`.
    pub const fn order(self) -> u16 {
        match self {
            Field::Gf16 => 16,
            Field::Gf256 => 256,
        }
    }

    /// `log2(q)`: bits per element.
    pub const fn bits(self) -> u32 {
        match self {
            Field::Gf16 => 4,
            Field::Gf256 => 8,
        }
    }

    pub const fn modulus(self) -> u16 {
        match self {
            Field::Gf16 => GF16_MODULUS,
            Field::Gf256 => GF256_MODULUS,
        }
    }

    #[inline]
    pub const fn contains(self, value: u8) -> bool {
        (value as u16) < self.order()
    }

    /// Row-major `q × q` product table, indexed by `(a << bits) | b`.
    #[inline]
    pub fn mul_table(self) -> &'static [u8] {
        match self {
            Field::Gf16 => &GF16_MUL,
            Field::Gf256 => &GF256_MUL,
        }
    }

    /// The `q` products `a · b` for every `b`, as a slice.
    #[inline]
    pub fn mul_row(self, a: u8) -> &'static [u8] {
        let q = self.order() as usize;
        let start = (a as usize) * q;
        &self.mul_table()[start..start + q]
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        self.mul_table()[((a as usize) << self.bits()) | b as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        Some(match self {
            Field::Gf16 => GF16_INV[a as usize],
            Field::Gf256 => GF256_INV[a as usize],
        })
    }

    pub fn pow(self, a: u8, mut exp: u32) -> u8 {
        let mut base = a;
        let mut acc = 1u8;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Number of binary gates charged for one field multiplication:
    /// `2·(log2 q)^2 + log2 q`.
    pub const fn gates_per_mul(self) -> u32 {
        let b = self.bits();
        2 * b * b + b
    }

    pub fn element(self, value: u8) -> Result<FieldElement> {
        FieldElement::new(self, value)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order())
    }
}

/// A checked field element that remembers which field it belongs to.
///
/// Bulk code works on raw `u8` slices through [`Field`]; this type is the
/// checked front door for single values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: u8,
}

impl FieldElement {
    pub fn new(field: Field, value: u8) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::ElementOutOfRange {
                value,
                order: field.order(),
            });
        }
        Ok(Self { field, value })
    }

    pub fn zero(field: Field) -> Self {
        Self { field, value: 0 }
    }

    pub fn one(field: Field) -> Self {
        Self { field, value: 1 }
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<Field> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(self.field)
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        let field = self.same_field(other)?;
        Ok(Self {
            field,
            value: self.value ^ other.value,
        })
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        let field = self.same_field(other)?;
        Ok(Self {
            field,
            value: field.mul(self.value, other.value),
        })
    }

    pub fn inv(self) -> Result<Self> {
        let value = self.field.inv(self.value).ok_or(Error::ZeroInverse)?;
        Ok(Self {
            field: self.field,
            value,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.value)
    }
}
