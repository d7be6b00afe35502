// SPDX-License-Identifier: Apache-2.0 OR MIT

use thiserror::Error;

/// Errors reported by the core crate.
///
/// Routine trapdoor failures (a singular linear system while inverting the
/// central map) are not errors; see [`crate::Inversion`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field order mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u16, right: u16 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {value:#x} is not in GF({order})")]
    ElementOutOfRange { value: u8, order: u16 },
    #[error("unsupported field order {0}; expected 16 or 256")]
    UnsupportedField(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("signing gave up after {0} attempts")]
    RetryLimit(usize),
    #[error("no operating degree found below {0}")]
    DegreeBound(usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
