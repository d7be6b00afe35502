// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not a VDOO object (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("unknown level byte {0}")]
    UnknownLevel(u8),
    #[error("unknown object kind {0}")]
    UnknownKind(u8),
    #[error("expected a {expected}, found a {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("truncated input: need {needed} bytes, have {found}")]
    Truncated { needed: usize, found: usize },
    #[error("body is {found} bytes, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("malformed encoding: {0}")]
    Malformed(&'static str),
    #[error("hex armor: {0}")]
    Hex(#[from] hex::FromHexError),
    #[error(transparent)]
    Core(#[from] vdoo_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
