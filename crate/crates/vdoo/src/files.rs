// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Hex armor, object files and streaming message digests.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use vdoo_core::signer::{MessageHasher, DIGEST_LEN};

use crate::codec::MAGIC;
use crate::error::{Error, Result};

/// Lowercase hex, no whitespace.
pub fn armor(bytes: &[u8]) -> String {
    hex::encode(bytes)
}

/// Accepts either a binary object or its hex armor (surrounding whitespace
/// is ignored).
pub fn dearmor(input: &[u8]) -> Result<Vec<u8>> {
    if input.starts_with(&MAGIC) {
        return Ok(input.to_vec());
    }
    let text = input.trim_ascii();
    Ok(hex::decode(text)?)
}

pub fn read_object(path: &Path) -> Result<Vec<u8>> {
    let raw = fs::read(path).map_err(|e| Error::io(path, e))?;
    dearmor(&raw)
}

pub fn write_object(path: &Path, bytes: &[u8], armored: bool) -> Result<()> {
    let result = if armored {
        fs::write(path, armor(bytes))
    } else {
        fs::write(path, bytes)
    };
    result.map_err(|e| Error::io(path, e))
}

/// SHA3-256 of everything `reader` yields, in constant memory.
pub fn digest_reader(mut reader: impl Read) -> io::Result<[u8; DIGEST_LEN]> {
    let mut hasher = MessageHasher::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        match reader.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => hasher.update(&buf[..n]),
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(hasher.finalize())
}

/// Digest of a file, or of standard input for `-`.
pub fn digest_path(path: &Path) -> Result<[u8; DIGEST_LEN]> {
    let result = if path == Path::new("-") {
        digest_reader(io::stdin().lock())
    } else {
        fs::File::open(path).and_then(digest_reader)
    };
    result.map_err(|e| Error::io(path, e))
}

/// Writes to `path`, or standard output for `-`.
pub fn write_output(path: &Path, bytes: &[u8], armored: bool) -> Result<()> {
    if path != Path::new("-") {
        return write_object(path, bytes, armored);
    }
    let mut out = io::stdout().lock();
    let result = if armored {
        writeln!(out, "{}", armor(bytes))
    } else {
        out.write_all(bytes)
    };
    result.map_err(|e| Error::io(path, e))
}
