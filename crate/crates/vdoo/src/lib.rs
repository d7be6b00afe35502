// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Wire formats, files and the `vdoo` command-line tool for VDOO signatures.
//!
//! The scheme itself lives in [`vdoo_core`].
//!
//! ```
//! use vdoo::codec::{decode_signature, encode_signature};
//! use vdoo_core::{keygen, sign, verify, KeygenMode, VdooParams};
//! use rand::SeedableRng;
//!
//! let params = VdooParams::new(16, 6, 3, 3, 3).unwrap();
//! let (pk, sk) = keygen(&params, &[1; 32], KeygenMode::Affine).unwrap();
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0);
//! let bytes = encode_signature(&params, &sign(&sk, b"msg", &mut rng).unwrap()).unwrap();
//! let (_, sig) = decode_signature(&bytes).unwrap();
//! assert!(verify(&pk, b"msg", &sig));
//! ```

pub mod codec;
mod error;
pub mod files;

pub use error::{Error, Result};
