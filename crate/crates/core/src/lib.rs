// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Core of the VDOO (Vinegar-Diagonal-Oil-Oil) multivariate signature scheme.
//!
//! The central map has three layers on top of `v` vinegar variables: a
//! *diagonal* layer of `d` polynomials, each introducing one new variable that
//! appears only linearly, followed by two oil-and-vinegar layers with `o1` and
//! `o2` oil variables. Inverting it needs `d` field divisions and two small
//! Gaussian eliminations. The public key is `P = S ∘ F ∘ T` for secret affine
//! maps `S` and `T`.
//!
//! This crate is `no_std` (it needs `alloc`) and performs no IO. Wire formats,
//! files and the command-line tool live in the `vdoo` crate.
//!
//! | Level | `(q, v, d, o1, o2)` | `n` | `m` | Signature |
//! |-------|---------------------|-----|-----|-----------|
//! | 1 | (16, 60, 30, 34, 36) | 160 | 100 | 96 bytes |
//! | 3 | (256, 100, 30, 40, 40) | 210 | 110 | 226 bytes |
//! | 5 | (256, 120, 50, 60, 70) | 300 | 180 | 316 bytes |
//!
//! ```
//! use vdoo_core::{keygen, sign, verify, KeygenMode, VdooParams};
//! use rand::SeedableRng;
//!
//! let params = VdooParams::new(16, 6, 3, 3, 3).unwrap();
//! let (pk, sk) = keygen(&params, &[7u8; 32], KeygenMode::Affine).unwrap();
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
//! let sig = sign(&sk, b"hello", &mut rng).unwrap();
//! assert!(verify(&pk, b"hello", &sig));
//! assert!(!verify(&pk, b"hellp", &sig));
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod central;
mod error;
pub mod estimator;
pub mod expander;
pub mod field;
pub mod keypair;
pub mod linalg;
pub mod packing;
pub mod params;
pub mod quadratic;
pub mod signer;

pub use central::{CentralMap, Inversion, InversionFailure};
pub use error::{Error, Result};
pub use expander::{ElementSource, Expander, RngSource};
pub use field::{Field, FieldElement};
pub use keypair::{expected_sizes, keygen, KeygenMode, PublicKey, SecretKey, SizeReport};
pub use linalg::{FieldMatrix, FieldVector};
pub use params::{SecurityLevel, VdooParams};
pub use quadratic::{AffineMap, PolynomialMap, QuadraticPolynomial};
pub use signer::{hash_to_field, sign, verify, Signature, SALT_LEN};
