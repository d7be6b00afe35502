// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Nested-subspace view of a key pair.
//!
//! In central coordinates the input spaces are coordinate spans,
//! `D_1 ⊃ … ⊃ D_d ⊃ O_1 ⊃ O_2`, and the output spaces are
//! `Q_{1,1} ⊃ … ⊃ Q_{1,d} ⊃ Q_2 ⊃ Q_3 = {0}`. Pulled back through `T` and
//! pushed forward through `S` they satisfy, for the `j`-th input space,
//! `P(I_j) ⊆ Q_j` and `DP(x, I_j) ⊆ Q_{j-1}` for every `x`. Only the
//! quadratic part of `P` is used, which is all the polar form sees.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::expander::ElementSource;
use crate::field::Field;
use crate::keypair::{PublicKey, SecretKey};
use crate::linalg::{FieldMatrix, FieldVector};
use crate::params::VdooParams;
use crate::quadratic::PolynomialMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputSpace {
    /// `D_i`, 1-based.
    Diagonal(usize),
    FirstOil,
    SecondOil,
}

impl fmt::Display for InputSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSpace::Diagonal(i) => write!(f, "D_{i}"),
            InputSpace::FirstOil => f.write_str("O_1"),
            InputSpace::SecondOil => f.write_str("O_2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubspaceCheck {
    /// `P(w)` left the expected output space.
    Image,
    /// `DP(x, w)` left the expected output space.
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubspaceViolation {
    pub space: InputSpace,
    pub check: SubspaceCheck,
    pub sample: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceReport {
    /// Measured dimension of each input space, in chain order.
    pub input_dims: Vec<(InputSpace, usize)>,
    /// Measured dimensions of `Q_{1,1}, …, Q_{1,d}, Q_2`.
    pub output_dims: Vec<usize>,
    pub checks: usize,
    pub violations: Vec<SubspaceViolation>,
}

impl SubspaceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn input_dim(&self, space: InputSpace) -> Option<usize> {
        self.input_dims.iter().find(|(s, _)| *s == space).map(|&(_, d)| d)
    }
}

/// A subspace given by spanning vectors, with a rank-based membership test.
struct Span {
    field: Field,
    dim_total: usize,
    basis: Vec<FieldVector>,
    rank: usize,
}

impl Span {
    fn new(field: Field, dim_total: usize, basis: Vec<FieldVector>) -> Self {
        let rank = Self::rank_of(field, dim_total, basis.iter());
        Self {
            field,
            dim_total,
            basis,
            rank,
        }
    }

    fn rank_of<'a>(field: Field, cols: usize, vectors: impl Iterator<Item = &'a FieldVector>) -> usize {
        let data: Vec<u8> = vectors.flat_map(|v| v.as_slice().iter().copied()).collect();
        let rows = data.len() / cols.max(1);
        if rows == 0 {
            return 0;
        }
        FieldMatrix::from_elements(field, rows, cols, data)
            .expect("spanning vectors have the ambient length")
            .rank()
    }

    fn contains(&self, y: &FieldVector) -> bool {
        if y.is_zero() {
            return true;
        }
        Self::rank_of(self.field, self.dim_total, self.basis.iter().chain(core::iter::once(y))) == self.rank
    }

    fn sample(&self, src: &mut impl ElementSource) -> FieldVector {
        let mut acc = FieldVector::zeros(self.field, self.dim_total);
        for b in &self.basis {
            let c = src.next_element(self.field);
            acc = acc.add(&b.scale(c)).expect("same ambient space");
        }
        acc
    }
}

/// Checks the subspace containments of `public` against the secret linear
/// maps, with `samples` random vectors per input space.
///
/// `inv_t` maps central inputs to public inputs; `inv_s` maps public outputs
/// to central outputs.
pub fn verify_subspace_structure(
    params: &VdooParams,
    public: &PolynomialMap,
    inv_s: &FieldMatrix,
    inv_t: &FieldMatrix,
    samples: usize,
    src: &mut impl ElementSource,
) -> Result<SubspaceReport> {
    let field = params.field();
    let (v, d, o1, n, m) = (params.v(), params.d(), params.o1(), params.n(), params.m());
    let quad = public.quadratic_part();
    let s = inv_s
        .inverse()?
        .ok_or(crate::Error::InvalidParams("output transform is singular"))?;

    let mut inputs = Vec::with_capacity(d + 2);
    for i in 1..=d {
        inputs.push((InputSpace::Diagonal(i), v + i - 1));
    }
    inputs.push((InputSpace::FirstOil, v + d));
    inputs.push((InputSpace::SecondOil, v + d + o1));
    let input_spans: Vec<(InputSpace, Span)> = inputs
        .into_iter()
        .map(|(label, start)| {
            (
                label,
                Span::new(field, n, (start..n).map(|c| inv_t.column(c)).collect()),
            )
        })
        .collect();

    // outputs[j] is the space the j-th input space maps into; outputs[0] is
    // everything, the last entry is {0}.
    let mut output_starts = alloc::vec![0];
    output_starts.extend(1..=d);
    output_starts.push(d + o1);
    output_starts.push(m);
    let outputs: Vec<Span> = output_starts
        .iter()
        .map(|&start| Span::new(field, m, (start..m).map(|c| s.column(c)).collect()))
        .collect();

    let mut violations = Vec::new();
    let mut checks = 0;
    for (j, (label, span)) in input_spans.iter().enumerate() {
        let image_space = &outputs[j + 1];
        let polar_space = &outputs[j];
        for sample in 0..samples {
            let w = span.sample(src);
            let x = FieldVector::random(field, n, src);
            checks += 2;
            if !image_space.contains(&quad.evaluate(&w)?) {
                violations.push(SubspaceViolation {
                    space: *label,
                    check: SubspaceCheck::Image,
                    sample,
                });
            }
            if !polar_space.contains(&quad.polar(&x, &w)?) {
                violations.push(SubspaceViolation {
                    space: *label,
                    check: SubspaceCheck::Polar,
                    sample,
                });
            }
        }
    }

    Ok(SubspaceReport {
        input_dims: input_spans.iter().map(|(l, s)| (*l, s.rank)).collect(),
        output_dims: outputs[1..outputs.len() - 1].iter().map(|s| s.rank).collect(),
        checks,
        violations,
    })
}

/// [`verify_subspace_structure`] for a generated key pair.
pub fn verify_keypair_subspaces(
    pk: &PublicKey,
    sk: &SecretKey,
    samples: usize,
    src: &mut impl ElementSource,
) -> Result<SubspaceReport> {
    verify_subspace_structure(sk.params(), pk.map(), sk.inv_s(), sk.inv_t(), samples, src)
}
