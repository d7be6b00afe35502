// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Dense vectors and matrices over GF(q) and exact Gaussian elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::expander::ElementSource;
use crate::field::Field;

fn check_same(a: Field, b: Field) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `dst ^= factor · src`, elementwise.
#[inline]
pub(crate) fn axpy(field: Field, factor: u8, src: &[u8], dst: &mut [u8]) {
    if factor == 0 {
        return;
    }
    let row = field.mul_row(factor);
    for (d, &s) in dst.iter_mut().zip(src) {
        *d ^= row[s as usize];
    }
}

#[inline]
pub(crate) fn dot(field: Field, a: &[u8], b: &[u8]) -> u8 {
    let table = field.mul_table();
    let shift = field.bits();
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| acc ^ table[((x as usize) << shift) | y as usize])
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    field: Field,
    data: Vec<u8>,
}

impl FieldVector {
    pub fn zeros(field: Field, len: usize) -> Self {
        Self {
            field,
            data: vec![0; len],
        }
    }

    pub fn from_elements(field: Field, data: Vec<u8>) -> Result<Self> {
        if let Some(&value) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(Error::ElementOutOfRange {
                value,
                order: field.order(),
            });
        }
        Ok(Self { field, data })
    }

    pub(crate) fn from_raw(field: Field, data: Vec<u8>) -> Self {
        debug_assert!(data.iter().all(|&v| field.contains(v)));
        Self { field, data }
    }

    pub fn random(field: Field, len: usize, src: &mut impl ElementSource) -> Self {
        let mut data = vec![0; len];
        src.fill_elements(field, &mut data);
        Self { field, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.data
    }

    /// Elementwise sum (which is also the difference in characteristic 2).
    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        check_same(self.field, other.field)?;
        check_len(self.len(), other.len())?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(Self::from_raw(self.field, data))
    }

    pub fn scale(&self, factor: u8) -> FieldVector {
        let row = self.field.mul_row(factor);
        Self::from_raw(self.field, self.data.iter().map(|&v| row[v as usize]).collect())
    }
}

impl Index<usize> for FieldVector {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.data[i]
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        let mut m = Self::zeros(field, dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn from_elements(field: Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        let data = FieldVector::from_elements(field, data)?.into_inner();
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn random(field: Field, rows: usize, cols: usize, src: &mut impl ElementSource) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        src.fill_elements(field, &mut m.data);
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        debug_assert!(self.field.contains(value));
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> FieldVector {
        FieldVector::from_raw(self.field, (0..self.rows).map(|r| self.get(r, col)).collect())
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn mul_vec(&self, x: &FieldVector) -> Result<FieldVector> {
        check_same(self.field, x.field)?;
        check_len(self.cols, x.len())?;
        let data = (0..self.rows)
            .map(|r| dot(self.field, self.row(r), x.as_slice()))
            .collect();
        Ok(FieldVector::from_raw(self.field, data))
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        check_same(self.field, other.field)?;
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                axpy(self.field, self.data[r * self.cols + k], other.row(k), dst);
            }
        }
        Ok(out)
    }

    /// Rank via row reduction of a copy.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        reduce(self.field, self.rows, self.cols, self.cols, &mut work)
    }

    /// Solves `self · x = y` for square `self`.
    ///
    /// Returns `Ok(None)` when the matrix is singular; that is an expected
    /// outcome for random systems, not an error.
    pub fn solve(&self, y: &FieldVector) -> Result<Option<FieldVector>> {
        check_same(self.field, y.field)?;
        check_len(self.rows, self.cols)?;
        check_len(self.rows, y.len())?;
        let l = self.rows;
        let width = l + 1;
        let mut aug = vec![0u8; l * width];
        for r in 0..l {
            aug[r * width..r * width + l].copy_from_slice(self.row(r));
            aug[r * width + l] = y[r];
        }
        if reduce(self.field, l, width, l, &mut aug) < l {
            return Ok(None);
        }
        let x = (0..l).map(|r| aug[r * width + l]).collect();
        Ok(Some(FieldVector::from_raw(self.field, x)))
    }

    /// Inverse of a square matrix, `Ok(None)` when singular.
    pub fn inverse(&self) -> Result<Option<FieldMatrix>> {
        check_len(self.rows, self.cols)?;
        let l = self.rows;
        let width = 2 * l;
        let mut aug = vec![0u8; l * width];
        for r in 0..l {
            aug[r * width..r * width + l].copy_from_slice(self.row(r));
            aug[r * width + l + r] = 1;
        }
        if reduce(self.field, l, width, l, &mut aug) < l {
            return Ok(None);
        }
        let mut inv = Self::zeros(self.field, l, l);
        for r in 0..l {
            inv.data[r * l..(r + 1) * l].copy_from_slice(&aug[r * width + l..(r + 1) * width]);
        }
        Ok(Some(inv))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// Reduced row echelon form in place over the first `pivot_cols` columns of
/// a `rows × width` row-major buffer. Returns the rank.
///
/// Pivots are the first nonzero entry found in each column; there is no
/// magnitude to prefer over GF(q).
fn reduce(field: Field, rows: usize, width: usize, pivot_cols: usize, m: &mut [u8]) -> usize {
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m[r * width + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in col..width {
                m.swap(pivot * width + c, rank * width + c);
            }
        }
        let inv = field.inv(m[rank * width + col]).expect("pivot is nonzero");
        let scale = field.mul_row(inv);
        for v in &mut m[rank * width + col..(rank + 1) * width] {
            *v = scale[*v as usize];
        }
        let (before, rest) = m.split_at_mut(rank * width);
        let (pivot_row, after) = rest.split_at_mut(width);
        let pivot_row = &pivot_row[col..];
        for row in before.chunks_exact_mut(width).chain(after.chunks_exact_mut(width)) {
            let factor = row[col];
            axpy(field, factor, pivot_row, &mut row[col..]);
        }
        rank += 1;
    }
    rank
}

/// Draws `dim × dim` matrices from `src` until one is invertible.
pub fn random_invertible_matrix(field: Field, dim: usize, src: &mut impl ElementSource) -> FieldMatrix {
    assert!(dim >= 1, "matrix dimension must be positive");
    loop {
        let m = FieldMatrix::random(field, dim, dim, src);
        if m.is_invertible() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::{Expander, RngSource};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn naive_mat_vec(a: &FieldMatrix, x: &[u8]) -> Vec<u8> {
        let f = a.field();
        (0..a.rows())
            .map(|r| {
                let mut acc = 0u8;
                for (c, &xc) in x.iter().enumerate().take(a.cols()) {
                    acc ^= f.mul(a.get(r, c), xc);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn identity_solves_to_rhs() {
        let f = Field::Gf16;
        let y = FieldVector::from_elements(f, vec![1, 2, 3, 4]).unwrap();
        let x = FieldMatrix::identity(f, 4).solve(&y).unwrap().unwrap();
        assert_eq!(x, y);
        assert_eq!(FieldMatrix::identity(f, 4).mul_vec(&y).unwrap(), y);
    }

    #[test]
    fn repeated_row_is_singular() {
        let f = Field::Gf256;
        let a = FieldMatrix::from_elements(f, 3, 3, vec![1, 2, 3, 1, 2, 3, 7, 9, 11]).unwrap();
        let y = FieldVector::from_elements(f, vec![1, 1, 1]).unwrap();
        assert_eq!(a.solve(&y).unwrap(), None);
        assert_eq!(a.inverse().unwrap(), None);
        assert_eq!(FieldMatrix::zeros(f, 5, 5).inverse().unwrap(), None);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn identity_inverse() {
        let id = FieldMatrix::identity(Field::Gf16, 7);
        assert_eq!(id.inverse().unwrap().unwrap(), id);
    }

    #[test]
    fn dimension_errors() {
        let f = Field::Gf16;
        let a = FieldMatrix::zeros(f, 2, 3);
        let x = FieldVector::zeros(f, 2);
        assert!(matches!(a.mul_vec(&x), Err(Error::DimensionMismatch { .. })));
        assert!(a.solve(&x).is_err());
        assert!(a.inverse().is_err());
        let wrong = FieldVector::zeros(Field::Gf256, 3);
        assert!(matches!(a.mul_vec(&wrong), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn mat_vec_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut src = RngSource::new(&mut rng);
        for field in [Field::Gf16, Field::Gf256] {
            for _ in 0..50 {
                let a = FieldMatrix::random(field, 5, 5, &mut src);
                let x = FieldVector::random(field, 5, &mut src);
                assert_eq!(a.mul_vec(&x).unwrap().as_slice(), naive_mat_vec(&a, x.as_slice()));
                assert!(a.mul_vec(&FieldVector::zeros(field, 5)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn solve_roundtrip_and_inverse_multiply_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut src = RngSource::new(&mut rng);
        for field in [Field::Gf16, Field::Gf256] {
            for dim in [1, 2, 5, 17, 34] {
                for _ in 0..20 {
                    let a = random_invertible_matrix(field, dim, &mut src);
                    let x = FieldVector::random(field, dim, &mut src);
                    let y = a.mul_vec(&x).unwrap();
                    assert_eq!(a.solve(&y).unwrap().unwrap(), x);
                    let inv = a.inverse().unwrap().unwrap();
                    assert_eq!(a.mul(&inv).unwrap(), FieldMatrix::identity(field, dim));
                    assert_eq!(inv.mul(&a).unwrap(), FieldMatrix::identity(field, dim));
                }
            }
        }
    }

    #[test]
    fn random_invertible_is_deterministic_and_invertible() {
        let a = random_invertible_matrix(Field::Gf16, 34, &mut Expander::new(b"k", b"S"));
        let b = random_invertible_matrix(Field::Gf16, 34, &mut Expander::new(b"k", b"S"));
        assert_eq!(a, b);
        let one = random_invertible_matrix(Field::Gf16, 1, &mut Expander::new(b"k", b"T"));
        assert_ne!(one.get(0, 0), 0);
        let mut src = Expander::new(b"many", b"S");
        for _ in 0..1000 {
            let m = random_invertible_matrix(Field::Gf16, 34, &mut src);
            assert!(m.inverse().unwrap().is_some());
        }
    }

    #[test]
    fn singularity_rate_matches_product_formula() {
        let field = Field::Gf16;
        let l = 8;
        let trials = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut src = RngSource::new(&mut rng);
        let singular = (0..trials)
            .filter(|_| !FieldMatrix::random(field, l, l, &mut src).is_invertible())
            .count();
        let rate = singular as f64 / trials as f64;
        let mut nonsingular = 1.0f64;
        let mut p = 1.0;
        for _ in 0..l {
            p /= 16.0;
            nonsingular *= 1.0 - p;
        }
        let expected = 1.0 - nonsingular;
        assert!((expected - 0.0667).abs() < 0.001);
        assert!((rate - expected).abs() < 0.01, "rate {rate} vs {expected}");
    }
}
