// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Multivariate quadratic polynomials, their polar forms, and composition
//! with affine maps.
//!
//! A polynomial in `n` variables stores its quadratic part as the
//! upper-triangular coefficient list `c_ij` for `i ≤ j`, in the order
//! `(1,1), (1,2), …, (1,n), (2,2), …, (n,n)`, then `n` linear coefficients,
//! then the constant. Over a field of characteristic 2 the monomials
//! `x_i x_j` and `x_j x_i` share one slot; this order is also the wire order.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expander::ElementSource;
use crate::field::Field;
use crate::linalg::{axpy, dot, FieldMatrix, FieldVector};

/// Number of quadratic monomials `x_i x_j` with `i ≤ j` in `n` variables.
pub const fn quadratic_monomials(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Slot of `x_i x_j` (0-based, `i ≤ j`) in the upper-triangular list.
#[inline]
pub const fn tri_index(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i + 1) / 2 + (j - i)
}

/// Evaluates an upper-triangular quadratic form.
#[inline]
pub(crate) fn eval_upper(field: Field, n: usize, quad: &[u8], x: &[u8]) -> u8 {
    let mut acc = 0u8;
    let mut offset = 0;
    for i in 0..n {
        let len = n - i;
        if x[i] != 0 {
            let row = dot(field, &quad[offset..offset + len], &x[i..n]);
            acc ^= field.mul(x[i], row);
        }
        offset += len;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticPolynomial {
    field: Field,
    n: usize,
    quad: Vec<u8>,
    lin: Vec<u8>,
    constant: u8,
}

impl QuadraticPolynomial {
    pub fn zero(field: Field, n: usize) -> Self {
        Self {
            field,
            n,
            quad: vec![0; quadratic_monomials(n)],
            lin: vec![0; n],
            constant: 0,
        }
    }

    pub fn from_parts(field: Field, n: usize, quad: Vec<u8>, lin: Vec<u8>, constant: u8) -> Result<Self> {
        if quad.len() != quadratic_monomials(n) {
            return Err(Error::DimensionMismatch {
                expected: quadratic_monomials(n),
                found: quad.len(),
            });
        }
        if lin.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lin.len(),
            });
        }
        let quad = FieldVector::from_elements(field, quad)?.into_inner();
        let lin = FieldVector::from_elements(field, lin)?.into_inner();
        field.element(constant)?;
        Ok(Self {
            field,
            n,
            quad,
            lin,
            constant,
        })
    }

    /// Parses the canonical coefficient list (quadratic, linear, constant).
    pub fn from_coefficients(field: Field, n: usize, coeffs: &[u8]) -> Result<Self> {
        let q = quadratic_monomials(n);
        let total = Self::coefficient_count(n);
        if coeffs.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: coeffs.len(),
            });
        }
        Self::from_parts(
            field,
            n,
            coeffs[..q].to_vec(),
            coeffs[q..q + n].to_vec(),
            coeffs[total - 1],
        )
    }

    pub fn random(field: Field, n: usize, src: &mut impl ElementSource) -> Self {
        let mut p = Self::zero(field, n);
        src.fill_elements(field, &mut p.quad);
        src.fill_elements(field, &mut p.lin);
        p.constant = src.next_element(field);
        p
    }

    /// Total stored coefficients: `(n+1)(n+2)/2`.
    pub const fn coefficient_count(n: usize) -> usize {
        quadratic_monomials(n) + n + 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn quadratic(&self) -> &[u8] {
        &self.quad
    }

    pub fn linear(&self) -> &[u8] {
        &self.lin
    }

    pub fn constant(&self) -> u8 {
        self.constant
    }

    /// Coefficient of `x_i x_j` (0-based, either order).
    pub fn quad_coeff(&self, i: usize, j: usize) -> u8 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.quad[tri_index(self.n, i, j)]
    }

    pub fn set_quad_coeff(&mut self, i: usize, j: usize, value: u8) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(self.field.contains(value));
        self.quad[tri_index(self.n, i, j)] = value;
    }

    pub fn set_linear(&mut self, i: usize, value: u8) {
        self.lin[i] = value;
    }

    pub fn set_constant(&mut self, value: u8) {
        self.constant = value;
    }

    /// Canonical coefficient list (quadratic, linear, constant).
    pub fn coefficients(&self) -> impl Iterator<Item = u8> + '_ {
        self.quad
            .iter()
            .chain(&self.lin)
            .copied()
            .chain(core::iter::once(self.constant))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant == 0 && self.lin.iter().all(|&c| c == 0)
    }

    /// The same polynomial with linear and constant terms dropped.
    pub fn quadratic_part(&self) -> Self {
        Self {
            field: self.field,
            n: self.n,
            quad: self.quad.clone(),
            lin: vec![0; self.n],
            constant: 0,
        }
    }

    /// Unchecked evaluation on a raw slice of length `n`.
    pub(crate) fn eval_raw(&self, x: &[u8]) -> u8 {
        eval_upper(self.field, self.n, &self.quad, x) ^ dot(self.field, &self.lin, x) ^ self.constant
    }

    fn check_arg(&self, x: &FieldVector) -> Result<()> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: x.field().order(),
            });
        }
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &FieldVector) -> Result<u8> {
        self.check_arg(x)?;
        Ok(self.eval_raw(x.as_slice()))
    }

    /// Differential polar form `p(x+w) - p(x) - p(w) + p(0)`.
    ///
    /// Linear and constant terms cancel, so this is the symmetric bilinear
    /// form of the quadratic part.
    pub fn polar(&self, x: &FieldVector, w: &FieldVector) -> Result<u8> {
        self.check_arg(x)?;
        self.check_arg(w)?;
        let sum = x.add(w)?;
        Ok(self.eval_raw(sum.as_slice()) ^ self.eval_raw(x.as_slice()) ^ self.eval_raw(w.as_slice()) ^ self.constant)
    }

    /// `self(T·z + b)` as a polynomial in `z`.
    fn substitute(&self, t: &AffineMap) -> QuadraticPolynomial {
        let field = self.field;
        let n = self.n;
        let tm = &t.matrix;
        let b = t.offset.as_slice();

        // rows_i = Σ_{j ≥ i} c_ij · T_j, so the quadratic part is
        // Σ_i (T_i · z)(rows_i · z).
        let mut rows = vec![0u8; n * n];
        let mut offset = 0;
        for i in 0..n {
            let dst = &mut rows[i * n..(i + 1) * n];
            for j in i..n {
                axpy(field, self.quad[offset + j - i], tm.row(j), dst);
            }
            offset += n - i;
        }
        // full = Tᵀ · rows, a non-symmetric matrix of the form in z.
        let mut full = vec![0u8; n * n];
        for i in 0..n {
            let src = &rows[i * n..(i + 1) * n];
            for (k, &tik) in tm.row(i).iter().enumerate() {
                axpy(field, tik, src, &mut full[k * n..(k + 1) * n]);
            }
        }
        let mut out = QuadraticPolynomial::zero(field, n);
        let mut slot = 0;
        for k in 0..n {
            out.quad[slot] = full[k * n + k];
            slot += 1;
            for l in k + 1..n {
                out.quad[slot] = full[k * n + l] ^ full[l * n + k];
                slot += 1;
            }
        }

        // Cross terms c_ij (b_i T_j + b_j T_i) plus the original linear part.
        // The diagonal contributes nothing: (T_i z + b_i)^2 = (T_i z)^2 + b_i^2.
        let mut u = self.lin.clone();
        let mut offset = 0;
        for i in 0..n {
            for j in i + 1..n {
                let c = self.quad[offset + j - i];
                if c != 0 {
                    u[i] ^= field.mul(c, b[j]);
                    u[j] ^= field.mul(c, b[i]);
                }
            }
            offset += n - i;
        }
        for (i, &ui) in u.iter().enumerate() {
            axpy(field, ui, tm.row(i), &mut out.lin);
        }
        out.constant = self.eval_raw(b);
        out
    }
}

/// An ordered list of quadratic polynomials sharing one set of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialMap {
    field: Field,
    n: usize,
    polys: Vec<QuadraticPolynomial>,
}

impl PolynomialMap {
    pub fn new(field: Field, n: usize, polys: Vec<QuadraticPolynomial>) -> Result<Self> {
        for p in &polys {
            if p.field != field {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: p.field.order(),
                });
            }
            if p.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n,
                });
            }
        }
        Ok(Self { field, n, polys })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_polys(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[QuadraticPolynomial] {
        &self.polys
    }

    pub fn is_homogeneous(&self) -> bool {
        self.polys.iter().all(QuadraticPolynomial::is_homogeneous)
    }

    pub fn quadratic_part(&self) -> Self {
        Self {
            field: self.field,
            n: self.n,
            polys: self.polys.iter().map(QuadraticPolynomial::quadratic_part).collect(),
        }
    }

    /// Evaluates every polynomial at `x`.
    pub fn evaluate(&self, x: &FieldVector) -> Result<FieldVector> {
        let out = self.polys.iter().map(|p| p.evaluate(x)).collect::<Result<Vec<u8>>>()?;
        Ok(FieldVector::from_raw(self.field, out))
    }

    pub fn polar(&self, x: &FieldVector, w: &FieldVector) -> Result<FieldVector> {
        let out = self.polys.iter().map(|p| p.polar(x, w)).collect::<Result<Vec<u8>>>()?;
        Ok(FieldVector::from_raw(self.field, out))
    }
}

/// `x ↦ M·x + c` for an invertible square `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    matrix: FieldMatrix,
    offset: FieldVector,
}

impl AffineMap {
    pub fn new(matrix: FieldMatrix, offset: FieldVector) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if offset.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: offset.len(),
            });
        }
        if offset.field() != matrix.field() {
            return Err(Error::FieldMismatch {
                left: matrix.field().order(),
                right: offset.field().order(),
            });
        }
        Ok(Self { matrix, offset })
    }

    pub fn linear(matrix: FieldMatrix) -> Result<Self> {
        let offset = FieldVector::zeros(matrix.field(), matrix.rows());
        Self::new(matrix, offset)
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        Self {
            matrix: FieldMatrix::identity(field, dim),
            offset: FieldVector::zeros(field, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn offset(&self) -> &FieldVector {
        &self.offset
    }

    pub fn apply(&self, x: &FieldVector) -> Result<FieldVector> {
        self.matrix.mul_vec(x)?.add(&self.offset)
    }
}

/// Symbolically expands `S ∘ F ∘ T`.
///
/// Each polynomial of `F` is rewritten under `x ← T·z + b`, then the results
/// are recombined by the rows of `S` and shifted by its offset. The output is
/// in canonical upper-triangular form and agrees with chained evaluation at
/// every point.
pub fn compose_affine(f: &PolynomialMap, s: &AffineMap, t: &AffineMap) -> Result<PolynomialMap> {
    let field = f.field;
    for map in [s, t] {
        if map.matrix.field() != field {
            return Err(Error::FieldMismatch {
                left: field.order(),
                right: map.matrix.field().order(),
            });
        }
    }
    if t.dim() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: t.dim(),
        });
    }
    if s.dim() != f.num_polys() {
        return Err(Error::DimensionMismatch {
            expected: f.num_polys(),
            found: s.dim(),
        });
    }
    let inner: Vec<QuadraticPolynomial> = f.polys.iter().map(|p| p.substitute(t)).collect();
    let n = f.n;
    let mut polys = Vec::with_capacity(s.dim());
    for k in 0..s.dim() {
        let mut acc = QuadraticPolynomial::zero(field, n);
        for (l, g) in inner.iter().enumerate() {
            let coeff = s.matrix.get(k, l);
            if coeff == 0 {
                continue;
            }
            axpy(field, coeff, &g.quad, &mut acc.quad);
            axpy(field, coeff, &g.lin, &mut acc.lin);
            acc.constant ^= field.mul(coeff, g.constant);
        }
        acc.constant ^= s.offset[k];
        polys.push(acc);
    }
    PolynomialMap::new(field, n, polys)
}

/// Monomial-major copy of a [`PolynomialMap`] for fast batch evaluation.
///
/// For each input point, monomial values are bucketed by their field value:
/// the coefficient columns of monomials with equal value are XORed together,
/// and only `q` scalar multiplications per output remain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapEvaluator {
    field: Field,
    n: usize,
    m: usize,
    columns: Vec<u8>,
}

impl MapEvaluator {
    pub fn new(map: &PolynomialMap) -> Self {
        let n = map.n;
        let m = map.num_polys();
        let slots = QuadraticPolynomial::coefficient_count(n);
        let mut columns = vec![0u8; slots * m];
        for (k, p) in map.polys.iter().enumerate() {
            for (slot, c) in p.coefficients().enumerate() {
                columns[slot * m + k] = c;
            }
        }
        Self {
            field: map.field,
            n,
            m,
            columns,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn evaluate(&self, x: &FieldVector) -> Result<FieldVector> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: x.field().order(),
            });
        }
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let (n, m, field) = (self.n, self.m, self.field);
        let x = x.as_slice();
        let q = field.order() as usize;
        let mut buckets = vec![0u8; q * m];
        let mut add = |value: u8, slot: usize| {
            if value != 0 {
                let col = &self.columns[slot * m..(slot + 1) * m];
                let bucket = &mut buckets[value as usize * m..(value as usize + 1) * m];
                for (b, c) in bucket.iter_mut().zip(col) {
                    *b ^= c;
                }
            }
        };
        let mut slot = 0;
        for i in 0..n {
            let row = field.mul_row(x[i]);
            for &xj in &x[i..n] {
                add(row[xj as usize], slot);
                slot += 1;
            }
        }
        for &xi in x {
            add(xi, slot);
            slot += 1;
        }
        add(1, slot);

        let mut out = vec![0u8; m];
        for value in 1..q {
            axpy(field, value as u8, &buckets[value * m..(value + 1) * m], &mut out);
        }
        Ok(FieldVector::from_raw(field, out))
    }
}
