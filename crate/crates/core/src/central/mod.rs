// SPDX-License-Identifier: Apache-2.0 OR MIT

//! The structured central map and its inversion.
//!
//! Variables are laid out as `v` vinegars, `d` diagonal variables, `o1`
//! first-layer oils and `o2` second-layer oils. Polynomials come in the same
//! order: `d` diagonal polynomials, `o1` oil-vinegar polynomials over the
//! first `v + d` variables, and `o2` oil-vinegar polynomials over the first
//! `v + d + o1` variables.
//!
//! Each polynomial is kept in its native arity with only its structurally
//! allowed coefficients stored. Oil-vinegar polynomials use the leading
//! variables as vinegars, so embedding into `n` variables needs no index
//! shift.

mod subspace;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expander::ElementSource;
use crate::field::Field;
use crate::linalg::{axpy, dot, FieldMatrix, FieldVector};
use crate::params::VdooParams;
use crate::quadratic::{eval_upper, quadratic_monomials, tri_index, PolynomialMap, QuadraticPolynomial};

pub use subspace::{
    verify_keypair_subspaces, verify_subspace_structure, InputSpace, SubspaceCheck, SubspaceReport, SubspaceViolation,
};

/// Layer membership of one central polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    /// Diagonal polynomial `k` (1-based) introducing variable `x_{v+k}`.
    Diagonal(usize),
    FirstOil,
    SecondOil,
}

/// `f_k = Σ β_ij x_i x_j + (Σ α_i x_i) · x_{v+k}` with `i ≤ j < v + k`.
///
/// The new variable never appears squared, so once the earlier variables are
/// fixed it is determined by a single division.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalPoly {
    /// Number of preceding variables, `v + k - 1`.
    width: usize,
    quad: Vec<u8>,
    linear: Vec<u8>,
}

impl DiagonalPoly {
    /// Number of variables preceding the new diagonal variable.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Coefficients `β_ij` over the preceding variables, upper-triangular.
    pub fn quadratic(&self) -> &[u8] {
        &self.quad
    }

    /// Coefficients `α_i` of the cross terms `x_i · x_{v+k}`.
    pub fn cross(&self) -> &[u8] {
        &self.linear
    }

    pub fn coefficient_count(&self) -> usize {
        self.quad.len() + self.linear.len()
    }

    fn eval(&self, field: Field, x: &[u8]) -> u8 {
        let w = self.width;
        let head = eval_upper(field, w, &self.quad, &x[..w]);
        head ^ field.mul(dot(field, &self.linear, &x[..w]), x[w])
    }

    pub fn embed(&self, field: Field, n: usize) -> QuadraticPolynomial {
        let mut p = QuadraticPolynomial::zero(field, n);
        let w = self.width;
        for i in 0..w {
            for j in i..w {
                p.set_quad_coeff(i, j, self.quad[tri_index(w, i, j)]);
            }
            p.set_quad_coeff(i, w, self.linear[i]);
        }
        p
    }
}

/// Oil-vinegar polynomial: every monomial contains at least one vinegar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OilVinegarPoly {
    vinegars: usize,
    oils: usize,
    vv: Vec<u8>,
    /// `vinegars × oils`, row-major.
    vo: Vec<u8>,
}

impl OilVinegarPoly {
    pub fn vinegars(&self) -> usize {
        self.vinegars
    }

    pub fn oils(&self) -> usize {
        self.oils
    }

    pub fn vinegar_part(&self) -> &[u8] {
        &self.vv
    }

    /// Coefficient of `x_i · x_{V+j}` (0-based vinegar `i`, oil `j`).
    pub fn cross(&self, i: usize, j: usize) -> u8 {
        self.vo[i * self.oils + j]
    }

    pub fn coefficient_count(&self) -> usize {
        self.vv.len() + self.vo.len()
    }

    fn eval(&self, field: Field, x: &[u8]) -> u8 {
        let (v, o) = (self.vinegars, self.oils);
        let mut acc = eval_upper(field, v, &self.vv, &x[..v]);
        let oils = &x[v..v + o];
        for (&xi, row) in x[..v].iter().zip(self.vo.chunks_exact(o)) {
            if xi != 0 {
                acc ^= field.mul(xi, dot(field, row, oils));
            }
        }
        acc
    }

    /// Adds `Σ_i vo[i][j] x_i` into `row[j]` for the given vinegar values.
    fn linearize(&self, field: Field, vinegar: &[u8], row: &mut [u8]) {
        let o = self.oils;
        for (i, &xi) in vinegar.iter().enumerate() {
            axpy(field, xi, &self.vo[i * o..(i + 1) * o], row);
        }
    }

    pub fn embed(&self, field: Field, n: usize) -> QuadraticPolynomial {
        let (v, o) = (self.vinegars, self.oils);
        let mut p = QuadraticPolynomial::zero(field, n);
        for i in 0..v {
            for j in i..v {
                p.set_quad_coeff(i, j, self.vv[tri_index(v, i, j)]);
            }
            for j in 0..o {
                p.set_quad_coeff(i, v + j, self.vo[i * o + j]);
            }
        }
        p
    }
}

/// Samples diagonal polynomial `k` (1-based, `1 ≤ k ≤ d`).
pub fn diag_poly(params: &VdooParams, k: usize, src: &mut impl ElementSource) -> DiagonalPoly {
    assert!((1..=params.d()).contains(&k), "diagonal index out of range");
    let field = params.field();
    let width = params.v() + k - 1;
    let mut quad = vec![0; quadratic_monomials(width)];
    let mut linear = vec![0; width];
    src.fill_elements(field, &mut quad);
    src.fill_elements(field, &mut linear);
    DiagonalPoly { width, quad, linear }
}

/// Samples an oil-vinegar polynomial with `vinegars + oils` variables.
pub fn ov_poly(field: Field, vinegars: usize, oils: usize, src: &mut impl ElementSource) -> OilVinegarPoly {
    assert!(vinegars >= 1 && oils >= 1);
    let mut vv = vec![0; quadratic_monomials(vinegars)];
    let mut vo = vec![0; vinegars * oils];
    src.fill_elements(field, &mut vv);
    src.fill_elements(field, &mut vo);
    OilVinegarPoly { vinegars, oils, vv, vo }
}

/// Why one inversion attempt did not produce a preimage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InversionFailure {
    /// `Σ α_i x_i` vanished for diagonal polynomial `index` (1-based).
    ZeroDiagonalCoefficient {
        index: usize,
    },
    SingularFirstOil,
    SingularSecondOil,
}

/// Outcome of one inversion attempt. Failures are routine; the caller picks
/// fresh randomness and tries again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inversion {
    Solved(FieldVector),
    Failed(InversionFailure),
}

impl Inversion {
    pub fn solved(self) -> Option<FieldVector> {
        match self {
            Inversion::Solved(x) => Some(x),
            Inversion::Failed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CentralMap {
    params: VdooParams,
    diagonal: Vec<DiagonalPoly>,
    first_oil: Vec<OilVinegarPoly>,
    second_oil: Vec<OilVinegarPoly>,
}

impl CentralMap {
    /// Samples all `m` polynomials, in layer order, from `src`.
    pub fn generate(params: &VdooParams, src: &mut impl ElementSource) -> Self {
        let field = params.field();
        let diagonal = (1..=params.d()).map(|k| diag_poly(params, k, src)).collect();
        let v1 = params.v() + params.d();
        let first_oil = (0..params.o1()).map(|_| ov_poly(field, v1, params.o1(), src)).collect();
        let v2 = v1 + params.o1();
        let second_oil = (0..params.o2()).map(|_| ov_poly(field, v2, params.o2(), src)).collect();
        Self {
            params: *params,
            diagonal,
            first_oil,
            second_oil,
        }
    }

    /// Rebuilds a map from the sequence produced by [`CentralMap::coefficients`].
    pub fn from_coefficients(params: &VdooParams, coeffs: &[u8]) -> Result<Self> {
        let expected = central_coefficient_count(params);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        FieldVector::from_elements(params.field(), coeffs.to_vec())?;
        let mut feed = Replay { data: coeffs, pos: 0 };
        Ok(Self::generate(params, &mut feed))
    }

    pub fn params(&self) -> &VdooParams {
        &self.params
    }

    pub fn diagonal(&self) -> &[DiagonalPoly] {
        &self.diagonal
    }

    pub fn first_oil(&self) -> &[OilVinegarPoly] {
        &self.first_oil
    }

    pub fn second_oil(&self) -> &[OilVinegarPoly] {
        &self.second_oil
    }

    pub fn layers(&self) -> impl Iterator<Item = Layer> + '_ {
        (1..=self.diagonal.len())
            .map(Layer::Diagonal)
            .chain(self.first_oil.iter().map(|_| Layer::FirstOil))
            .chain(self.second_oil.iter().map(|_| Layer::SecondOil))
    }

    /// All stored coefficients, polynomial by polynomial.
    pub fn coefficients(&self) -> impl Iterator<Item = u8> + '_ {
        let diag = self.diagonal.iter().flat_map(|p| p.quad.iter().chain(&p.linear));
        let oils = self
            .first_oil
            .iter()
            .chain(&self.second_oil)
            .flat_map(|p| p.vv.iter().chain(&p.vo));
        diag.chain(oils).copied()
    }

    /// Number of stored coefficient slots, counted from the structures.
    pub fn stored_slots(&self) -> usize {
        self.diagonal.iter().map(DiagonalPoly::coefficient_count).sum::<usize>()
            + self
                .first_oil
                .iter()
                .chain(&self.second_oil)
                .map(OilVinegarPoly::coefficient_count)
                .sum::<usize>()
    }

    pub fn evaluate(&self, x: &FieldVector) -> Result<FieldVector> {
        let field = self.params.field();
        if x.field() != field {
            return Err(Error::FieldMismatch {
                left: field.order(),
                right: x.field().order(),
            });
        }
        if x.len() != self.params.n() {
            return Err(Error::DimensionMismatch {
                expected: self.params.n(),
                found: x.len(),
            });
        }
        let x = x.as_slice();
        let mut out = Vec::with_capacity(self.params.m());
        out.extend(self.diagonal.iter().map(|p| p.eval(field, x)));
        out.extend(self.first_oil.iter().chain(&self.second_oil).map(|p| p.eval(field, x)));
        Ok(FieldVector::from_raw(field, out))
    }

    /// The map as `m` generic polynomials in `n` variables.
    pub fn to_polynomial_map(&self) -> PolynomialMap {
        let field = self.params.field();
        let n = self.params.n();
        let polys = self
            .diagonal
            .iter()
            .map(|p| p.embed(field, n))
            .chain(self.first_oil.iter().chain(&self.second_oil).map(|p| p.embed(field, n)))
            .collect();
        PolynomialMap::new(field, n, polys).expect("embedded polynomials share arity")
    }

    /// One attempt at finding `x` with `F(x) = y`.
    ///
    /// Vinegars are drawn from `src`; diagonal variables follow by division,
    /// then each oil layer is a square linear system. No retries happen here.
    pub fn invert(&self, y: &FieldVector, src: &mut impl ElementSource) -> Result<Inversion> {
        let p = &self.params;
        let field = p.field();
        if y.field() != field {
            return Err(Error::FieldMismatch {
                left: field.order(),
                right: y.field().order(),
            });
        }
        if y.len() != p.m() {
            return Err(Error::DimensionMismatch {
                expected: p.m(),
                found: y.len(),
            });
        }
        let y = y.as_slice();
        let mut x = vec![0u8; p.n()];
        src.fill_elements(field, &mut x[..p.v()]);

        for (k, poly) in self.diagonal.iter().enumerate() {
            let w = poly.width;
            let head = eval_upper(field, w, &poly.quad, &x[..w]);
            let slope = dot(field, &poly.linear, &x[..w]);
            let Some(inv) = field.inv(slope) else {
                return Ok(Inversion::Failed(InversionFailure::ZeroDiagonalCoefficient {
                    index: k + 1,
                }));
            };
            x[w] = field.mul(y[k] ^ head, inv);
        }

        let d = p.d();
        if !solve_oil_layer(field, &self.first_oil, &y[d..d + p.o1()], &mut x)? {
            return Ok(Inversion::Failed(InversionFailure::SingularFirstOil));
        }
        if !solve_oil_layer(field, &self.second_oil, &y[d + p.o1()..], &mut x)? {
            return Ok(Inversion::Failed(InversionFailure::SingularSecondOil));
        }
        Ok(Inversion::Solved(FieldVector::from_raw(field, x)))
    }
}

/// Fixes the layer's vinegars from `x`, solves for its oils and writes them
/// back. Returns `false` when the linear system is singular.
fn solve_oil_layer(field: Field, layer: &[OilVinegarPoly], targets: &[u8], x: &mut [u8]) -> Result<bool> {
    let Some(first) = layer.first() else {
        return Ok(true);
    };
    let (v, o) = (first.vinegars, first.oils);
    let mut matrix = FieldMatrix::zeros(field, o, o);
    let mut rhs = vec![0u8; o];
    let mut row = vec![0u8; o];
    for (r, poly) in layer.iter().enumerate() {
        row.fill(0);
        poly.linearize(field, &x[..v], &mut row);
        for (c, &e) in row.iter().enumerate() {
            matrix.set(r, c, e);
        }
        rhs[r] = targets[r] ^ eval_upper(field, v, &poly.vv, &x[..v]);
    }
    let rhs = FieldVector::from_raw(field, rhs);
    match matrix.solve(&rhs)? {
        Some(oils) => {
            x[v..v + o].copy_from_slice(oils.as_slice());
            Ok(true)
        }
        None => Ok(false),
    }
}

/// Slot count of a central map, from the layer sizes.
pub fn central_coefficient_count(params: &VdooParams) -> usize {
    let v1 = params.v() + params.d();
    let v2 = v1 + params.o1();
    diagonal_layer_elements(params.v(), params.d())
        + oil_layer_elements(v1, params.o1())
        + oil_layer_elements(v2, params.o2())
}

/// `Σ_{i=1..d} (v_i(v_i+1)/2 + v_i)` with `v_1 = first_vinegars`, `v_{i+1} = v_i + 1`.
pub fn diagonal_layer_elements(first_vinegars: usize, d: usize) -> usize {
    (0..d)
        .map(|i| {
            let vi = first_vinegars + i;
            vi * (vi + 1) / 2 + vi
        })
        .sum()
}

/// `o · (V(V+1)/2 + o·V)` for one oil-vinegar layer.
pub fn oil_layer_elements(vinegars: usize, oils: usize) -> usize {
    oils * (vinegars * (vinegars + 1) / 2 + oils * vinegars)
}

/// Replays a fixed element sequence, used to decode stored maps.
struct Replay<'a> {
    data: &'a [u8],
    pos: usize,
}

impl ElementSource for Replay<'_> {
    fn next_byte(&mut self) -> u8 {
        self.next_element(Field::Gf256)
    }

    fn next_element(&mut self, _field: Field) -> u8 {
        let e = self.data[self.pos];
        self.pos += 1;
        e
    }

    fn fill_elements(&mut self, _field: Field, out: &mut [u8]) {
        out.copy_from_slice(&self.data[self.pos..self.pos + out.len()]);
        self.pos += out.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::{Expander, RngSource};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy() -> VdooParams {
        VdooParams::new(16, 6, 3, 3, 3).unwrap()
    }

    /// Scans every coefficient of the embedded polynomials against the
    /// zero pattern each layer requires.
    pub(crate) fn structural_violations(map: &CentralMap) -> usize {
        let p = map.params();
        let (v, d, o1, n) = (p.v(), p.d(), p.o1(), p.n());
        let first_oil = v + d..v + d + o1;
        let second_oil = v + d + o1..n;
        let mut bad = 0;
        for (poly, layer) in map.to_polynomial_map().polys().iter().zip(map.layers()) {
            if !poly.is_homogeneous() {
                bad += 1;
            }
            for i in 0..n {
                for j in i..n {
                    let c = poly.quad_coeff(i, j);
                    let allowed = match layer {
                        Layer::Diagonal(k) => {
                            let new = v + k - 1;
                            j < new || (j == new && i < new)
                        }
                        Layer::FirstOil => j < v + d + o1 && !(first_oil.contains(&i) && first_oil.contains(&j)),
                        Layer::SecondOil => !(second_oil.contains(&i) && second_oil.contains(&j)),
                    };
                    if c != 0 && !allowed {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    #[test]
    fn layer_shapes() {
        let p = toy();
        let map = CentralMap::generate(&p, &mut Expander::new(b"seed", b"F"));
        let layers: Vec<_> = map.layers().collect();
        assert_eq!(layers.len(), 9);
        assert_eq!(layers[0], Layer::Diagonal(1));
        assert_eq!(layers[2], Layer::Diagonal(3));
        assert_eq!(layers[3], Layer::FirstOil);
        assert_eq!(layers[8], Layer::SecondOil);
        assert_eq!(map.stored_slots(), central_coefficient_count(&p));
        assert_eq!(map.coefficients().count(), map.stored_slots());
    }

    #[test]
    fn first_diagonal_monomials() {
        // k = 1, v = 2: only x1², x1x2, x2², x1x3, x2x3 may appear.
        let p = VdooParams::new(16, 2, 1, 1, 1).unwrap();
        let mut src = Expander::new(b"x", b"F");
        for _ in 0..100 {
            let poly = diag_poly(&p, 1, &mut src).embed(p.field(), p.n());
            for i in 0..p.n() {
                for j in i..p.n() {
                    let allowed = matches!((i, j), (0, 0) | (0, 1) | (1, 1) | (0, 2) | (1, 2));
                    if !allowed {
                        assert_eq!(poly.quad_coeff(i, j), 0, "x{}x{}", i + 1, j + 1);
                    }
                }
            }
            assert_eq!(poly.quad_coeff(2, 2), 0);
        }
    }

    #[test]
    fn smallest_ov_poly_and_linearity_in_oils() {
        let field = Field::Gf16;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut src = RngSource::new(&mut rng);
        let ov = ov_poly(field, 1, 1, &mut src).embed(field, 2);
        assert_eq!(ov.quad_coeff(1, 1), 0);
        // With the vinegars fixed, f(vin, o) + f(vin, 0) is linear in o.
        for _ in 0..100 {
            let poly = ov_poly(field, 4, 3, &mut src).embed(field, 7);
            let vin = FieldVector::random(field, 4, &mut src).into_inner();
            let at = |oil: &[u8]| {
                let mut x = vin.clone();
                x.extend_from_slice(oil);
                poly.evaluate(&FieldVector::from_elements(field, x).unwrap()).unwrap()
            };
            let o1 = FieldVector::random(field, 3, &mut src).into_inner();
            let o2 = FieldVector::random(field, 3, &mut src).into_inner();
            let sum: Vec<u8> = o1.iter().zip(&o2).map(|(a, b)| a ^ b).collect();
            assert_eq!(at(&sum) ^ at(&[0, 0, 0]), at(&o1) ^ at(&o2));
        }
    }

    #[test]
    fn zero_patterns_hold() {
        let p = toy();
        for i in 0..100u32 {
            let map = CentralMap::generate(&p, &mut Expander::new(&i.to_le_bytes(), b"F"));
            assert_eq!(structural_violations(&map), 0);
        }
    }

    #[test]
    fn structured_evaluation_matches_embedding() {
        let p = toy();
        let map = CentralMap::generate(&p, &mut Expander::new(b"e", b"F"));
        let generic = map.to_polynomial_map();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut src = RngSource::new(&mut rng);
        for _ in 0..1000 {
            let x = FieldVector::random(p.field(), p.n(), &mut src);
            assert_eq!(map.evaluate(&x).unwrap(), generic.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn inversion_roundtrip() {
        let p = toy();
        let map = CentralMap::generate(&p, &mut Expander::new(b"inv", b"F"));
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut src = RngSource::new(&mut rng);
        let mut solved = 0;
        while solved < 1000 {
            let y = FieldVector::random(p.field(), p.m(), &mut src);
            if let Inversion::Solved(x) = map.invert(&y, &mut src).unwrap() {
                assert_eq!(map.evaluate(&x).unwrap(), y);
                solved += 1;
            }
        }
    }

    #[test]
    fn image_points_have_preimages() {
        let p = toy();
        let map = CentralMap::generate(&p, &mut Expander::new(b"img", b"F"));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut src = RngSource::new(&mut rng);
        let x0 = FieldVector::random(p.field(), p.n(), &mut src);
        let y = map.evaluate(&x0).unwrap();
        let x = (0..256)
            .find_map(|_| map.invert(&y, &mut src).unwrap().solved())
            .expect("some attempt succeeds");
        assert_eq!(map.evaluate(&x).unwrap(), y);
    }

    #[test]
    fn zero_slope_is_a_failure() {
        // v = 1 and a zero vinegar make every diagonal slope vanish.
        let p = VdooParams::new(16, 1, 1, 1, 1).unwrap();
        let map = CentralMap::generate(&p, &mut Expander::new(b"z", b"F"));
        struct Zeros;
        impl ElementSource for Zeros {
            fn next_byte(&mut self) -> u8 {
                0
            }
            fn next_element(&mut self, _: Field) -> u8 {
                0
            }
        }
        let y = FieldVector::zeros(p.field(), p.m());
        assert_eq!(
            map.invert(&y, &mut Zeros).unwrap(),
            Inversion::Failed(InversionFailure::ZeroDiagonalCoefficient { index: 1 })
        );
        assert!(map.invert(&FieldVector::zeros(p.field(), 2), &mut Zeros).is_err());
    }

    #[test]
    fn coefficient_roundtrip() {
        let p = toy();
        let map = CentralMap::generate(&p, &mut Expander::new(b"c", b"F"));
        let coeffs: Vec<u8> = map.coefficients().collect();
        assert_eq!(CentralMap::from_coefficients(&p, &coeffs).unwrap(), map);
        assert!(CentralMap::from_coefficients(&p, &coeffs[1..]).is_err());
    }

    #[test]
    fn layer_size_formulas() {
        assert_eq!(diagonal_layer_elements(60, 0), 0);
        assert_eq!(diagonal_layer_elements(2, 1), 3 + 2);
        assert_eq!(oil_layer_elements(1, 1), 1 + 1);
    }
}
