// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Attack-cost estimates in field multiplications and binary gates.
//!
//! Every formula is evaluated with exact big integers; floating point only
//! appears when a final count is reported as a base-2 logarithm.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::{SecurityLevel, VdooParams};

/// Largest degree [`operating_degree`] will search.
pub const DEGREE_CAP: usize = 500;
/// Inclusive search range for the min-rank degree `b`.
pub const MINRANK_B_RANGE: core::ops::RangeInclusive<usize> = 1..=50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attack {
    Direct,
    Simple,
    RectMinRank,
    KipnisShamir,
    Intersection,
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attack::Direct => "direct",
            Attack::Simple => "simple",
            Attack::RectMinRank => "rect-minrank",
            Attack::KipnisShamir => "kipnis-shamir",
            Attack::Intersection => "intersection",
        })
    }
}

/// How the intersection-attack system size is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IntersectionModel {
    /// `E = C(k+1,2)·m − 2·C(k,2)`, `V = k·n − (2k−1)·o2`.
    #[default]
    Default,
    /// `E = C(k+1,2)²·o2 − 2·C(k,2)`, `V = k·(n·o2) − (2k−1)·o2`.
    PaperLiteral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackCost {
    pub attack: Attack,
    pub quantum: bool,
    pub log2_field_mults: f64,
    pub log2_gates: f64,
    /// Variables guessed by a hybrid step.
    pub guessed: Option<usize>,
    pub degree: Option<usize>,
    pub b: Option<usize>,
    pub r: Option<usize>,
    /// Number of oil-space copies intersected.
    pub copies: Option<usize>,
    /// The count itself, when known exactly.
    pub exact: Option<BigUint>,
}

impl AttackCost {
    fn from_exact(attack: Attack, field_bits: u32, exact: BigUint) -> Self {
        let log2_field_mults = log2_big(&exact);
        Self {
            attack,
            quantum: false,
            log2_field_mults,
            log2_gates: log2_field_mults + log2_gates_per_mul(field_bits),
            guessed: None,
            degree: None,
            b: None,
            r: None,
            copies: None,
            exact: Some(exact),
        }
    }
}

/// `log2(2b² + b)` for a field of `b` bits.
pub fn log2_gates_per_mul(bits: u32) -> f64 {
    let b = f64::from(bits);
    libm::log2(2.0 * b * b + b)
}

/// log2 of a big integer, from its bit length and leading 53 bits.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return libm::log2(x.to_u64().expect("fits") as f64);
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().expect("53 bits fit") as f64;
    libm::log2(top) + shift as f64
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `q^k` as `2^(bits·k)`.
fn field_power(bits: u32, k: usize) -> BigUint {
    BigUint::one() << (bits as usize * k)
}

/// Binomials `C(n, 0..=upto)`.
fn binomial_row(n: usize, upto: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(upto + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for i in 0..upto {
        if i >= n {
            c = BigUint::zero();
        } else {
            c = c * (n - i) / (i + 1);
        }
        row.push(c.clone());
    }
    row
}

/// First `d ≥ 1` whose coefficient of `t^d` in `(1−t²)^m / (1−t)^nv` is `≤ 0`.
///
/// For `nv ≤ m` the series is the polynomial `(1+t)^m (1−t)^(m−nv)`, whose
/// coefficients are convolutions of two binomial rows. For `nv > m` every
/// coefficient is positive.
pub fn operating_degree(m: usize, nv: usize) -> Result<usize> {
    if m == 0 || nv == 0 {
        return Err(Error::InvalidParams("operating degree needs m, nv >= 1"));
    }
    if nv > m {
        return Err(Error::DegreeBound(DEGREE_CAP));
    }
    let e = m - nv;
    let plus = binomial_row(m, DEGREE_CAP);
    let minus = binomial_row(e, DEGREE_CAP);
    for d in 1..=DEGREE_CAP {
        let mut coeff = BigInt::zero();
        for i in 0..=d {
            let term = &plus[i] * &minus[d - i];
            if term.is_zero() {
                continue;
            }
            let sign = if (d - i) % 2 == 0 { Sign::Plus } else { Sign::Minus };
            coeff += BigInt::from_biguint(sign, term);
        }
        if coeff.sign() != Sign::Plus {
            return Ok(d);
        }
    }
    Err(Error::DegreeBound(DEGREE_CAP))
}

/// `q^k · 3 · C(V−k+d, d)² · C(V−k, 2)` with `d = operating_degree(E, V−k)`,
/// minimized over `k`. Candidates without a degree or with zero cost are skipped.
fn hybrid_xl(bits: u32, equations: usize, variables: usize) -> Option<(BigUint, usize, usize)> {
    let mut best: Option<(BigUint, usize, usize)> = None;
    for k in 0..variables {
        let Some((cost, d)) = hybrid_xl_at(bits, equations, variables, k) else {
            continue;
        };
        if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
            best = Some((cost, k, d));
        }
    }
    best
}

fn hybrid_xl_at(bits: u32, equations: usize, variables: usize, k: usize) -> Option<(BigUint, usize)> {
    let nv = variables.checked_sub(k)?;
    let d = operating_degree(equations, nv).ok()?;
    let c = binomial(nv + d, d);
    let cost = field_power(bits, k) * 3u32 * &c * &c * binomial(nv, 2);
    (!cost.is_zero()).then_some((cost, d))
}

/// Direct attack with `k` of the remaining `m` variables guessed.
pub fn direct_attack_cost_at(params: &VdooParams, k: usize) -> Result<AttackCost> {
    let bits = params.field().bits();
    let (cost, d) = hybrid_xl_at(bits, params.m(), params.m(), k)
        .ok_or(Error::InvalidParams("no positive direct-attack cost at this k"))?;
    let mut out = AttackCost::from_exact(Attack::Direct, bits, cost);
    out.guessed = Some(k);
    out.degree = Some(d);
    Ok(out)
}

/// Direct algebraic attack: fix `n − m` variables, then hybrid XL on the
/// resulting square system.
pub fn direct_attack_cost(params: &VdooParams) -> Result<AttackCost> {
    let bits = params.field().bits();
    let (cost, k, d) =
        hybrid_xl(bits, params.m(), params.m()).ok_or(Error::InvalidParams("no positive direct-attack cost"))?;
    let mut out = AttackCost::from_exact(Attack::Direct, bits, cost);
    out.guessed = Some(k);
    out.degree = Some(d);
    Ok(out)
}

/// `3 · q · C(n−m−1+d, d)² · C(n−m−1, 2)` with `d = operating_degree(m, n−m)`.
pub fn simple_attack_cost(params: &VdooParams) -> Result<AttackCost> {
    let bits = params.field().bits();
    let (m, n) = (params.m(), params.n());
    let d = operating_degree(m, n - m)?;
    let reduced = n - m - 1;
    let c = binomial(reduced + d, d);
    let cost = field_power(bits, 1) * 3u32 * &c * &c * binomial(reduced, 2);
    if cost.is_zero() {
        return Err(Error::InvalidParams("simple-attack cost vanishes"));
    }
    let mut out = AttackCost::from_exact(Attack::Simple, bits, cost);
    out.guessed = Some(1);
    out.degree = Some(d);
    Ok(out)
}

/// Rectangular min-rank cost at a fixed `b`:
/// `3 · q · (n−m−1)(o2+1) · C(n, r)² · C(n−m+b−3, b)³`.
pub fn rect_minrank_cost_at(params: &VdooParams, r: usize, b: usize) -> BigUint {
    let (m, n, o2) = (params.m(), params.n(), params.o2());
    let Some(top) = (n - m + b).checked_sub(3) else {
        return BigUint::zero();
    };
    let cr = binomial(n, r);
    let cb = binomial(top, b);
    field_power(params.field().bits(), 1) * 3u32 * (n - m - 1) * (o2 + 1) * &cr * &cr * &cb * &cb * &cb
}

/// Rectangular min-rank attack, minimized over `b ∈ [1, 50]`. `r` defaults
/// to `o2 + 1`.
pub fn rect_minrank_cost(params: &VdooParams, r: Option<usize>) -> Result<AttackCost> {
    rect_minrank_cost_in(params, r, MINRANK_B_RANGE)
}

/// [`rect_minrank_cost`] over a caller-chosen `b` range.
pub fn rect_minrank_cost_in(
    params: &VdooParams,
    r: Option<usize>,
    b_range: core::ops::RangeInclusive<usize>,
) -> Result<AttackCost> {
    let r = r.unwrap_or(params.o2() + 1);
    let mut best: Option<(BigUint, usize)> = None;
    for b in b_range {
        let cost = rect_minrank_cost_at(params, r, b);
        if !cost.is_zero() && best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, b));
        }
    }
    let (cost, b) = best.ok_or(Error::InvalidParams("no positive min-rank cost"))?;
    let mut out = AttackCost::from_exact(Attack::RectMinRank, params.field().bits(), cost);
    out.b = Some(b);
    out.r = Some(r);
    Ok(out)
}

/// Kipnis–Shamir: classical `o2⁴ · q^(n−o2−1)`, quantum `o2⁴ · q^((n−o2−1)/2)`.
pub fn kipnis_shamir_cost(params: &VdooParams) -> (AttackCost, AttackCost) {
    let bits = params.field().bits();
    let e = params.n() - params.o2() - 1;
    let o2_4 = BigUint::from(params.o2()).pow(4);
    let classical_exact = &o2_4 * field_power(bits, e);
    // bits is even for both fields, so the half power is integral.
    let quantum_exact = &o2_4 << (bits as usize * e / 2);
    let mut classical = AttackCost::from_exact(Attack::KipnisShamir, bits, classical_exact);
    classical.guessed = Some(e);
    let mut quantum = AttackCost::from_exact(Attack::KipnisShamir, bits, quantum_exact);
    quantum.quantum = true;
    quantum.guessed = Some(e);
    (classical, quantum)
}

/// The power `e` of `q` for which `o2⁴ · q^e` equals `2^target_log2`.
pub fn kipnis_shamir_implied_exponent(params: &VdooParams, target_log2: f64) -> f64 {
    let o2 = params.o2() as f64;
    (target_log2 - 4.0 * libm::log2(o2)) / f64::from(params.field().bits())
}

/// `(E, V)` for intersecting `k` copies of the oil space.
pub fn intersection_system(params: &VdooParams, k: usize, model: IntersectionModel) -> Option<(usize, usize)> {
    let (m, n, o2) = (params.m(), params.n(), params.o2());
    let pairs = k * (k + 1) / 2;
    let overlaps = 2 * (k * k.saturating_sub(1) / 2);
    let removed = (2 * k).checked_sub(1)? * o2;
    match model {
        IntersectionModel::Default => Some(((pairs * m).checked_sub(overlaps)?, (k * n).checked_sub(removed)?)),
        IntersectionModel::PaperLiteral => Some((
            (pairs * pairs * o2).checked_sub(overlaps)?,
            (k * n * o2).checked_sub(removed)?,
        )),
    }
}

/// Intersection attack with two copies: success probability `q^-(n−3·o2+1)`
/// times a hybrid-XL solve of the intersection system.
pub fn intersection_cost(params: &VdooParams, model: IntersectionModel) -> Result<AttackCost> {
    const COPIES: usize = 2;
    let bits = params.field().bits();
    let (n, o2) = (params.n(), params.o2());
    let penalty = (n + 1)
        .checked_sub(3 * o2)
        .ok_or(Error::InvalidParams("n < 3·o2 - 1: intersection is not probabilistic"))?;
    let (e, v) = intersection_system(params, COPIES, model).ok_or(Error::InvalidParams("empty intersection system"))?;
    let (solve, k, d) = hybrid_xl(bits, e, v).ok_or(Error::InvalidParams("intersection system has no XL cost"))?;
    let mut out = AttackCost::from_exact(Attack::Intersection, bits, field_power(bits, penalty) * solve);
    out.guessed = Some(k);
    out.degree = Some(d);
    out.copies = Some(COPIES);
    Ok(out)
}

/// Grover speed-up on a guess of `k` field elements: `−(k/2)·log2(q)`.
pub fn grover_adjust(cost: &AttackCost, bits: u32, k: usize) -> AttackCost {
    let delta = k as f64 / 2.0 * f64::from(bits);
    AttackCost {
        quantum: true,
        log2_field_mults: cost.log2_field_mults - delta,
        log2_gates: cost.log2_gates - delta,
        exact: if k == 0 { cost.exact.clone() } else { None },
        ..cost.clone()
    }
}

/// Overrides for the free choices in the estimators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimatorOptions {
    /// Min-rank target rank; `None` means `o2 + 1`.
    pub r: Option<usize>,
    pub b_range: core::ops::RangeInclusive<usize>,
    pub intersection: IntersectionModel,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            r: None,
            b_range: MINRANK_B_RANGE,
            intersection: IntersectionModel::Default,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecuritySummary {
    pub params: VdooParams,
    pub gates_per_mul: u32,
    pub attacks: Vec<AttackCost>,
    /// Attacks that could not be costed, with the reason.
    pub skipped: Vec<(Attack, Error)>,
}

impl SecuritySummary {
    /// The cheapest attack in gates.
    pub fn weakest(&self) -> Option<&AttackCost> {
        self.attacks.iter().min_by(|a, b| a.log2_gates.total_cmp(&b.log2_gates))
    }

    /// Whether the cheapest attack meets the gate threshold of `level`.
    pub fn meets(&self, level: SecurityLevel) -> bool {
        self.weakest()
            .is_some_and(|w| w.log2_gates >= level.gate_threshold_log2())
    }
}

/// Runs every estimator, including the quantum variants of the guessing
/// attacks.
pub fn security_summary(params: &VdooParams, options: &EstimatorOptions) -> SecuritySummary {
    let bits = params.field().bits();
    let mut attacks = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |attack: Attack, result: Result<AttackCost>, attacks: &mut Vec<AttackCost>| match result {
        Ok(c) => attacks.push(c),
        Err(e) => skipped.push((attack, e)),
    };
    let direct = direct_attack_cost(params);
    if let Ok(c) = &direct {
        attacks.push(grover_adjust(c, bits, c.guessed.unwrap_or(0)));
    }
    push(Attack::Direct, direct, &mut attacks);
    let simple = simple_attack_cost(params);
    if let Ok(c) = &simple {
        attacks.push(grover_adjust(c, bits, 1));
    }
    push(Attack::Simple, simple, &mut attacks);
    push(
        Attack::RectMinRank,
        rect_minrank_cost_in(params, options.r, options.b_range.clone()),
        &mut attacks,
    );
    let (ks, ksq) = kipnis_shamir_cost(params);
    attacks.push(ks);
    attacks.push(ksq);
    push(
        Attack::Intersection,
        intersection_cost(params, options.intersection),
        &mut attacks,
    );
    attacks.sort_by_key(|a| (a.attack, a.quantum));
    SecuritySummary {
        params: *params,
        gates_per_mul: params.field().gates_per_mul(),
        attacks,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Coefficients of the series by repeated prefix sums, one per factor
    /// of `1/(1−t)`.
    fn series_oracle(m: usize, nv: usize, len: usize) -> Vec<BigInt> {
        let mut a = vec![BigInt::zero(); len];
        for j in 0..=m {
            if 2 * j < len {
                let c = BigInt::from(binomial(m, j));
                a[2 * j] = if j % 2 == 0 { c } else { -c };
            }
        }
        for _ in 0..nv {
            let mut acc = BigInt::zero();
            for x in a.iter_mut() {
                acc += &*x;
                *x = acc.clone();
            }
        }
        a
    }

    fn oracle_degree(m: usize, nv: usize) -> Option<usize> {
        let series = series_oracle(m, nv, 120);
        (1..series.len()).find(|&d| series[d].sign() != Sign::Plus)
    }

    #[test]
    fn operating_degree_matches_series_grid() {
        for m in 1..=30 {
            for nv in 1..=30 {
                match oracle_degree(m, nv) {
                    Some(d) => assert_eq!(operating_degree(m, nv).unwrap(), d, "m={m} nv={nv}"),
                    None => assert!(matches!(operating_degree(m, nv), Err(Error::DegreeBound(_)))),
                }
            }
        }
    }

    #[test]
    fn operating_degree_examples() {
        // (1−t²)/(1−t) = 1 + t.
        assert_eq!(operating_degree(1, 1).unwrap(), 2);
        assert_eq!(operating_degree(100, 88).unwrap(), 28);
        assert!(operating_degree(0, 3).is_err());
        assert!(operating_degree(3, 4).is_err());
    }

    #[test]
    fn operating_degree_monotone_in_variables() {
        for m in 1..=40 {
            let mut prev = 0;
            for nv in 1..=m {
                let d = operating_degree(m, nv).unwrap();
                assert!(d >= prev, "m={m} nv={nv}");
                prev = d;
            }
        }
    }

    #[test]
    fn log2_of_big_values() {
        assert_eq!(log2_big(&BigUint::from(1u32)), 0.0);
        assert_eq!(log2_big(&(BigUint::one() << 300usize)), 300.0);
        let x = BigUint::from(3u32) << 200usize;
        assert!((log2_big(&x) - (200.0 + libm::log2(3.0))).abs() < 1e-12);
    }

    #[test]
    fn gate_model() {
        assert_eq!(libm::exp2(log2_gates_per_mul(4)).round(), 36.0);
        assert_eq!(libm::exp2(log2_gates_per_mul(8)).round(), 136.0);
        let p = SecurityLevel::L1.params();
        let c = simple_attack_cost(&p).unwrap();
        assert!((c.log2_gates - c.log2_field_mults - libm::log2(36.0)).abs() < 1e-12);
    }

    #[test]
    fn kipnis_shamir_identities() {
        let p = SecurityLevel::L1.params();
        let (c, q) = kipnis_shamir_cost(&p);
        let o2 = libm::log2(36.0);
        assert!((q.log2_field_mults - ((c.log2_field_mults - 4.0 * o2) / 2.0 + 4.0 * o2)).abs() < 1e-9);
        assert!((c.log2_field_mults - (4.0 * o2 + 123.0 * 4.0)).abs() < 1e-9);
        let g = grover_adjust(&c, 4, 123);
        assert!((g.log2_field_mults - q.log2_field_mults).abs() < 1e-9);
        assert!((kipnis_shamir_implied_exponent(&p, c.log2_field_mults) - 123.0).abs() < 1e-9);
    }

    #[test]
    fn grover_identity_at_zero() {
        let c = simple_attack_cost(&SecurityLevel::L1.params()).unwrap();
        let g = grover_adjust(&c, 4, 0);
        assert_eq!(g.log2_field_mults, c.log2_field_mults);
        assert!((grover_adjust(&c, 4, 1).log2_field_mults - (c.log2_field_mults - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn direct_candidate_at_k12() {
        let c = direct_attack_cost_at(&SecurityLevel::L1.params(), 12).unwrap();
        assert_eq!(c.degree, Some(28));
        let best = direct_attack_cost(&SecurityLevel::L1.params()).unwrap();
        assert!(best.log2_field_mults <= c.log2_field_mults);
    }

    #[test]
    fn direct_cost_nondecreasing_in_m() {
        for o2 in 1..6 {
            let mut prev = f64::NEG_INFINITY;
            for d in 1..6 {
                let p = VdooParams::new(16, 4, d, 2, o2).unwrap();
                let c = direct_attack_cost(&p).unwrap().log2_field_mults;
                assert!(c >= prev, "d={d} o2={o2}");
                prev = c;
            }
        }
    }

    #[test]
    fn minrank_b_is_argmin() {
        let p = SecurityLevel::L1.params();
        let c = rect_minrank_cost(&p, None).unwrap();
        let b = c.b.unwrap();
        let at = |b| rect_minrank_cost_at(&p, 37, b);
        assert_eq!(c.r, Some(37));
        assert_eq!(Some(at(b)), c.exact);
        if b > 1 {
            assert!(at(b - 1) >= at(b));
        }
        assert!(at(b + 1) >= at(b));
    }

    #[test]
    fn intersection_penalty() {
        // n = 3·o2 exactly: the probability factor is q.
        let p = VdooParams::new(16, 4, 1, 1, 3).unwrap();
        assert_eq!(p.n(), 9);
        let c = intersection_cost(&p, IntersectionModel::Default).unwrap();
        let (e, v) = intersection_system(&p, 2, IntersectionModel::Default).unwrap();
        let (solve, _, _) = hybrid_xl(4, e, v).unwrap();
        assert_eq!(c.exact, Some(solve * 16u32));
        let bigger = VdooParams::new(16, 5, 1, 1, 3).unwrap();
        let (e2, v2) = intersection_system(&bigger, 2, IntersectionModel::Default).unwrap();
        assert_eq!((e, v, e2, v2), (13, 9, 13, 11));
    }

    #[test]
    fn intersection_models_differ() {
        let p = SecurityLevel::L1.params();
        assert_eq!(intersection_system(&p, 2, IntersectionModel::Default), Some((298, 212)));
        assert_eq!(
            intersection_system(&p, 2, IntersectionModel::PaperLiteral),
            Some((322, 11412))
        );
    }

    #[test]
    fn summary_covers_all_attacks() {
        let s = security_summary(&SecurityLevel::L1.params(), &EstimatorOptions::default());
        assert_eq!(s.gates_per_mul, 36);
        assert_eq!(s.attacks.len(), 8);
        assert!(s.skipped.is_empty());
        assert!(s.weakest().is_some());
    }
}
