// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Parameter tuples `(q, v, d, o1, o2)` and the named security levels.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Scheme parameters. `m = d + o1 + o2` equations in `n = v + m` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VdooParams {
    field: Field,
    v: usize,
    d: usize,
    o1: usize,
    o2: usize,
}

impl VdooParams {
    /// Builds a parameter tuple, rejecting hard violations.
    ///
    /// Soft findings such as a custom tuple are reported by [`validate`] but
    /// do not prevent construction.
    pub fn new(q: u32, v: usize, d: usize, o1: usize, o2: usize) -> Result<Self> {
        if let Some(issue) = validate(q, v, d, o1, o2).into_iter().find(ParamIssue::is_fatal) {
            return Err(match issue {
                ParamIssue::UnsupportedField(q) => Error::UnsupportedField(q),
                ParamIssue::ZeroCount(_) => Error::InvalidParams("v, d, o1 and o2 must all be positive"),
                _ => Error::InvalidParams("invalid parameter tuple"),
            });
        }
        let field = Field::from_order(q)?;
        Ok(Self { field, v, d, o1, o2 })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order() as u32
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn o1(&self) -> usize {
        self.o1
    }

    pub fn o2(&self) -> usize {
        self.o2
    }

    /// Number of equations.
    pub fn m(&self) -> usize {
        self.d + self.o1 + self.o2
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.v + self.m()
    }

    /// The named level these parameters correspond to, if any.
    pub fn level(&self) -> Option<SecurityLevel> {
        SecurityLevel::ALL.into_iter().find(|l| l.params() == *self)
    }

    pub fn validate(&self) -> Vec<ParamIssue> {
        validate(self.q(), self.v, self.d, self.o1, self.o2)
    }
}

impl fmt::Display for VdooParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.q(), self.v, self.d, self.o1, self.o2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SecurityLevel {
    L1,
    L3,
    L5,
}

impl SecurityLevel {
    pub const ALL: [SecurityLevel; 3] = [SecurityLevel::L1, SecurityLevel::L3, SecurityLevel::L5];

    pub fn params(self) -> VdooParams {
        let (field, v, d, o1, o2) = match self {
            SecurityLevel::L1 => (Field::Gf16, 60, 30, 34, 36),
            SecurityLevel::L3 => (Field::Gf256, 100, 30, 40, 40),
            SecurityLevel::L5 => (Field::Gf256, 120, 50, 60, 70),
        };
        VdooParams { field, v, d, o1, o2 }
    }

    /// NIST category number: 1, 3 or 5.
    pub fn number(self) -> u8 {
        match self {
            SecurityLevel::L1 => 1,
            SecurityLevel::L3 => 3,
            SecurityLevel::L5 => 5,
        }
    }

    pub fn from_number(level: u8) -> Option<Self> {
        match level {
            1 => Some(SecurityLevel::L1),
            3 => Some(SecurityLevel::L3),
            5 => Some(SecurityLevel::L5),
            _ => None,
        }
    }

    /// log2 of the gate count of the reference key search for this category.
    pub fn gate_threshold_log2(self) -> f64 {
        match self {
            SecurityLevel::L1 => 143.0,
            SecurityLevel::L3 => 207.0,
            SecurityLevel::L5 => 272.0,
        }
    }
}

impl fmt::Display for SecurityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SL-{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamIssue {
    UnsupportedField(u32),
    ZeroCount(&'static str),
    /// Not one of the named levels; keys are stamped custom/unsafe.
    Custom,
    /// `n < 3·o2`: the intersection attack is no longer probabilistic.
    BelowIntersectionRegime {
        n: usize,
        o2: usize,
    },
}

impl ParamIssue {
    pub fn is_fatal(&self) -> bool {
        matches!(self, ParamIssue::UnsupportedField(_) | ParamIssue::ZeroCount(_))
    }
}

impl fmt::Display for ParamIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamIssue::UnsupportedField(q) => write!(f, "field order {q} is not 16 or 256"),
            ParamIssue::ZeroCount(name) => write!(f, "{name} must be positive"),
            ParamIssue::Custom => f.write_str("custom parameter tuple (not a named level; unsafe)"),
            ParamIssue::BelowIntersectionRegime { n, o2 } => {
                write!(f, "n = {n} < 3·o2 = {}: intersection attack regime", 3 * o2)
            }
        }
    }
}

/// Checks a raw tuple. An empty list means a named level.
pub fn validate(q: u32, v: usize, d: usize, o1: usize, o2: usize) -> Vec<ParamIssue> {
    let mut issues = Vec::new();
    if q != 16 && q != 256 {
        issues.push(ParamIssue::UnsupportedField(q));
    }
    for (name, count) in [("v", v), ("d", d), ("o1", o1), ("o2", o2)] {
        if count == 0 {
            issues.push(ParamIssue::ZeroCount(name));
        }
    }
    let n = v + d + o1 + o2;
    if n < 3 * o2 {
        issues.push(ParamIssue::BelowIntersectionRegime { n, o2 });
    }
    let named = SecurityLevel::ALL.into_iter().any(|l| {
        let p = l.params();
        (p.q(), p.v, p.d, p.o1, p.o2) == (q, v, d, o1, o2)
    });
    if !named {
        issues.push(ParamIssue::Custom);
    }
    issues
}
