//! The comma-sequence successor rule, landmines, and sequence generation.
//!
//! A term `v` with least significant digit `x` is followed by `w = v + bx + y`
//! where `y` is the most significant digit of `w`; the strict rule picks the
//! smallest such `y`. Values with no successor ("landmines") are exactly the
//! base-b integers `(b-1, ..., b-1, x, y)` whose last two digits are nonzero
//! and sum to `b - 1`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::basekit::{to_digits, Radix, Value};

/// True iff `v` has no successor in base `b`.
pub fn is_landmine(b: Radix, v: &Value) -> bool {
    let ds = to_digits(v, b);
    landmine_digits(b.get(), &ds)
}

fn landmine_digits(b: u32, ds: &[u32]) -> bool {
    if ds.len() < 2 {
        return false;
    }
    let x = ds[ds.len() - 2];
    let y = ds[ds.len() - 1];
    x >= 1 && y >= 1 && x + y == b - 1 && ds[..ds.len() - 2].iter().all(|&d| d == b - 1)
}

/// True iff `b^k - u` is a landmine for `k ≥ 2`: writing `u = rb + s`,
/// exactly when `r + s = b` with `1 ≤ r ≤ b - 2` (equivalently `2 ≤ s`).
pub fn is_mine_offset(b: Radix, u: u32) -> bool {
    let base = b.get();
    debug_assert!(u < b.square());
    let r = u / base;
    let s = u % base;
    r + s == base && s >= 2
}

/// The set `F_b(v)` of values that could follow `v`; at most two elements,
/// ascending.
pub fn successors(b: Radix, v: &Value) -> Vec<Value> {
    let base = b.get();
    let x = v % base;
    let w0 = v + &x * base;
    let mut out = Vec::new();
    for y in 1..base {
        let w = &w0 + y;
        if to_digits(&w, b)[0] == y {
            out.push(w);
        }
    }
    out
}

/// The strict successor: the smallest element of `F_b(v)`, absent iff `v` is
/// a landmine. Scans `y` from 1 to `b - 1` and tests the most significant
/// digit directly.
pub fn strict_successor(b: Radix, v: &Value) -> Option<Value> {
    let base = b.get();
    let x = v % base;
    let w0 = v + &x * base;
    for y in 1..base {
        let w = &w0 + y;
        if to_digits(&w, b)[0] == y {
            return Some(w);
        }
    }
    None
}

/// Summary of a comma-sequence run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSummary {
    /// Terms produced, counting the initial value.
    pub length: u64,
    /// Final term produced.
    pub last: Value,
    /// True when the run ended at a landmine; false when `max_terms` cut it.
    pub terminated: bool,
}

// Values below this always stay in u128 range after one successor step.
const PROMOTE_LIMIT: u128 = 1 << 126;

#[derive(Clone)]
enum Cur {
    Small(u128),
    Big(BigUint),
}

impl Cur {
    fn from_value(v: &Value) -> Cur {
        match v.to_u128() {
            Some(s) if s < PROMOTE_LIMIT => Cur::Small(s),
            _ => Cur::Big(v.clone()),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            Cur::Small(v) => BigUint::from(*v),
            Cur::Big(v) => v.clone(),
        }
    }

    fn step(&self, b: Radix) -> Option<Cur> {
        match self {
            Cur::Small(v) => strict_successor_u128(b.get(), *v).map(|w| {
                if w < PROMOTE_LIMIT {
                    Cur::Small(w)
                } else {
                    Cur::Big(BigUint::from(w))
                }
            }),
            Cur::Big(v) => strict_successor(b, v).map(Cur::Big),
        }
    }
}

pub(crate) fn msd_u128(mut v: u128, b: u32) -> u32 {
    let b = u128::from(b);
    while v >= b {
        v /= b;
    }
    v as u32
}

/// Strict successor on machine words; caller keeps `v` below 2^126.
pub(crate) fn strict_successor_u128(b: u32, v: u128) -> Option<u128> {
    debug_assert!((1..PROMOTE_LIMIT).contains(&v));
    let x = v % u128::from(b);
    let w0 = v + x * u128::from(b);
    (1..b).map(|y| (y, w0 + u128::from(y))).find_map(|(y, w)| (msd_u128(w, b) == y).then_some(w))
}

/// Run the comma sequence from `v0`, up to `max_terms` terms when given.
pub fn comma_sequence(b: Radix, v0: &Value, max_terms: Option<u64>) -> SequenceSummary {
    assert!(!v0.is_zero(), "initial value must be positive");
    let mut cur = Cur::from_value(v0);
    let mut length = 1u64;
    loop {
        match cur.step(b) {
            None => {
                return SequenceSummary {
                    length,
                    last: cur.to_value(),
                    terminated: true,
                }
            }
            Some(next) => {
                if max_terms.is_some_and(|bound| length >= bound) {
                    return SequenceSummary {
                        length,
                        last: cur.to_value(),
                        terminated: false,
                    };
                }
                cur = next;
                length += 1;
            }
        }
    }
}

/// Lazily yields the terms of the comma sequence starting at `v0`.
pub fn comma_terms(b: Radix, v0: &Value) -> CommaTerms {
    assert!(!v0.is_zero(), "initial value must be positive");
    CommaTerms {
        b,
        cur: Some(Cur::from_value(v0)),
    }
}

pub struct CommaTerms {
    b: Radix,
    cur: Option<Cur>,
}

impl Iterator for CommaTerms {
    type Item = Value;

    fn next(&mut self) -> Option<Value> {
        let cur = self.cur.take()?;
        let out = cur.to_value();
        self.cur = cur.step(self.b);
        Some(out)
    }
}
