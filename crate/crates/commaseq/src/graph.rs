//! The compressed point representation and the interval-crossing transform.
//!
//! A triple `(d, u, k)` stands for the integer `d·b^k - u`, the last value a
//! comma sequence takes below the boundary `d·b^k`. While a sequence crosses
//! `[d·b^k, (d+1)·b^k)` its consecutive differences cycle through a fixed
//! arithmetic progression, so the whole crossing collapses to one modular
//! computation: reduce the distance `b^k + u` by whole copies of the cycle
//! sum, then walk the few remaining entries by hand. Because `b^k mod m` is
//! eventually periodic in `k`, exponents can further be reduced modulo the
//! lcm `L(b)` of all cycle periods, which makes the whole transition system
//! finite.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::basekit::{lcm_all, mod_pow, power_period, Radix};
use crate::seq::is_mine_offset;
use crate::{Error, Result};

/// The integer `d·b^k - u` (`1 ≤ d < b`, `0 ≤ u < b²`). `k` is either an
/// exact exponent or a residue class mod `L(b)` depending on which transform
/// entry point is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub d: u32,
    pub u: u32,
    pub k: u64,
}

impl Point {
    pub fn new(d: u32, u: u32, k: u64) -> Point {
        Point { d, u, k }
    }

    /// The represented integer, for exact `k`.
    pub fn value(&self, b: Radix) -> BigUint {
        BigUint::from(b.get()).pow(u32::try_from(self.k).expect("exponent fits u32"))
            * self.d
            - self.u
    }
}

/// Result of one interval crossing: the next point, or the offset of the
/// landmine the sequence died on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Next(Point),
    Mine(u32),
}

/// The smallest set `U(b, d)` of offsets such that the last value a comma
/// sequence takes below `d·b^k` is always `d·b^k - u` with `u` in the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalUSet {
    pub b: Radix,
    pub d: u32,
    members: Vec<u32>,
}

impl MinimalUSet {
    /// Members in ascending order.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: u32) -> bool {
        self.members.binary_search(&u).is_ok()
    }
}

/// Closed form for `U(b, d)`, writing offsets as `u = rb + s`:
/// for `d ≠ 1` the pairs with `r + s < b, 0 < s`, plus those with
/// `r + s = b, s < d`; for `d = 1` the pairs with `r + s ≤ b, 0 < s < b`.
pub fn minimal_u_set(b: Radix, d: u32) -> Result<MinimalUSet> {
    let base = b.get();
    if d < 1 || d >= base {
        return Err(Error::InvalidDigit { base, d });
    }
    let mut members = Vec::new();
    for r in 0..base {
        for s in 1..base {
            let keep = if d == 1 {
                r + s <= base
            } else {
                r + s < base || (r + s == base && s < d)
            };
            if keep {
                members.push(r * base + s);
            }
        }
    }
    debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
    Ok(MinimalUSet { b, d, members })
}

/// The cyclic arithmetic progression of consecutive differences traversed
/// while crossing from `d·b^k` toward `(d+1)·b^k`, starting from the point
/// `(d, u, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTable {
    pub b: Radix,
    pub d: u32,
    pub u: u32,
    pub entries: Vec<u32>,
    pub total: u64,
}

/// Entry `m` is `((m·d - u) mod b)·b + d`, for `0 ≤ m < b / gcd(b, d)`.
pub fn cycle(b: Radix, d: u32, u: u32) -> CycleTable {
    let base = b.get();
    assert!((1..base).contains(&d), "digit out of range");
    assert!(u < b.square(), "offset out of range");
    let len = base / base.gcd(&d);
    let entries: Vec<u32> = (0..len)
        .map(|m| {
            let residue = (i64::from(m) * i64::from(d) - i64::from(u)).rem_euclid(i64::from(base));
            residue as u32 * base + d
        })
        .collect();
    let total = entries.iter().map(|&e| u64::from(e)).sum();
    CycleTable { b, d, u, entries, total }
}

#[derive(Clone, Copy, PartialEq)]
enum KMode {
    Exact,
    Residue,
}

fn validate_point(b: Radix, p: &Point, mode: KMode) -> Result<()> {
    let base = b.get();
    let invalid = |reason| Error::InvalidPoint {
        base,
        d: p.d,
        u: p.u,
        k: p.k,
        reason,
    };
    if p.d < 1 || p.d >= base {
        return Err(invalid("digit out of range"));
    }
    if p.u >= b.square() {
        return Err(invalid("offset out of range"));
    }
    // The crossing law holds from the danger-interval scale upward; a residue
    // class always stands for sufficiently large exponents.
    if mode == KMode::Exact && p.k < 2 {
        return Err(invalid("exponent below the compressed regime"));
    }
    if p.d == 1 && is_mine_offset(b, p.u) {
        return Err(invalid("point is a landmine; no successor exists"));
    }
    Ok(())
}

/// Close the residual gap by hand: walk cycle entries from the front,
/// stopping early on a landmine when the crossing approaches a power of `b`.
pub(crate) fn close_gap(b: Radix, d: u32, table: &CycleTable, gap: u64) -> u32 {
    let base = b.get();
    let bsq = u64::from(b.square());
    if gap == 0 {
        // The modular shortcut would land exactly on the boundary, which is
        // never chosen; the true final value is one cycle entry back.
        return *table.entries.last().expect("cycle is never empty");
    }
    let mut gap = gap;
    let mut i = 0usize;
    while gap > u64::from(table.entries[i]) {
        if gap < bsq && d == base - 1 && is_mine_offset(b, gap as u32) {
            break;
        }
        gap -= u64::from(table.entries[i]);
        i += 1;
    }
    gap as u32
}

fn outcome(b: Radix, d: u32, u_next: u32, k_next: impl FnOnce() -> u64) -> StepOutcome {
    let base = b.get();
    if d < base - 1 {
        StepOutcome::Next(Point::new(d + 1, u_next, k_next()))
    } else if is_mine_offset(b, u_next) {
        StepOutcome::Mine(u_next)
    } else {
        StepOutcome::Next(Point::new(1, u_next, k_next()))
    }
}

/// One interval crossing with an exact exponent: the distance to the next
/// boundary is exactly `b^k + u`, reduced modulo the cycle sum.
pub fn advance_point_exact(b: Radix, p: &Point) -> Result<StepOutcome> {
    validate_point(b, p, KMode::Exact)?;
    let table = cycle(b, p.d, p.u);
    let gap = (mod_pow(u64::from(b.get()), p.k, table.total)? + u64::from(p.u)) % table.total;
    let u_next = close_gap(b, p.d, &table, gap);
    Ok(outcome(b, p.d, u_next, || {
        if p.d == b.get() - 1 {
            p.k + 1
        } else {
            p.k
        }
    }))
}

/// One interval crossing with `k` read as a residue class mod `L`; valid for
/// sufficiently large actual exponents. `L` must be a multiple of every cycle
/// period, which `big_L` guarantees.
pub fn advance_point(b: Radix, p: &Point, l_wrap: u64) -> Result<StepOutcome> {
    validate_point(b, p, KMode::Residue)?;
    if p.k >= l_wrap {
        return Err(Error::InvalidPoint {
            base: b.get(),
            d: p.d,
            u: p.u,
            k: p.k,
            reason: "residue class exceeds the wrap period",
        });
    }
    let table = cycle(b, p.d, p.u);
    let period = power_period(b, table.total)?;
    debug_assert_eq!(l_wrap % period.l, 0, "wrap period must absorb every cycle period");
    let exponent = shifted_exponent(p.k, period.k0, period.l);
    let gap = (mod_pow(u64::from(b.get()), exponent, table.total)? + u64::from(p.u)) % table.total;
    let u_next = close_gap(b, p.d, &table, gap);
    Ok(outcome(b, p.d, u_next, || {
        if p.d == b.get() - 1 {
            (p.k + 1) % l_wrap
        } else {
            p.k
        }
    }))
}

/// `k0 + ((kappa - k0) mod l)`: the exponent actually raised to when `kappa`
/// names a residue class of sufficiently large exponents.
pub(crate) fn shifted_exponent(kappa: u64, k0: u32, l: u64) -> u64 {
    let k0 = u64::from(k0);
    k0 + (kappa % l + l - k0 % l) % l
}

/// `L(b)`: the lcm of the periods of `b^k` modulo every cycle sum, over all
/// digits `d` and offsets `u ∈ U(b, d) ∪ {0}`.
pub fn big_l(b: Radix) -> BigUint {
    let mut periods = Vec::new();
    for d in 1..b.get() {
        let uset = minimal_u_set(b, d).expect("digit in range");
        for u in uset.members().iter().copied().chain([0]) {
            let total = cycle(b, d, u).total;
            periods.push(power_period(b, total).expect("positive modulus").l);
        }
    }
    lcm_all(&periods)
}

/// The multiset of cycle periods `l(d, u)` behind `big_l`, as `(d, u, l)`.
pub fn period_multiset(b: Radix) -> Vec<(u32, u32, u64)> {
    let mut out = Vec::new();
    for d in 1..b.get() {
        let uset = minimal_u_set(b, d).expect("digit in range");
        for u in uset.members().iter().copied().chain([0]) {
            let total = cycle(b, d, u).total;
            out.push((d, u, power_period(b, total).expect("positive modulus").l));
        }
    }
    out
}

/// Number of valid arrival offsets below a power of the base: `|U(b, 1)|`.
pub fn valid_u_count(b: Radix) -> u64 {
    minimal_u_set(b, 1).expect("d = 1 always valid").len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn minimal_u_examples() {
        let set = minimal_u_set(Radix::new(3), 1).unwrap();
        assert_eq!(set.members(), &[1, 2, 4, 5, 7]);

        assert!(minimal_u_set(Radix::new(10), 2).unwrap().contains(14));
        assert_eq!(minimal_u_set(Radix::new(10), 1).unwrap().len(), 54);

        assert!(minimal_u_set(Radix::new(10), 0).is_err());
        assert!(minimal_u_set(Radix::new(10), 10).is_err());
    }

    #[test]
    fn minimal_u_cardinalities() {
        for b in 3..=20u32 {
            let radix = Radix::new(b);
            for d in 1..b {
                let expect = if d == 1 {
                    b * (b + 1) / 2 - 1
                } else {
                    b * (b - 1) / 2 + d - 1
                };
                assert_eq!(
                    minimal_u_set(radix, d).unwrap().len() as u32,
                    expect,
                    "b={b} d={d}"
                );
            }
        }
    }

    #[test]
    #[allow(clippy::int_plus_one)] // keep the scan predicate in its stated form
    fn valid_u_matches_scan_predicate() {
        // The scan counts u in [1, b²) with u ≤ b·(-u mod b) + b - 1.
        for b in 3..=30u32 {
            let radix = Radix::new(b);
            let scan = (1..b * b)
                .filter(|&u| {
                    let neg = (b - u % b) % b;
                    u <= b * neg + b - 1
                })
                .count() as u64;
            assert_eq!(valid_u_count(radix), scan, "b={b}");
            assert_eq!(valid_u_count(radix), u64::from(b * (b + 1) / 2 - 1), "b={b}");
        }
    }

    #[test]
    fn cycle_examples() {
        let t = cycle(Radix::new(10), 6, 8);
        assert_eq!(t.entries, vec![26, 86, 46, 6, 66]);
        assert_eq!(t.total, 230);

        let t = cycle(Radix::new(10), 1, 0);
        assert_eq!(t.entries, vec![1, 11, 21, 31, 41, 51, 61, 71, 81, 91]);

        for u in [0u32, 7, 31, 99] {
            assert_eq!(cycle(Radix::new(10), 5, u).entries.len(), 2);
        }
    }

    #[test]
    fn cycle_entry_bounds() {
        for b in 3..=12u32 {
            let radix = Radix::new(b);
            for d in 1..b {
                for u in 0..b * b {
                    let t = cycle(radix, d, u);
                    assert!(t.entries.iter().all(|&e| e >= d && e <= b * b - b + d));
                    assert!(t.total > 0);
                }
            }
        }
    }

    #[test]
    fn advance_anchors() {
        let b10 = Radix::new(10);
        let step1 = advance_point_exact(b10, &Point::new(1, 6, 2)).unwrap();
        assert_eq!(step1, StepOutcome::Next(Point::new(2, 14, 2)));
        let step2 = advance_point_exact(b10, &Point::new(2, 14, 2)).unwrap();
        assert_eq!(step2, StepOutcome::Next(Point::new(3, 52, 2)));
        // From 5992 = (6, 8, 3): partial answer (7, u', 3).
        match advance_point_exact(b10, &Point::new(6, 8, 3)).unwrap() {
            StepOutcome::Next(p) => {
                assert_eq!((p.d, p.k), (7, 3));
            }
            StepOutcome::Mine(_) => panic!("crossing from (6, 8, 3) does not die"),
        }
    }

    #[test]
    fn advance_rejects_bad_points() {
        let b10 = Radix::new(10);
        assert!(advance_point_exact(b10, &Point::new(0, 5, 3)).is_err());
        assert!(advance_point_exact(b10, &Point::new(3, 100, 3)).is_err());
        // (1, 55, k) is the landmine ...45 just below 10^k.
        assert!(advance_point_exact(b10, &Point::new(1, 55, 4)).is_err());
        // Residue class must sit below the wrap period.
        assert!(advance_point(b10, &Point::new(2, 0, 924), 924).is_err());
    }

    #[test]
    fn big_l_small_base() {
        assert_eq!(big_l(Radix::new(3)).to_u64(), Some(4));
    }

    #[test]
    fn periods_divide_big_l() {
        for b in 3..=8u32 {
            let radix = Radix::new(b);
            let l = big_l(radix).to_u64().unwrap();
            for (d, u, period) in period_multiset(radix) {
                assert_eq!(l % period, 0, "b={b} d={d} u={u}");
            }
        }
    }

    #[test]
    fn residue_mode_matches_exact_for_large_k() {
        // Beyond every pre-period the residue-class transform must reproduce
        // the exact one, including the wrapped exponent.
        for b in 3..=7u32 {
            let radix = Radix::new(b);
            let l = big_l(radix).to_u64().unwrap();
            let k_lo = 64; // comfortably past any k0 (moduli are below b^3)
            for d in 1..b {
                let uset = minimal_u_set(radix, d).unwrap();
                for u in uset.members().iter().copied().chain([0]) {
                    if d == 1 && is_mine_offset(radix, u) {
                        continue;
                    }
                    for k in k_lo..k_lo + 2 * l {
                        let exact = advance_point_exact(radix, &Point::new(d, u, k)).unwrap();
                        let class = advance_point(radix, &Point::new(d, u, k % l), l).unwrap();
                        match (exact, class) {
                            (StepOutcome::Next(pe), StepOutcome::Next(pc)) => {
                                assert_eq!((pe.d, pe.u), (pc.d, pc.u), "b={b} d={d} u={u} k={k}");
                                assert_eq!(pe.k % l, pc.k, "b={b} d={d} u={u} k={k}");
                            }
                            (StepOutcome::Mine(me), StepOutcome::Mine(mc)) => {
                                assert_eq!(me, mc, "b={b} d={d} u={u} k={k}")
                            }
                            (e, c) => panic!("b={b} d={d} u={u} k={k}: {e:?} vs {c:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_value_representation() {
        let b10 = Radix::new(10);
        assert_eq!(Point::new(6, 8, 3).value(b10).to_u64(), Some(5992));
        assert_eq!(Point::new(1, 6, 2).value(b10).to_u64(), Some(94));
    }
}
