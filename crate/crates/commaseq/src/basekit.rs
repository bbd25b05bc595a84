//! Base-b digit manipulation and the number-theoretic primitives (modular
//! power, power-period detection, lcm, divisor counts, triangular numbers)
//! that the rest of the crate builds on.
//!
//! Everything here is a pure function of its inputs and safe to call from any
//! number of threads.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::{Error, Result};

/// A positional base. At least 2; comma-sequence semantics additionally
/// require at least 3 (base 2 is admitted only for the escape-count series).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Radix(u32);

impl Radix {
    /// Practical ceiling: keeps `b^3` comfortably inside `u32` and cycle
    /// entries inside machine words.
    pub const MAX: u32 = 1024;

    pub fn new(b: u32) -> Radix {
        assert!((2..=Radix::MAX).contains(&b), "base must be in 2..={}", Radix::MAX);
        Radix(b)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `b` squared; the width of a danger interval and the bound on offsets.
    #[inline]
    pub fn square(self) -> u32 {
        self.0 * self.0
    }
}

impl std::fmt::Display for Radix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A comma-sequence term. Unbounded: base-10 runs reach 99,999,945 and
/// survival experiments in bases around 25 leave the 64-bit range.
pub type Value = BigUint;

/// Pre-period `k0` and period `l` of the sequence `b^k mod m`:
/// `b^k ≡ b^(k+l) (mod m)` for all `k ≥ k0`, with `l` minimal and `k0`
/// minimal for that `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodInfo {
    pub k0: u32,
    pub l: u64,
}

/// Base-b digits of `v`, most significant first. `0` yields `[0]`.
pub fn to_digits(v: &Value, b: Radix) -> Vec<u32> {
    let radix = b.get();
    if v.is_zero() {
        return vec![0];
    }
    let mut ds = v.to_radix_be(radix);
    // num-bigint hands back u8 digits only for radix <= 256.
    if radix <= 256 {
        return ds.drain(..).map(u32::from).collect();
    }
    let mut out = Vec::new();
    let mut rest = v.clone();
    let big_b = BigUint::from(radix);
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&big_b);
        out.push(r.to_u32_digits().first().copied().unwrap_or(0));
        rest = q;
    }
    out.reverse();
    out
}

/// Inverse of [`to_digits`] on canonical (no leading zero) lists.
pub fn from_digits(ds: &[u32], b: Radix) -> Result<Value> {
    if ds.is_empty() {
        return Err(Error::EmptyDigits);
    }
    let radix = b.get();
    let mut v = BigUint::zero();
    for &d in ds {
        if d >= radix {
            return Err(Error::DigitOutOfRange { base: radix, digit: d });
        }
        v = v * radix + d;
    }
    Ok(v)
}

/// `base^exp mod m` by square-and-multiply; `O(log exp)` multiplications.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m == 1 {
        return Ok(0);
    }
    let mut acc: u128 = 1;
    let mut sq: u128 = (base % m) as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * sq % m;
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq * sq % m;
        }
    }
    Ok(acc as u64)
}

/// Multiplicative order of `x` mod `m`, for `gcd(x, m) = 1`: the smallest
/// `l ≥ 1` with `x^l ≡ 1 (mod m)`. Plain scan; the moduli in this crate are
/// cycle sums below `b^3`, so no factoring machinery is warranted.
fn multiplicative_order(x: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let x = x % m;
    debug_assert_eq!(x.gcd(&m), 1);
    let mut acc = x;
    let mut l = 1u64;
    while acc != 1 {
        acc = (acc as u128 * x as u128 % m as u128) as u64;
        l += 1;
        debug_assert!(l <= m, "order scan exceeded modulus");
    }
    l
}

/// Pre-period and period of `b^k mod m`.
///
/// Two cases: when `gcd(b, m) = 1` the period is the multiplicative order of
/// `b` and the cycle starts at `k0 = 0`. Otherwise `k0` is the smallest
/// positive exponent at which `gcd(b^k, m)` has stabilized to its final value
/// `g`, and the period is the multiplicative order of `b` modulo `m / g`.
pub fn power_period(b: Radix, m: u64) -> Result<PeriodInfo> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let base = u64::from(b.get());
    let g1 = base.gcd(&m);
    if g1 == 1 {
        return Ok(PeriodInfo {
            k0: 0,
            l: multiplicative_order(base, m),
        });
    }
    // gcd(b^k, m) is nondecreasing and saturates; the first repeat is final.
    let mut k0 = 1u32;
    let mut pow = base % m;
    let mut g = g1;
    loop {
        pow = (pow as u128 * base as u128 % m as u128) as u64;
        let g_next = pow.gcd(&m);
        if g_next == g {
            break;
        }
        g = g_next;
        k0 += 1;
    }
    Ok(PeriodInfo {
        k0,
        l: multiplicative_order(base, m / g),
    })
}

/// Least common multiple of the entries; `1` for an empty list.
pub fn lcm_all(xs: &[u64]) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for &x in xs {
        assert!(x >= 1, "lcm entries must be positive");
        acc = acc.lcm(&BigUint::from(x));
    }
    acc
}

/// Number of odd divisors of `n`.
pub fn odd_divisor_count(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    // Strip twos, then count all divisors of the odd part by sqrt pairing.
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    let mut count = 0u32;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            count += if d * d == m { 1 } else { 2 };
        }
        d += 1;
    }
    Ok(count)
}

/// The `t` with `t(t+1)/2 = n`, if `n` is a triangular number.
pub fn triangular_index(n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    // t = (isqrt(8n + 1) - 1) / 2, then verify exactly.
    let s = (8 * n + 1).isqrt();
    let t = (s - 1) / 2;
    (t * (t + 1) / 2 == n).then_some(t)
}

/// Number of ways to write `n` as a difference `T_i - T_j` of positive
/// triangular numbers (`i > j ≥ 1`), by exhaustive search over `i ≤ n`.
///
/// This is the brute-force oracle for the escape-count recurrence; the
/// divisor-based route must agree with it.
pub fn triangular_difference_count(n: u64) -> u32 {
    let mut count = 0u32;
    for i in 2..=n {
        let ti = i * (i + 1) / 2;
        if ti <= n {
            continue;
        }
        let tj = ti - n;
        if let Some(j) = triangular_index(tj) {
            if j >= 1 && i > j {
                count += 1;
            }
        }
    }
    count
}
