//! Exact comparisons against the bound expressions, with no floating point
//! anywhere: square-root comparisons go through squaring, logarithms through
//! integer powers (the bit length of n^(2^k) brackets 2^k * log2 n), and the
//! two genuinely irrational bounds are decided by interval refinement, with
//! proofs of separation in the cases the comparators accept.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// lhs versus sqrt(n), by squaring.
pub fn cmp_int_vs_sqrt(lhs: &BigUint, n: &BigUint) -> Ordering {
    (lhs * lhs).cmp(n)
}

/// The same comparison through a fixed-precision decimal evaluation of the
/// square root (floor of sqrt(n * 100^digits) against lhs * 10^digits).
/// Used as the independent cross-check of the squaring route.
pub fn cmp_int_vs_sqrt_decimal(lhs: &BigUint, n: &BigUint, digits: u32) -> Ordering {
    let scale = BigUint::from(10u32).pow(digits);
    let scaled_sqrt = (n * &scale * &scale).sqrt();
    let lhs_scaled = lhs * &scale;
    match lhs_scaled.cmp(&scaled_sqrt) {
        Ordering::Less => Ordering::Less,
        Ordering::Greater => Ordering::Greater,
        // floor collision: decide exactly by squaring
        Ordering::Equal => cmp_int_vs_sqrt(lhs, n),
    }
}

/// `Some(j)` when n = 2^j.
pub fn exact_log2(n: &BigUint) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    if n.count_ones() == 1 {
        Some(n.bits() - 1)
    } else {
        None
    }
}

/// `Some(s)` when n = s^2.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Rational bracket lo/2^k <= sqrt(n) <= hi/2^k.
fn sqrt_bounds(n: &BigUint, k: u32) -> (BigUint, BigUint) {
    let lo = (n << (2 * k)).sqrt();
    let hi = &lo + BigUint::one();
    (lo, hi)
}

/// Rational bracket lo/2^k <= log2(x) <= hi/2^k for x >= 1, from the bit
/// length of x^(2^k).
fn log2_bounds(x: &BigUint, k: u32) -> (BigUint, BigUint) {
    debug_assert!(!x.is_zero());
    let mut power = x.clone();
    for _ in 0..k {
        power = &power * &power;
    }
    let lo = BigUint::from(power.bits() - 1);
    let hi = &lo + BigUint::one();
    (lo, hi)
}

/// b versus 4 sqrt(n) log2(n), exactly. Terminates: when n is a power of two
/// or a perfect square the comparison reduces to integers, and otherwise the
/// right side is irrational (if 4 sqrt(n) log2 n were rational, raising
/// 2^(b / 4 sqrt n) = n to the sqrt(n)-th power would force n^sqrt(n) to be
/// rational), so the brackets eventually separate.
pub fn cmp_vs_sqrt_log_bound(b: u64, n: u64) -> Ordering {
    assert!(n >= 1);
    if n == 1 {
        // the bound is 0
        return b.cmp(&0);
    }
    let n_big = BigUint::from(n);
    if let Some(j) = exact_log2(&n_big) {
        // b <= 4 j sqrt(n)  <=>  b^2 <= 16 j^2 n
        return (BigUint::from(b) * BigUint::from(b))
            .cmp(&(BigUint::from(16u32) * BigUint::from(j) * BigUint::from(j) * &n_big));
    }
    if let Some(s) = exact_sqrt(&n_big) {
        // b <= 4 s log2(n)  <=>  2^b <= n^(4s)
        let s = s.to_u64().expect("sqrt of a small degree");
        return (BigUint::one() << b).cmp(&n_big.pow(4 * s as u32));
    }
    for k in [8u32, 16, 32, 64, 128, 256] {
        let (s_lo, s_hi) = sqrt_bounds(&n_big, k);
        let (l_lo, l_hi) = log2_bounds(&n_big, k);
        // bound in [4 s_lo l_lo, 4 s_hi l_hi] / 2^(2k)
        let lhs = BigUint::from(b) << (2 * k);
        let rhs_lo = BigUint::from(4u32) * &s_lo * &l_lo;
        let rhs_hi = BigUint::from(4u32) * &s_hi * &l_hi;
        if lhs < rhs_lo {
            return Ordering::Less;
        }
        if lhs > rhs_hi {
            return Ordering::Greater;
        }
    }
    unreachable!("interval refinement failed to separate b from 4 sqrt(n) log2(n)")
}

/// order versus 2^(4 sqrt(n) (log2 n)^2), exactly, via brackets on both
/// exponents.
pub fn cmp_vs_order_bound(order: &BigUint, n: u64) -> Ordering {
    assert!(n >= 1);
    if n == 1 {
        return order.cmp(&BigUint::one());
    }
    let n_big = BigUint::from(n);
    if let (Some(j), Some(s)) = (exact_log2(&n_big), exact_sqrt(&n_big)) {
        // integral exponent: 4 j^2 s
        let exponent = 4 * j * j * s.to_u64().expect("small degree");
        return order.cmp(&(BigUint::one() << exponent));
    }
    for k in [8u32, 16, 32, 64] {
        let (s_lo, s_hi) = sqrt_bounds(&n_big, k);
        let (l_lo, l_hi) = log2_bounds(&n_big, k);
        let (o_lo, o_hi) = log2_bounds(order, k);
        // log2(order) in [o_lo, o_hi]/2^k; bound in
        // [4 s_lo l_lo^2, 4 s_hi l_hi^2] / 2^(3k)
        let lhs_lo = o_lo << (2 * k);
        let lhs_hi = o_hi << (2 * k);
        let rhs_lo = BigUint::from(4u32) * &s_lo * &l_lo * &l_lo;
        let rhs_hi = BigUint::from(4u32) * &s_hi * &l_hi * &l_hi;
        if lhs_hi < rhs_lo {
            return Ordering::Less;
        }
        if lhs_lo > rhs_hi {
            return Ordering::Greater;
        }
    }
    unreachable!("interval refinement failed to separate the order bound")
}

/// l versus 2 log2(n): l <= 2 log2 n iff 2^l <= n^2.
pub fn cmp_vs_two_log2(l: u64, n: u64) -> Ordering {
    let lhs = BigUint::one() << l;
    let rhs = BigUint::from(n) * BigUint::from(n);
    match lhs.cmp(&rhs) {
        Ordering::Equal => Ordering::Equal,
        // 2^l < n^2 means l < 2 log2 n unless equality of reals, which
        // happens exactly at 2^l = n^2
        other => other,
    }
}

/// m >= (sqrt(n) - 1) / 2 iff (2m + 1)^2 >= n.
pub fn min_degree_bound_holds(m: u64, n: u64) -> bool {
    let lhs = BigUint::from(2 * m + 1);
    cmp_int_vs_sqrt(&lhs, &BigUint::from(n)) != Ordering::Less
}
