//! Integer utilities: trial-division factorization, valuations and
//! three-valued squarefree testing.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Outcome of a squarefree test that may run out of trial-division budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Squarefree {
    Yes,
    No,
    /// The unfactored cofactor was too large to classify.
    Unknown,
}

/// Trial-division factorization of `n > 0`. Returns `(prime, exponent)`
/// pairs in ascending order. Intended for conductor-sized inputs; callers
/// guard the magnitude.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Returns `Some(r)` with `r*r == n` when `n` is a perfect square.
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Squarefree test by trial division up to `bound` per factor.
///
/// After stripping every prime `<= bound`, a cofactor `r > 1` is classified
/// without further factoring: a perfect square is not squarefree, and any
/// non-square `r < bound^3` has at most two prime factors, both single.
/// Beyond that the answer is `Unknown`; downstream gates propagate it
/// rather than assume squarefreeness.
pub fn squarefree_status(n: &BigInt, bound: u64) -> Squarefree {
    let mut n = n.abs();
    if n.is_zero() {
        return Squarefree::No;
    }
    if n.is_one() {
        return Squarefree::Yes;
    }
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n && p <= bound {
        if valuation(&n, p) >= 2 {
            return Squarefree::No;
        }
        while (&n % BigInt::from(p)).is_zero() {
            n /= BigInt::from(p);
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if n.is_one() {
        return Squarefree::Yes;
    }
    if perfect_sqrt(&n).is_some() {
        return Squarefree::No;
    }
    // n has no prime factor <= bound; if n < bound^3 it is p or p*q.
    let cube = BigInt::from(bound) * BigInt::from(bound) * BigInt::from(bound);
    if n < cube {
        Squarefree::Yes
    } else {
        Squarefree::Unknown
    }
}

/// gcd of three integers.
pub fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b).gcd(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), alloc::vec![]);
        assert_eq!(factorize(63), alloc::vec![(3, 2), (7, 1)]);
        assert_eq!(factorize(793), alloc::vec![(13, 1), (61, 1)]);
        assert_eq!(factorize(97), alloc::vec![(97, 1)]);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(54), 3), 3);
        assert_eq!(valuation(&BigInt::from(-49), 7), 2);
        assert_eq!(valuation(&BigInt::from(10), 3), 0);
    }

    #[test]
    fn squarefree_cases() {
        assert_eq!(squarefree_status(&BigInt::from(13), 1000), Squarefree::Yes);
        assert_eq!(squarefree_status(&BigInt::from(27), 1000), Squarefree::No);
        assert_eq!(squarefree_status(&BigInt::from(301), 1000), Squarefree::Yes);
        assert_eq!(
            squarefree_status(&BigInt::from(7519), 1000),
            Squarefree::Yes
        );
        // large prime square beyond the trial bound is still caught
        let p = BigInt::from(1_000_003u64);
        assert_eq!(squarefree_status(&(&p * &p), 100), Squarefree::No);
        // unclassifiable: product of three distinct primes past the bound
        let q = BigInt::from(1_000_033u64);
        let r = BigInt::from(1_000_037u64);
        assert_eq!(squarefree_status(&(&p * &q * &r), 100), Squarefree::Unknown);
    }
}
