//! Exact rational scalars and rational-endpoint intervals.
//!
//! The enumeration and embedding code needs two things beyond plain
//! `BigRational` arithmetic: exact `floor(t ± sqrt(q))` for rational `t, q`
//! (loop bounds of the lattice enumeration) and interval arithmetic with
//! rational endpoints (certified real embeddings). Floating point is used
//! only to seed integer guesses that are then corrected by exact
//! comparisons, so no result ever depends on rounding behavior.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Rational from an `i64`.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// floor(sqrt(q)) for `q >= 0`, exact.
pub fn floor_sqrt(q: &Rat) -> BigInt {
    assert!(!q.is_negative(), "floor_sqrt of negative rational");
    // sqrt(n/d) = sqrt(n*d)/d; isqrt(n*d)/d is within 1 of the truth,
    // then correct by exact comparison of k^2 against q.
    let nd = q.numer() * q.denom();
    let mut k = nd.sqrt() / q.denom();
    let le = |k: &BigInt| Rat::from_integer(k.clone()) * Rat::from_integer(k.clone()) <= *q;
    while !le(&k) {
        k -= 1;
    }
    while le(&(&k + 1)) {
        k += 1;
    }
    k
}

/// Exact `floor(t + sqrt(q))` for rational `t` and `q >= 0`.
pub fn floor_add_sqrt(t: &Rat, q: &Rat) -> BigInt {
    assert!(!q.is_negative());
    // floor(t) + floor(sqrt(q)) is within 1 of the truth; fix up with the
    // exact predicate k <= t + sqrt(q), i.e. k - t <= 0 or (k - t)^2 <= q.
    let mut k = t.floor().to_integer() + floor_sqrt(q);
    let le = |k: &BigInt| {
        let d = Rat::from_integer(k.clone()) - t;
        !d.is_positive() || &d * &d <= *q
    };
    while !le(&k) {
        k -= 1;
    }
    while le(&(&k + 1)) {
        k += 1;
    }
    k
}

/// Exact `ceil(t - sqrt(q))` for rational `t` and `q >= 0`.
pub fn ceil_sub_sqrt(t: &Rat, q: &Rat) -> BigInt {
    -floor_add_sqrt(&-t.clone(), q)
}

/// Smallest-denominator rational in the closed interval `[lo, hi]`,
/// via the Stern-Brocot / continued-fraction walk.
pub fn smallest_den_in_interval(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if lo.is_negative() && !hi.is_negative() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -smallest_den_in_interval(&-hi.clone(), &-lo.clone());
    }
    // now 0 < lo <= hi
    fn go(lo: &Rat, hi: &Rat) -> Rat {
        let fl = lo.floor();
        if &fl >= lo {
            // lo is an integer
            return lo.clone();
        }
        let next = &fl + Rat::one();
        if next <= *hi {
            return next;
        }
        let frac_lo = lo - &fl;
        let frac_hi = hi - &fl;
        fl + go(&frac_hi.recip(), &frac_lo.recip()).recip()
    }
    go(lo, hi)
}

/// A closed interval with rational endpoints. `lo <= hi` always.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / rat_i(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(sign)` when the interval excludes zero, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RatInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RatInterval { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            RatInterval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            RatInterval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    pub fn add_rat(&self, c: &Rat) -> Self {
        RatInterval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }
}

/// Sum of a slice of intervals.
pub fn interval_sum(xs: &[RatInterval]) -> RatInterval {
    let mut acc = RatInterval::point(Rat::zero());
    for x in xs {
        acc = acc.add(x);
    }
    acc
}

/// 2^k as a rational for possibly negative k.
pub fn pow2(k: i64) -> Rat {
    if k >= 0 {
        Rat::from_integer(BigInt::one() << (k as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// Parses a rational matrix row "1,0,-1/3" into exact rationals.
pub fn parse_rat_list(s: &str) -> Option<Vec<Rat>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        out.push(part.parse::<Rat>().ok()?);
    }
    Some(out)
}
