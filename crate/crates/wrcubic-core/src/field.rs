//! Real cyclic cubic fields with exact arithmetic.
//!
//! A [`CubicField`] owns a monic irreducible cubic with three real roots,
//! a Galois matrix that is *verified exactly* after numeric reconstruction,
//! certified isolating intervals for the three roots, and an integral basis
//! (the power basis when nothing better is known). Elements are rational
//! coordinate triples on the power basis `{1, rho, rho^2}`.
//!
//! Convention: the three roots are isolated in ascending order, `rho` is
//! identified with the smallest root, and the Galois generator `sigma` is
//! normalized so that the rational invariant
//! `t = (rho - s(rho)) (s(rho) - s2(rho)) (s2(rho) - rho)` is negative.
//! Swapping the generator flips the sign of `t`, so the normalization picks
//! exactly one of the two generators. Everything downstream that looks
//! symmetric in the generator choice (twisted Gram matrices in particular)
//! is invariant under the swap; the ramified-ideal constructions are not,
//! which is why the convention is fixed here once.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::poly::Cubic;
use crate::rat::{pow2, rat_i, smallest_den_in_interval, Rat, RatInterval};

/// Errors from field construction and element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// `4m = a^2 + 3b^2` has no solution with the required congruences.
    NoRepresentation,
    /// The defining-polynomial coefficient formulas did not produce the
    /// expected integrality (inconsistent conductor data).
    NonIntegralPolynomial,
    /// Conductor data violates its invariants.
    InvalidConductorData(&'static str),
    /// The polynomial has a rational root.
    ReduciblePolynomial,
    /// The polynomial does not have three distinct real roots.
    NotTotallyReal,
    /// Rational reconstruction of the Galois matrix failed up to the
    /// precision cap.
    GaloisReconstructionFailed,
    /// The claimed integral basis has the wrong discriminant or is not
    /// made of algebraic integers.
    IntegralBasisMismatch,
    DivisionByZero,
    FieldMismatch,
    /// Desk-scale limit: conductors above 10^8 are rejected.
    ConductorTooLarge,
}

impl core::fmt::Display for FieldError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FieldError::NoRepresentation => write!(
                f,
                "no representation 4m = a^2 + 3b^2 with the conductor congruences"
            ),
            FieldError::NonIntegralPolynomial => {
                write!(f, "defining-polynomial coefficients are not integral")
            }
            FieldError::InvalidConductorData(s) => write!(f, "invalid conductor data: {s}"),
            FieldError::ReduciblePolynomial => write!(f, "polynomial is reducible over Q"),
            FieldError::NotTotallyReal => {
                write!(f, "polynomial does not have three distinct real roots")
            }
            FieldError::GaloisReconstructionFailed => {
                write!(f, "Galois matrix reconstruction failed at precision cap")
            }
            FieldError::IntegralBasisMismatch => {
                write!(f, "claimed integral basis fails its discriminant identity")
            }
            FieldError::DivisionByZero => write!(f, "division by zero field element"),
            FieldError::FieldMismatch => write!(f, "elements belong to different fields"),
            FieldError::ConductorTooLarge => {
                write!(f, "conductor exceeds the 10^8 desk-scale limit")
            }
        }
    }
}

impl core::error::Error for FieldError {}

/// Conductor parametrization `4m = a^2 + 3b^2` with the congruence
/// conditions that pin the pair to one cyclic cubic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConductorData {
    pub m: u64,
    pub a: i64,
    pub b: u64,
}

impl ConductorData {
    pub fn validate(&self) -> Result<(), FieldError> {
        let (m, a, b) = (self.m as i128, self.a as i128, self.b as i128);
        if self.m == 0 {
            return Err(FieldError::InvalidConductorData("m must be positive"));
        }
        if self.m > 100_000_000 {
            return Err(FieldError::ConductorTooLarge);
        }
        if 4 * m != a * a + 3 * b * b {
            return Err(FieldError::InvalidConductorData("4m != a^2 + 3b^2"));
        }
        if b == 0 {
            return Err(FieldError::InvalidConductorData("b must be positive"));
        }
        if self.m % 3 != 0 {
            if a.rem_euclid(3) != 2 || b % 3 != 0 {
                return Err(FieldError::InvalidConductorData(
                    "3 does not divide m: need a = 2 mod 3 and b = 0 mod 3",
                ));
            }
        } else {
            let br = b % 9;
            if a.rem_euclid(9) != 6 || !(br == 3 || br == 6) {
                return Err(FieldError::InvalidConductorData(
                    "3 divides m: need a = 6 mod 9 and b = 3 or 6 mod 9",
                ));
            }
        }
        Ok(())
    }

    pub fn divisible_by_3(&self) -> bool {
        self.m % 3 == 0
    }
}

/// All `(a, b)` pairs representing the conductor `m`, sorted by `(b, a)`.
///
/// For `m` with `r` prime factors there are `2^(r-1)` such pairs, one per
/// cyclic cubic field of conductor `m`; the pair is unique only when `m` is
/// a prime or 9 times a power-free unit of that shape.
pub fn conductor_params_all(m: u64) -> Result<Vec<ConductorData>, FieldError> {
    if m == 0 {
        return Err(FieldError::InvalidConductorData("m must be positive"));
    }
    if m > 100_000_000 {
        return Err(FieldError::ConductorTooLarge);
    }
    let mut out = Vec::new();
    let four_m = 4u128 * m as u128;
    let mut b = 1u64;
    while 3u128 * (b as u128) * (b as u128) <= four_m {
        let rem = four_m - 3u128 * (b as u128) * (b as u128);
        let r = num_integer::Roots::sqrt(&rem) as u64;
        for cand in r.saturating_sub(2)..=r + 2 {
            if (cand as u128) * (cand as u128) == rem {
                for a in [cand as i64, -(cand as i64)] {
                    let cd = ConductorData { m, a, b };
                    if cd.validate().is_ok() && (a != 0 || cand != 0) {
                        out.push(cd);
                    }
                }
                if cand == 0 {
                    let cd = ConductorData { m, a: 0, b };
                    if cd.validate().is_ok() {
                        out.push(cd);
                    }
                }
                break;
            }
        }
        b += 1;
    }
    out.sort_by_key(|cd| (cd.b, cd.a));
    out.dedup();
    if out.is_empty() {
        Err(FieldError::NoRepresentation)
    } else {
        Ok(out)
    }
}

/// Canonical representation: the `(a, b)` pair with smallest `(b, a)`.
pub fn conductor_params(m: u64) -> Result<ConductorData, FieldError> {
    Ok(conductor_params_all(m)?[0])
}

/// A real cyclic cubic field. Immutable after construction; share as `Arc`.
#[derive(Debug)]
pub struct CubicField {
    min_poly: Cubic,
    conductor: Option<ConductorData>,
    /// Discriminant of the stored integral basis (the field discriminant
    /// when `maximal_order_known`).
    discriminant: BigInt,
    maximal_order_known: bool,
    /// Coordinates of `sigma(rho)` on the power basis.
    sigma_rho: [Rat; 3],
    /// Matrix of `sigma` on the power basis: columns are the coordinates
    /// of `sigma(1), sigma(rho), sigma(rho^2)`.
    galois: [[Rat; 3]; 3],
    /// Rows are coordinates of the integral-basis elements `w1, w2, w3`.
    integral_basis: [[Rat; 3]; 3],
    inv_integral_basis: [[Rat; 3]; 3],
    /// Ascending certified isolating intervals for the three real roots.
    roots: [RatInterval; 3],
}

impl PartialEq for CubicField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

/// 3x3 rational determinant.
pub fn det3(m: &[[Rat; 3]; 3]) -> Rat {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Inverse of a 3x3 rational matrix (must be nonsingular).
pub fn inv3(m: &[[Rat; 3]; 3]) -> Option<[[Rat; 3]; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let cof = |r: usize, c: usize| -> Rat {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = &m[rs[0]][cs[0]] * &m[rs[1]][cs[1]] - &m[rs[0]][cs[1]] * &m[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut out: [[Rat; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            // adjugate transpose
            out[i][j] = cof(j, i) / &d;
        }
    }
    Some(out)
}

fn mat_mul(a: &[[Rat; 3]; 3], b: &[[Rat; 3]; 3]) -> [[Rat; 3]; 3] {
    let mut out: [[Rat; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Rat::zero();
            for k in 0..3 {
                acc += &a[i][k] * &b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_vec(a: &[[Rat; 3]; 3], x: &[Rat; 3]) -> [Rat; 3] {
    let mut out: [Rat; 3] = Default::default();
    for i in 0..3 {
        let mut acc = Rat::zero();
        for k in 0..3 {
            acc += &a[i][k] * &x[k];
        }
        out[i] = acc;
    }
    out
}

impl CubicField {
    /// Field from conductor data, via the standard defining polynomial.
    ///
    /// The integral basis is `{rho, s(rho), s2(rho)}` when `3 ∤ m` and
    /// `{1, rho, s(rho)}` when `3 | m`; in both cases the basis
    /// discriminant is verified to equal `m^2` exactly.
    pub fn from_conductor(cd: &ConductorData) -> Result<Arc<Self>, FieldError> {
        cd.validate()?;
        let m = BigInt::from(cd.m);
        let a = BigInt::from(cd.a);
        let poly = if !cd.divisible_by_3() {
            let c1_num = BigInt::one() - &m;
            let (q1, r1) = c1_num.div_rem(&BigInt::from(3));
            let c0_num = -(&m * (&a - BigInt::from(3)) + BigInt::one());
            let (q0, r0) = c0_num.div_rem(&BigInt::from(27));
            if !r1.is_zero() || !r0.is_zero() {
                return Err(FieldError::NonIntegralPolynomial);
            }
            Cubic::new(rat_i(-1), Rat::from_integer(q1), Rat::from_integer(q0))
        } else {
            let (q1, r1) = m.div_rem(&BigInt::from(3));
            let c0_num = -(&a * &m);
            let (q0, r0) = c0_num.div_rem(&BigInt::from(27));
            if !r1.is_zero() || !r0.is_zero() {
                return Err(FieldError::NonIntegralPolynomial);
            }
            Cubic::new(rat_i(0), Rat::from_integer(-q1), Rat::from_integer(q0))
        };
        let base = Self::build(poly, Some(*cd))?;
        // integral basis per case, then verify disc = m^2
        let rho = [Rat::zero(), Rat::one(), Rat::zero()];
        let srho = base.sigma_rho.clone();
        let s2rho = mat_vec(&base.galois, &srho);
        let rows = if !cd.divisible_by_3() {
            [rho, srho, s2rho]
        } else {
            [[Rat::one(), Rat::zero(), Rat::zero()], rho, srho]
        };
        let field = Self::attach_integral_basis(base, rows)?;
        let m2 = BigInt::from(cd.m) * BigInt::from(cd.m);
        if field.discriminant != m2 {
            return Err(FieldError::IntegralBasisMismatch);
        }
        Ok(field)
    }

    /// Field from a bare defining polynomial. The power basis is used as
    /// the working order; its discriminant is `disc(min_poly)`, which is
    /// the field discriminant only if the field happens to be monogenic
    /// with this generator.
    pub fn from_min_poly(poly: Cubic) -> Result<Arc<Self>, FieldError> {
        Self::build(poly, None)
    }

    /// Attaches a verified integral basis to a field built from a bare
    /// polynomial: all three elements must be algebraic integers and the
    /// basis discriminant must be a perfect square (it becomes the field
    /// discriminant).
    pub fn with_integral_basis(
        self: &Arc<Self>,
        rows: [[Rat; 3]; 3],
    ) -> Result<Arc<Self>, FieldError> {
        let base = Arc::new(CubicField {
            min_poly: self.min_poly.clone(),
            conductor: self.conductor,
            discriminant: self.discriminant.clone(),
            maximal_order_known: false,
            sigma_rho: self.sigma_rho.clone(),
            galois: self.galois.clone(),
            integral_basis: self.integral_basis.clone(),
            inv_integral_basis: self.inv_integral_basis.clone(),
            roots: self.roots.clone(),
        });
        Self::attach_integral_basis(base, rows)
    }

    fn attach_integral_basis(
        base: Arc<Self>,
        rows: [[Rat; 3]; 3],
    ) -> Result<Arc<Self>, FieldError> {
        // each element must be an algebraic integer
        for r in &rows {
            let e = base.element(r.clone());
            if !e.char_poly_is_integral() {
                return Err(FieldError::IntegralBasisMismatch);
            }
        }
        let det = det3(&rows);
        if det.is_zero() {
            return Err(FieldError::IntegralBasisMismatch);
        }
        let disc_rat = &det * &det * base.min_poly.disc();
        if !disc_rat.is_integer() {
            return Err(FieldError::IntegralBasisMismatch);
        }
        let disc = disc_rat.to_integer();
        if arith::perfect_sqrt(&disc).is_none() {
            return Err(FieldError::IntegralBasisMismatch);
        }
        let inv = inv3(&rows).ok_or(FieldError::IntegralBasisMismatch)?;
        Ok(Arc::new(CubicField {
            min_poly: base.min_poly.clone(),
            conductor: base.conductor,
            discriminant: disc,
            maximal_order_known: true,
            sigma_rho: base.sigma_rho.clone(),
            galois: base.galois.clone(),
            integral_basis: rows,
            inv_integral_basis: inv,
            roots: base.roots.clone(),
        }))
    }

    fn build(poly: Cubic, conductor: Option<ConductorData>) -> Result<Arc<Self>, FieldError> {
        // a generating algebraic integer always exists, so integer monic
        // input is required rather than coping with fractional coefficients
        if !(poly.c2.is_integer() && poly.c1.is_integer() && poly.c0.is_integer()) {
            return Err(FieldError::NonIntegralPolynomial);
        }
        let disc = poly.disc();
        if !disc.is_positive() {
            return Err(FieldError::NotTotallyReal);
        }
        if poly.has_rational_root() {
            return Err(FieldError::ReduciblePolynomial);
        }
        let raw = poly.isolate_three_real_roots();
        let w = pow2(-64);
        let roots = [
            poly.refine_root(&raw[0], &w),
            poly.refine_root(&raw[1], &w),
            poly.refine_root(&raw[2], &w),
        ];
        let sigma_rho = reconstruct_galois(&poly, &roots)?;
        // galois matrix: columns sigma(1), sigma(rho), sigma(rho^2)
        let field_tmp = CubicField {
            min_poly: poly.clone(),
            conductor,
            discriminant: BigInt::zero(),
            maximal_order_known: false,
            sigma_rho: sigma_rho.clone(),
            galois: Default::default(),
            integral_basis: Default::default(),
            inv_integral_basis: Default::default(),
            roots: roots.clone(),
        };
        let tmp = Arc::new(field_tmp);
        let srho = tmp.element(sigma_rho.clone());
        let srho2 = srho.mul_raw(&srho);
        let galois = [
            [Rat::one(), sigma_rho[0].clone(), srho2.coords[0].clone()],
            [Rat::zero(), sigma_rho[1].clone(), srho2.coords[1].clone()],
            [Rat::zero(), sigma_rho[2].clone(), srho2.coords[2].clone()],
        ];
        // exact order-3 verification: galois^3 = identity, galois != identity
        let g2 = mat_mul(&galois, &galois);
        let g3 = mat_mul(&g2, &galois);
        let id: [[Rat; 3]; 3] = [
            [Rat::one(), Rat::zero(), Rat::zero()],
            [Rat::zero(), Rat::one(), Rat::zero()],
            [Rat::zero(), Rat::zero(), Rat::one()],
        ];
        if g3 != id || galois == id {
            return Err(FieldError::GaloisReconstructionFailed);
        }
        let power_rows = [
            [Rat::one(), Rat::zero(), Rat::zero()],
            [Rat::zero(), Rat::one(), Rat::zero()],
            [Rat::zero(), Rat::zero(), Rat::one()],
        ];
        let disc_int = disc.to_integer();
        Ok(Arc::new(CubicField {
            min_poly: poly,
            conductor,
            discriminant: disc_int,
            maximal_order_known: false,
            sigma_rho,
            galois,
            integral_basis: power_rows.clone(),
            inv_integral_basis: power_rows,
            roots,
        }))
    }

    pub fn min_poly(&self) -> &Cubic {
        &self.min_poly
    }

    pub fn conductor(&self) -> Option<&ConductorData> {
        self.conductor.as_ref()
    }

    /// Field discriminant when the maximal order is known.
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn maximal_order_known(&self) -> bool {
        self.maximal_order_known
    }

    /// Conductor as an integer: `m` from the conductor data, else
    /// `sqrt(disc)` when the maximal order is known.
    pub fn conductor_value(&self) -> Option<u64> {
        if let Some(cd) = &self.conductor {
            return Some(cd.m);
        }
        if self.maximal_order_known {
            let r = arith::perfect_sqrt(&self.discriminant)?;
            return r.try_into().ok();
        }
        None
    }

    pub fn galois_matrix(&self) -> &[[Rat; 3]; 3] {
        &self.galois
    }

    pub fn integral_basis_rows(&self) -> &[[Rat; 3]; 3] {
        &self.integral_basis
    }

    pub fn integral_basis_elements(self: &Arc<Self>) -> [FieldElement; 3] {
        [
            self.element(self.integral_basis[0].clone()),
            self.element(self.integral_basis[1].clone()),
            self.element(self.integral_basis[2].clone()),
        ]
    }

    pub fn root_intervals(&self) -> &[RatInterval; 3] {
        &self.roots
    }

    pub fn element(self: &Arc<Self>, coords: [Rat; 3]) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coords,
        }
    }

    pub fn element_i(self: &Arc<Self>, c0: i64, c1: i64, c2: i64) -> FieldElement {
        self.element([rat_i(c0), rat_i(c1), rat_i(c2)])
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.element_i(0, 0, 0)
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.element_i(1, 0, 0)
    }

    pub fn rho(self: &Arc<Self>) -> FieldElement {
        self.element_i(0, 1, 0)
    }

    pub fn from_rat(self: &Arc<Self>, q: Rat) -> FieldElement {
        self.element([q, Rat::zero(), Rat::zero()])
    }

    /// The rational invariant `t = (rho - s rho)(s rho - s2 rho)(s2 rho - rho)`,
    /// negative by the generator normalization; `t^2 = disc(min_poly)`.
    pub fn t_invariant(self: &Arc<Self>) -> Rat {
        let rho = self.rho();
        let s = rho.conj(1);
        let s2 = rho.conj(2);
        let t = (&rho - &s).mul_raw(&(&s - &s2)).mul_raw(&(&s2 - &rho));
        debug_assert!(t.coords[1].is_zero() && t.coords[2].is_zero());
        t.coords[0].clone()
    }
}

fn refine_all(poly: &Cubic, roots: &[RatInterval; 3], width: &Rat) -> [RatInterval; 3] {
    [
        poly.refine_root(&roots[0], width),
        poly.refine_root(&roots[1], width),
        poly.refine_root(&roots[2], width),
    ]
}

/// Numeric-then-verify reconstruction of the coordinates of `sigma(rho)`.
///
/// Solves the Vandermonde system sending the ascending roots `(r1, r2, r3)`
/// to `(r3, r1, r2)` in interval arithmetic, reconstructs each coordinate
/// by a continued-fraction walk with denominator bound `2 |disc|`, and
/// verifies the candidate exactly: it must satisfy the minimal polynomial
/// and generate an order-3 automorphism with the `t < 0` normalization.
/// On failure the working precision doubles, up to 4096 bits.
fn reconstruct_galois(poly: &Cubic, roots: &[RatInterval; 3]) -> Result<[Rat; 3], FieldError> {
    let disc = poly.disc();
    let den_bound = (rat_i(2) * disc.abs()).ceil().to_integer();
    let mut prec: i64 = 128;
    while prec <= 4096 {
        let scale = roots[2].hi.abs().max(Rat::one());
        let width = pow2(-prec) * &scale;
        let r = refine_all(poly, roots, &width);
        if let Some(cand) = solve_conjugate_candidate(&r, &den_bound) {
            if verify_galois(poly, &cand) {
                // normalize the generator so t < 0
                let t = t_of(poly, &cand);
                if t.is_negative() {
                    return Ok(cand);
                }
                // use sigma^2 = composition of the candidate with itself
                let squared = compose_sigma(poly, &cand, &cand);
                if verify_galois(poly, &squared) && t_of(poly, &squared).is_negative() {
                    return Ok(squared);
                }
            }
        }
        prec *= 2;
    }
    Err(FieldError::GaloisReconstructionFailed)
}

/// Interval Cramer solve for the conjugate coordinates; `None` when the
/// intervals are still too wide to certify or reconstruct.
fn solve_conjugate_candidate(r: &[RatInterval; 3], den_bound: &BigInt) -> Option<[Rat; 3]> {
    let one = RatInterval::point(Rat::one());
    let row = |iv: &RatInterval| [one.clone(), iv.clone(), iv.mul(iv)];
    let m = [row(&r[0]), row(&r[1]), row(&r[2])];
    let rhs = [r[2].clone(), r[0].clone(), r[1].clone()];
    let det = det3_interval(&m);
    det.sign()?;
    let mut out: [Rat; 3] = Default::default();
    for c in 0..3 {
        let mut mc = m.clone();
        for i in 0..3 {
            mc[i][c] = rhs[i].clone();
        }
        let num = det3_interval(&mc);
        let iv = interval_div(&num, &det);
        let cand = smallest_den_in_interval(&iv.lo, &iv.hi);
        if cand.denom() > den_bound {
            return None;
        }
        out[c] = cand;
    }
    Some(out)
}

fn det3_interval(m: &[[RatInterval; 3]; 3]) -> RatInterval {
    let minor = |a: &RatInterval, b: &RatInterval, c: &RatInterval, d: &RatInterval| {
        a.mul(d).sub(&b.mul(c))
    };
    let m0 = m[0][0].mul(&minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]));
    let m1 = m[0][1].mul(&minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]));
    let m2 = m[0][2].mul(&minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]));
    m0.sub(&m1).add(&m2)
}

fn interval_div(num: &RatInterval, den: &RatInterval) -> RatInterval {
    assert!(
        den.sign().is_some(),
        "interval division by zero-straddling interval"
    );
    let cands = [
        &num.lo / &den.lo,
        &num.lo / &den.hi,
        &num.hi / &den.lo,
        &num.hi / &den.hi,
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
    RatInterval::new(lo, hi)
}

/// Exact check that `g` (coords of a power-basis polynomial in rho) is a
/// root of the minimal polynomial and differs from rho.
fn verify_galois(poly: &Cubic, g: &[Rat; 3]) -> bool {
    let rho = [Rat::zero(), Rat::one(), Rat::zero()];
    if *g == rho {
        return false;
    }
    // evaluate f(g) mod f using bare coordinate arithmetic
    let sq = mul_mod(poly, g, g);
    let cu = mul_mod(poly, &sq, g);
    let mut acc = cu;
    for i in 0..3 {
        acc[i] += &poly.c2 * &sq[i];
    }
    acc[0] += &poly.c1 * &g[0] + &poly.c0;
    acc[1] += &poly.c1 * &g[1];
    acc[2] += &poly.c1 * &g[2];
    if !(acc[0].is_zero() && acc[1].is_zero() && acc[2].is_zero()) {
        return false;
    }
    // order 3: g o g o g = rho
    let gg = compose_sigma(poly, g, g);
    let ggg = compose_sigma(poly, &gg, g);
    ggg == rho
}

/// Coordinates of `a(b(rho))` reduced mod the minimal polynomial, where
/// `a`, `b` are coordinate triples: substitutes `b` into the quadratic `a`.
fn compose_sigma(poly: &Cubic, a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    let b2 = mul_mod(poly, b, b);
    [
        &a[0] + &a[1] * &b[0] + &a[2] * &b2[0],
        &a[1] * &b[1] + &a[2] * &b2[1],
        &a[1] * &b[2] + &a[2] * &b2[2],
    ]
}

fn t_of(poly: &Cubic, g: &[Rat; 3]) -> Rat {
    let rho = [Rat::zero(), Rat::one(), Rat::zero()];
    let g2 = compose_sigma(poly, g, g);
    let d1 = sub3(&rho, g);
    let d2 = sub3(g, &g2);
    let d3 = sub3(&g2, &rho);
    let p = mul_mod(poly, &mul_mod(poly, &d1, &d2), &d3);
    debug_assert!(p[1].is_zero() && p[2].is_zero());
    p[0].clone()
}

fn sub3(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

/// Product of two coordinate triples reduced modulo the cubic.
fn mul_mod(poly: &Cubic, a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    // degree-4 product then reduce with
    //   rho^3 = -c2 rho^2 - c1 rho - c0
    //   rho^4 = (c2^2 - c1) rho^2 + (c2 c1 - c0) rho + c2 c0
    let d0 = &a[0] * &b[0];
    let d1 = &a[0] * &b[1] + &a[1] * &b[0];
    let d2 = &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0];
    let d3 = &a[1] * &b[2] + &a[2] * &b[1];
    let d4 = &a[2] * &b[2];
    let (c2, c1, c0) = (&poly.c2, &poly.c1, &poly.c0);
    [
        d0 - c0 * &d3 + c2 * c0 * &d4,
        d1 - c1 * &d3 + (c2 * c1 - c0) * &d4,
        d2 - c2 * &d3 + (c2 * c2 - c1) * &d4,
    ]
}

/// Element of a cyclic cubic field: exact rational coordinates on the
/// power basis of the defining root. Value-semantic and freely cloneable;
/// the owning field travels along as an `Arc`.
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: Arc<CubicField>,
    coords: [Rat; 3],
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<CubicField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rat; 3] {
        &self.coords
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn require_same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1].is_zero() && self.coords[2].is_zero()
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, FieldError> {
        self.require_same_field(o)?;
        Ok(self.add_raw(o))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, FieldError> {
        self.require_same_field(o)?;
        Ok(self.sub_raw(o))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, FieldError> {
        self.require_same_field(o)?;
        Ok(self.mul_raw(o))
    }

    pub(crate) fn add_raw(&self, o: &Self) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: [
                &self.coords[0] + &o.coords[0],
                &self.coords[1] + &o.coords[1],
                &self.coords[2] + &o.coords[2],
            ],
        }
    }

    pub(crate) fn sub_raw(&self, o: &Self) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: [
                &self.coords[0] - &o.coords[0],
                &self.coords[1] - &o.coords[1],
                &self.coords[2] - &o.coords[2],
            ],
        }
    }

    pub(crate) fn mul_raw(&self, o: &Self) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: mul_mod(&self.field.min_poly, &self.coords, &o.coords),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: [
                -self.coords[0].clone(),
                -self.coords[1].clone(),
                -self.coords[2].clone(),
            ],
        }
    }

    pub fn scalar_mul(&self, c: &Rat) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: [
                &self.coords[0] * c,
                &self.coords[1] * c,
                &self.coords[2] * c,
            ],
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let m = self.mul_matrix();
        let mi = inv3(&m).ok_or(FieldError::DivisionByZero)?;
        // inverse coords = M^-1 * e_1
        Ok(FieldElement {
            field: Arc::clone(&self.field),
            coords: [mi[0][0].clone(), mi[1][0].clone(), mi[2][0].clone()],
        })
    }

    /// Small integer power (negative allowed for units/nonzero elements).
    pub fn pow_i(&self, e: i32) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field.one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_raw(&base);
        }
        Ok(acc)
    }

    /// Matrix of multiplication by this element on the power basis
    /// (columns are the coordinates of `x*1, x*rho, x*rho^2`).
    pub fn mul_matrix(&self) -> [[Rat; 3]; 3] {
        let f = &self.field.min_poly;
        let rho = [Rat::zero(), Rat::one(), Rat::zero()];
        let c0 = self.coords.clone();
        let c1 = mul_mod(f, &self.coords, &rho);
        let rho2 = [Rat::zero(), Rat::zero(), Rat::one()];
        let c2 = mul_mod(f, &self.coords, &rho2);
        [
            [c0[0].clone(), c1[0].clone(), c2[0].clone()],
            [c0[1].clone(), c1[1].clone(), c2[1].clone()],
            [c0[2].clone(), c1[2].clone(), c2[2].clone()],
        ]
    }

    /// Field trace and norm via the multiplication matrix: trace of the
    /// matrix and its determinant. Exact.
    pub fn trace_and_norm(&self) -> (Rat, Rat) {
        let m = self.mul_matrix();
        let tr = &m[0][0] + &m[1][1] + &m[2][2];
        (tr, det3(&m))
    }

    pub fn trace(&self) -> Rat {
        self.trace_and_norm().0
    }

    pub fn norm(&self) -> Rat {
        self.trace_and_norm().1
    }

    /// Galois conjugate: `power` 1 for sigma, 2 for sigma squared.
    pub fn conj(&self, power: u8) -> Self {
        assert!(power == 1 || power == 2, "conjugate power must be 1 or 2");
        let once = mat_vec(&self.field.galois, &self.coords);
        let coords = if power == 1 {
            once
        } else {
            mat_vec(&self.field.galois, &once)
        };
        FieldElement {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    /// True when the characteristic polynomial of the multiplication
    /// matrix has integer coefficients (i.e. the element is an algebraic
    /// integer).
    pub fn char_poly_is_integral(&self) -> bool {
        let (tr, n) = self.trace_and_norm();
        // char poly x^3 - tr x^2 + e2 x - n with e2 = (tr^2 - tr(x^2))/2
        let tr2 = self.mul_raw(self).trace();
        let e2 = (&tr * &tr - tr2) / rat_i(2);
        tr.is_integer() && e2.is_integer() && n.is_integer()
    }

    /// Rational coordinates on the field's integral basis.
    pub fn coords_on_integral_basis(&self) -> [Rat; 3] {
        mat_vec_row(&self.coords, &self.field.inv_integral_basis)
    }

    /// Coordinates on the field's integral basis, when they are integers.
    pub fn integral_coords(&self) -> Option<[BigInt; 3]> {
        let t = mat_vec_row(&self.coords, &self.field.inv_integral_basis);
        if t.iter().all(|c| c.is_integer()) {
            Some([t[0].to_integer(), t[1].to_integer(), t[2].to_integer()])
        } else {
            None
        }
    }

    /// Certified interval enclosures of the canonical embedding
    /// `(x, sigma x, sigma^2 x)`; widths at most `2^(1-p) max(1, |value|)`
    /// with `p = max(32, precision_bits)`.
    pub fn embed(&self, precision_bits: u32) -> [RatInterval; 3] {
        let p = precision_bits.max(32) as i64;
        let f = &self.field.min_poly;
        let elems = [self.clone(), self.conj(1), self.conj(2)];
        let mut root = self.field.roots[0].clone();
        let mut width = pow2(-(p + 8)) * root.hi.abs().max(Rat::one());
        loop {
            root = f.refine_root(&root, &width);
            let out = [
                eval_coords_interval(&elems[0].coords, &root),
                eval_coords_interval(&elems[1].coords, &root),
                eval_coords_interval(&elems[2].coords, &root),
            ];
            let ok = out.iter().all(|iv| {
                let mag = if iv.sign().is_some() {
                    iv.lo.abs().min(iv.hi.abs())
                } else {
                    Rat::zero()
                };
                iv.width() <= pow2(1 - p) * mag.max(Rat::one())
            });
            if ok {
                return out;
            }
            width /= rat_i(1 << 8);
        }
    }

    /// Exact signs of the three conjugates, in embedding order
    /// `(x, sigma x, sigma^2 x)`. Determined by refining the embedding
    /// until each interval excludes zero; terminates because a nonzero
    /// element has nonzero conjugates.
    pub fn sign_pattern(&self) -> [i8; 3] {
        if self.is_zero() {
            return [0, 0, 0];
        }
        let mut p = 32u32;
        loop {
            let iv = self.embed(p);
            if let (Some(a), Some(b), Some(c)) = (iv[0].sign(), iv[1].sign(), iv[2].sign()) {
                return [a, b, c];
            }
            p *= 2;
        }
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign_pattern() == [1, 1, 1]
    }

    /// Content of an integral element: the largest positive integer `k`
    /// with `x/k` still integral (on the integral basis).
    pub fn integral_content(&self) -> Option<BigInt> {
        let t = self.integral_coords()?;
        if t.iter().all(|c| c.is_zero()) {
            return None;
        }
        Some(arith::gcd3(&t[0], &t[1], &t[2]))
    }
}

fn mat_vec_row(x: &[Rat; 3], m: &[[Rat; 3]; 3]) -> [Rat; 3] {
    let mut out: [Rat; 3] = Default::default();
    for j in 0..3 {
        let mut acc = Rat::zero();
        for i in 0..3 {
            acc += &x[i] * &m[i][j];
        }
        out[j] = acc;
    }
    out
}

fn eval_coords_interval(coords: &[Rat; 3], t: &RatInterval) -> RatInterval {
    // c0 + c1 t + c2 t^2 with exact interval arithmetic
    t.scale(&coords[2])
        .add_rat(&coords[1])
        .mul(t)
        .add_rat(&coords[0])
}

impl core::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.checked_add(o).expect("field mismatch in +")
    }
}

impl core::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.checked_sub(o).expect("field mismatch in -")
    }
}

impl core::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.checked_mul(o).expect("field mismatch in *")
    }
}

impl core::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl core::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let names = ["", "r", "r^2"];
        let mut parts: Vec<String> = Vec::new();
        for (c, n) in self.coords.iter().zip(names.iter()) {
            if c.is_zero() {
                continue;
            }
            if n.is_empty() {
                parts.push(format!("{c}"));
            } else if c.is_one() {
                parts.push(format!("{n}"));
            } else if (-c.clone()).is_one() {
                parts.push(format!("-{n}"));
            } else {
                parts.push(format!("({c})*{n}"));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn field9() -> Arc<CubicField> {
        CubicField::from_conductor(&conductor_params(9).unwrap()).unwrap()
    }

    fn field7() -> Arc<CubicField> {
        CubicField::from_conductor(&conductor_params(7).unwrap()).unwrap()
    }

    #[test]
    fn conductor_representations() {
        assert_eq!(
            conductor_params(7).unwrap(),
            ConductorData { m: 7, a: -1, b: 3 }
        );
        assert_eq!(
            conductor_params(9).unwrap(),
            ConductorData { m: 9, a: -3, b: 3 }
        );
        assert_eq!(conductor_params(5), Err(FieldError::NoRepresentation));
        assert_eq!(
            conductor_params(13).unwrap(),
            ConductorData { m: 13, a: 5, b: 3 }
        );
        // composite conductor: one pair per cyclic cubic field
        let all = conductor_params_all(91).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(
            all[0],
            ConductorData {
                m: 91,
                a: -16,
                b: 6
            }
        );
        assert_eq!(all[1], ConductorData { m: 91, a: 11, b: 9 });
    }

    #[test]
    fn conductor_data_invariants() {
        assert!(ConductorData { m: 7, a: 2, b: 1 }.validate().is_err());
        assert!(ConductorData { m: 7, a: -1, b: 3 }.validate().is_ok());
        assert!(ConductorData { m: 9, a: 3, b: 3 }.validate().is_err());
    }

    #[test]
    fn defining_polynomials() {
        let f7 = field7();
        assert_eq!(*f7.min_poly(), Cubic::new(rat_i(-1), rat_i(-2), rat_i(1)));
        let f9 = field9();
        assert_eq!(*f9.min_poly(), Cubic::new(rat_i(0), rat_i(-3), rat_i(1)));
        assert_eq!(*f7.discriminant(), BigInt::from(49));
        assert_eq!(*f9.discriminant(), BigInt::from(81));
    }

    #[test]
    fn galois_is_order_three_and_t_negative() {
        for f in [field7(), field9()] {
            let rho = f.rho();
            let s3 = rho.conj(1).conj(1).conj(1);
            assert_eq!(s3, rho);
            assert_ne!(rho.conj(1), rho);
            assert_eq!(f.one().conj(1), f.one());
            assert!(f.t_invariant().is_negative());
            // t^2 = disc(min_poly)
            let t = f.t_invariant();
            assert_eq!(&t * &t, f.min_poly().disc());
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f = field9();
        let rho = f.rho();
        let rho2 = &rho * &rho;
        // rho * rho^2 = rho^3 = 3 rho - 1
        assert_eq!(
            (&rho * &rho2).coords().clone(),
            [rat_i(-1), rat_i(3), rat_i(0)]
        );
        // inverse of rho: solve rho * e = 1 and verify the product
        let inv = rho.inv().unwrap();
        assert_eq!(&rho * &inv, f.one());
        assert_eq!(inv.coords().clone(), [rat_i(3), rat_i(0), rat_i(-1)]);
        // x + 0 = x
        let x = f.element([rat(1, 2), rat_i(-4), rat(7, 3)]);
        assert_eq!(x.checked_add(&f.zero()).unwrap(), x);
        // division by zero
        assert_eq!(f.zero().inv(), Err(FieldError::DivisionByZero));
        // field mismatch
        let g = field7();
        assert_eq!(
            f.rho().checked_add(&g.rho()),
            Err(FieldError::FieldMismatch)
        );
    }

    #[test]
    fn trace_norm_examples() {
        let f9 = field9();
        assert_eq!(f9.one().trace_and_norm(), (rat_i(3), rat_i(1)));
        assert_eq!(f9.rho().trace_and_norm(), (rat_i(0), rat_i(-1)));
        // derivative of the conductor-7 polynomial has |norm| = m^2
        let f7 = field7();
        let rho = f7.rho();
        // df' (x) = 3x^2 - 2x - 2
        let d = f7.element_i(-2, -2, 3);
        let _ = rho;
        assert_eq!(d.norm().abs(), rat_i(49));
    }

    #[test]
    fn trace_is_conjugate_sum() {
        let f = field7();
        let x = f.element([rat(3, 5), rat_i(2), rat(-7, 2)]);
        let sum = x.add_raw(&x.conj(1)).add_raw(&x.conj(2));
        assert!(sum.is_rational());
        assert_eq!(sum.coords()[0], x.trace());
        let prod = x.mul_raw(&x.conj(1)).mul_raw(&x.conj(2));
        assert!(prod.is_rational());
        assert_eq!(prod.coords()[0], x.norm());
    }

    #[test]
    fn embedding_and_signs() {
        let f = field9();
        let one = f.one();
        for iv in one.embed(40) {
            assert!(iv.contains(&rat_i(1)));
        }
        let rho = f.rho();
        let iv = rho.embed(40);
        // rho is the smallest root of x^3 - 3x + 1 (about -1.88); the orbit
        // order visits the other two roots
        assert!(iv[0].contains(&rat(-18794, 10000)) || iv[0].width() < rat(1, 1 << 30));
        assert_eq!(rho.sign_pattern(), [-1, 1, 1]);
        assert_eq!(f.zero().sign_pattern(), [0, 0, 0]);
        assert_eq!(one.sign_pattern(), [1, 1, 1]);
        // width contract: doubling precision at least halves the target
        let w1 = rho.embed(64)[0].width();
        let w2 = rho.embed(128)[0].width();
        assert!(w2 <= w1 / rat_i(2));
    }

    #[test]
    fn integral_basis_verified() {
        // conductor 61 is 3-free with a non-monogenic defining polynomial
        // (disc(df) = 9 m^2); the conjugate basis still has disc = m^2
        let cd = conductor_params(61).unwrap();
        let f = CubicField::from_conductor(&cd).unwrap();
        assert_eq!(*f.discriminant(), BigInt::from(61u64 * 61));
        assert!(f.maximal_order_known());
        // rho has integral coordinates on the integral basis
        assert!(f.rho().integral_coords().is_some());
        // 1 = rho + s(rho) + s^2(rho) for the 3-free-case basis
        let one_coords = f.one().integral_coords().unwrap();
        assert_eq!(one_coords, [BigInt::one(), BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn embed_is_multiplicative_within_intervals() {
        let f = field7();
        let x = f.element([rat_i(1), rat(1, 2), rat_i(0)]);
        let y = f.element([rat_i(-2), rat_i(1), rat(1, 3)]);
        let xy = x.mul_raw(&y);
        let (ex, ey, exy) = (x.embed(64), y.embed(64), xy.embed(64));
        for i in 0..3 {
            let prod = ex[i].mul(&ey[i]);
            // certified enclosures of the same real number must overlap
            assert!(prod.lo <= exy[i].hi && exy[i].lo <= prod.hi);
        }
    }
}
