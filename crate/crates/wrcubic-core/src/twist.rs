//! The good-basis test for ideal lattices in cyclic cubic fields, and its
//! companions: unit transport, randomized good-basis search, the link to
//! principal WR ideals, and orthogonal twists from the different ideal.
//!
//! For a basis `{x, y, z}` of a fractional ideal, the twist coefficient
//! `a0` is computed inside the field, so its conjugates are `s(a0)` and
//! `s2(a0)` and the three symmetric functions `e1, e2, e3` are rationals.
//! The basis is good exactly when the conjugates share a sign and the
//! twisted Gram (all entries exact traces) passes the equal-norm
//! well-rounded criterion.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::{CubicField, FieldElement};
use crate::lattice::{
    enumerate_short_vectors, is_wr_lattice, minimal_basis, wr_gram_criterion, GramMatrix3,
    LatticeBasis3, LatticeError,
};
use crate::rat::{rat_i, Rat};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistError {
    /// The three elements are linearly dependent over Q.
    DegenerateBasis,
    /// The conjugates of the twist element do not share the claimed sign.
    SignMismatch,
    /// Unit transport requires a unit (norm of absolute value 1).
    NotAUnit,
    /// No totally positive different-ideal generator was found in the
    /// candidate pool. This does not assert the different ideal is
    /// non-principal.
    OrthoUnverified,
    /// The field does not carry a verified integral basis.
    NoIntegralBasis,
}

impl core::fmt::Display for TwistError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TwistError::DegenerateBasis => write!(f, "basis elements are linearly dependent"),
            TwistError::SignMismatch => write!(f, "conjugates do not share the claimed sign"),
            TwistError::NotAUnit => write!(f, "element is not a unit"),
            TwistError::OrthoUnverified => {
                write!(
                    f,
                    "no totally positive generator found in the search pool (unverified)"
                )
            }
            TwistError::NoIntegralBasis => write!(f, "field has no verified integral basis"),
        }
    }
}

impl core::error::Error for TwistError {}

/// Result of the good-basis test on one basis.
#[derive(Debug, Clone)]
pub struct TwistReport {
    pub basis: [FieldElement; 3],
    pub alpha0: FieldElement,
    /// Symmetric functions of `a0` and its conjugates: `e1 = Tr(a0)`,
    /// `e2 = (Tr(a0)^2 - Tr(a0^2))/2`, `e3 = N(a0)`.
    pub e1: Rat,
    pub e2: Rat,
    pub e3: Rat,
    /// Whether the three conjugates share a strict sign.
    pub sign_ok: bool,
    /// Exact Gram matrix of the twisted basis, present iff `sign_ok`.
    pub twisted_gram: Option<GramMatrix3>,
    /// Whether the twisted Gram passes the well-rounded criterion.
    pub is_good: bool,
    pub principal_link: Option<PrincipalLink>,
}

/// Decomposition `a0 = k psi` with `k` the integral content, plus the
/// verification status of the similarity between the twist and the ideal
/// lattice generated by `psi^2`.
#[derive(Debug, Clone)]
pub struct PrincipalLink {
    pub psi: FieldElement,
    pub k: BigInt,
    pub verified: bool,
}

/// Certificate that the orthogonal lattice is a twist of the maximal
/// order: a totally positive generator of the different ideal, the
/// integer unimodular Gram `Tr(delta^-1 w_i w_j)`, and three coefficient
/// vectors whose Gram is exactly the identity.
#[derive(Debug, Clone)]
pub struct OrthoTwistCertificate {
    pub delta: FieldElement,
    pub unimodular_gram: [[BigInt; 3]; 3],
    pub orthonormal_frame: [[i64; 3]; 3],
}

fn coords_det(basis: &[FieldElement; 3]) -> Rat {
    let m = [
        basis[0].coords().clone(),
        basis[1].coords().clone(),
        basis[2].coords().clone(),
    ];
    crate::field::det3(&m)
}

/// Twist element of a basis: the 2x2 conjugate determinant
/// `a0 = s(A) s2(B) - s2(A) s(B)` with `A = x^2 - y^2`, `B = y^2 - z^2`.
/// Its conjugates are the other two twist coefficients.
pub fn alpha0_of_basis(basis: &[FieldElement; 3]) -> FieldElement {
    let (x, y, z) = (&basis[0], &basis[1], &basis[2]);
    let a = &(x * x) - &(y * y);
    let b = &(y * y) - &(z * z);
    let t1 = a.conj(1).checked_mul(&b.conj(2)).expect("same field");
    let t2 = a.conj(2).checked_mul(&b.conj(1)).expect("same field");
    t1.sub_raw(&t2)
}

/// Exact Gram matrix of the twisted basis `T B` with
/// `T = diag(sqrt|a0|, sqrt|b0|, sqrt|g0|)`: entry `(i,j)` is
/// `Tr(sign * a0 * b_i * b_j)`. The conjugates of `alpha0` must all carry
/// `sign`.
pub fn gram_of_twisted_basis(
    basis: &[FieldElement; 3],
    alpha0: &FieldElement,
    sign: i8,
) -> Result<GramMatrix3, TwistError> {
    if alpha0.sign_pattern() != [sign, sign, sign] {
        return Err(TwistError::SignMismatch);
    }
    let sg = rat_i(sign as i64);
    let entry =
        |i: usize, j: usize| -> Rat { &sg * alpha0.mul_raw(&basis[i]).mul_raw(&basis[j]).trace() };
    let s11 = entry(0, 0);
    let s22 = entry(1, 1);
    let s33 = entry(2, 2);
    // the defining linear system of a0 forces equal twisted lengths
    debug_assert_eq!(s11, s22);
    debug_assert_eq!(s22, s33);
    Ok(GramMatrix3::new(
        s11,
        s22,
        s33,
        entry(0, 1),
        entry(0, 2),
        entry(1, 2),
    ))
}

/// The good-basis test: computes the twist element and its symmetric
/// functions, rejects on the sign test, otherwise builds the exact
/// twisted Gram and checks the well-rounded criterion.
pub fn test_good_basis(basis: &[FieldElement; 3]) -> Result<TwistReport, TwistError> {
    if !basis[0].same_field(&basis[1]) || !basis[0].same_field(&basis[2]) {
        return Err(TwistError::DegenerateBasis);
    }
    if coords_det(basis).is_zero() {
        return Err(TwistError::DegenerateBasis);
    }
    let alpha0 = alpha0_of_basis(basis);
    let e1 = alpha0.trace();
    let p2 = alpha0.mul_raw(&alpha0).trace();
    let e2 = (&e1 * &e1 - p2) / rat_i(2);
    let e3 = alpha0.norm();
    let sign_ok = (&e1 * &e3).is_positive() && e2.is_positive();
    if !sign_ok {
        return Ok(TwistReport {
            basis: basis.clone(),
            alpha0,
            e1,
            e2,
            e3,
            sign_ok,
            twisted_gram: None,
            is_good: false,
            principal_link: None,
        });
    }
    let sign: i8 = if e1.is_positive() { 1 } else { -1 };
    let gram = gram_of_twisted_basis(basis, &alpha0, sign)?;
    let is_good = wr_gram_criterion(&gram) == Ok(true);
    Ok(TwistReport {
        basis: basis.clone(),
        alpha0,
        e1,
        e2,
        e3,
        sign_ok,
        twisted_gram: Some(gram),
        is_good,
        principal_link: None,
    })
}

/// Re-runs the good-basis test on `{u x, u y, u z}` for a unit `u`. The
/// twisted Gram matrix is exactly the one of the original basis.
pub fn unit_transport(report: &TwistReport, u: &FieldElement) -> Result<TwistReport, TwistError> {
    if u.norm().abs() != rat_i(1) {
        return Err(TwistError::NotAUnit);
    }
    let basis = [
        u.mul_raw(&report.basis[0]),
        u.mul_raw(&report.basis[1]),
        u.mul_raw(&report.basis[2]),
    ];
    let out = test_good_basis(&basis)?;
    debug_assert_eq!(out.twisted_gram, report.twisted_gram);
    Ok(out)
}

/// Randomized good-basis search: applies `iterations` random products of
/// elementary unimodular matrices (row additions with coefficients up to
/// `coeff_bound`, swaps, negations) to `b0`, tests each image, and returns
/// the good ones de-duplicated by twisted Gram. Deterministic under
/// `seed`; the first probe is always `b0` itself.
pub fn good_basis_search(
    b0: &[FieldElement; 3],
    iterations: u64,
    coeff_bound: i64,
    seed: u64,
) -> Vec<TwistReport> {
    let coeff_bound = coeff_bound.max(1);
    let mut rng = SplitMix64::new(seed);
    let mut found: Vec<TwistReport> = Vec::new();
    let push = |rep: TwistReport, found: &mut Vec<TwistReport>| {
        if !rep.is_good {
            return;
        }
        let g = rep.twisted_gram.as_ref().unwrap();
        if found.iter().any(|r| r.twisted_gram.as_ref() == Some(g)) {
            return;
        }
        found.push(rep);
    };
    if let Ok(rep) = test_good_basis(b0) {
        push(rep, &mut found);
    }
    for _ in 0..iterations {
        let mut basis = b0.clone();
        let ops = 4 + rng.below(5) as usize;
        for _ in 0..ops {
            match rng.below(4) {
                0 | 1 => {
                    // b_i += c * b_j
                    let i = rng.below(3) as usize;
                    let mut j = rng.below(3) as usize;
                    if j == i {
                        j = (j + 1) % 3;
                    }
                    let mut c = rng.range_i64(-coeff_bound, coeff_bound);
                    if c == 0 {
                        c = 1;
                    }
                    basis[i] = basis[i].add_raw(&basis[j].scalar_mul(&rat_i(c)));
                }
                2 => {
                    let i = rng.below(3) as usize;
                    let j = (i + 1 + rng.below(2) as usize) % 3;
                    basis.swap(i, j);
                }
                _ => {
                    let i = rng.below(3) as usize;
                    basis[i] = basis[i].neg();
                }
            }
        }
        if let Ok(rep) = test_good_basis(&basis) {
            push(rep, &mut found);
        }
    }
    found.sort_by(|a, b| {
        let ga = a.twisted_gram.as_ref().unwrap();
        let gb = b.twisted_gram.as_ref().unwrap();
        (&ga.s11, &ga.u, &ga.v, &ga.w).cmp(&(&gb.s11, &gb.u, &gb.v, &gb.w))
    });
    found
}

/// Signed-permutation similarity of two equal-diagonal Gram matrices up to
/// one positive rational scale.
pub fn grams_similar(g1: &GramMatrix3, g2: &GramMatrix3) -> bool {
    let (Some(s1), Some(s2)) = (g1.equal_diagonal(), g2.equal_diagonal()) else {
        return false;
    };
    if !s1.is_positive() || !s2.is_positive() {
        return false;
    }
    let c = s1 / s2;
    // permuting the basis vectors permutes (u, v, w); sign flips of basis
    // vectors flip an even pattern of the three off-diagonals
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let signs: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    for p in &perms {
        let u2 = g2.entry(p[0], p[1]);
        let v2 = g2.entry(p[0], p[2]);
        let w2 = g2.entry(p[1], p[2]);
        for sg in &signs {
            let cand = [
                &c * u2 * rat_i(sg[0]),
                &c * v2 * rat_i(sg[1]),
                &c * w2 * rat_i(sg[2]),
            ];
            if cand[0] == g1.u && cand[1] == g1.v && cand[2] == g1.w {
                return true;
            }
        }
    }
    false
}

/// Extracts the `a0 = k psi` decomposition from a good basis and checks
/// the principal-ideal link: `k` is the largest positive integer dividing
/// `a0` on the integral basis, and when `|N(psi)|` divides the
/// discriminant to the power `t_cap` the twist is compared (minimal-basis
/// Gram up to scale and signed permutation) against the ideal lattice of
/// `psi^2` times the maximal order.
///
/// Returns `None` when the report is not good, `a0` is not integral, or
/// the divisibility hypothesis fails.
pub fn principal_link(report: &TwistReport, t_cap: u32, budget: usize) -> Option<PrincipalLink> {
    if !report.is_good {
        return None;
    }
    let field = report.alpha0.field().clone();
    if !field.maximal_order_known() {
        return None;
    }
    let k = report.alpha0.integral_content()?;
    let psi = report
        .alpha0
        .scalar_mul(&Rat::new(BigInt::one(), k.clone()));
    let n_psi = psi.norm();
    debug_assert!(n_psi.is_integer());
    let n_abs = n_psi.to_integer().abs();
    if n_abs.is_zero() {
        return None;
    }
    let mut pow = BigInt::one();
    let mut divides = false;
    for _ in 0..t_cap {
        pow *= field.discriminant();
        if (&pow % &n_abs).is_zero() {
            divides = true;
            break;
        }
    }
    if !divides {
        return None;
    }
    // lattice of the principal ideal (psi^2): basis psi^2 * w_i
    let psi2 = psi.mul_raw(&psi);
    let w = field.integral_basis_elements();
    let ideal_basis = [
        psi2.mul_raw(&w[0]),
        psi2.mul_raw(&w[1]),
        psi2.mul_raw(&w[2]),
    ];
    let verified = (|| -> Result<bool, LatticeError> {
        let ideal_lat = LatticeBasis3::from_field_elements(&ideal_basis)?;
        let (ideal_min, _) = minimal_basis(&ideal_lat, budget)?;
        // the twisted basis of a good basis is already minimal
        let g1 = report.twisted_gram.as_ref().unwrap();
        Ok(grams_similar(g1, ideal_min.gram()))
    })()
    .unwrap_or(false);
    Some(PrincipalLink { psi, k, verified })
}

/// Attempts an orthogonal-twist certificate for the maximal order: tries
/// `±(min_poly)'(rho)` and its conjugates, each multiplied by units
/// `rho^i s(rho)^j` with `|i|, |j| <= 4` when `rho` is a unit, looking for
/// a totally positive element of norm `m^2`. The winning candidate yields
/// the integer Gram `Tr(delta^-1 w_i w_j)` with determinant one, and an
/// orthonormal frame found by enumerating its norm-1 vectors.
pub fn orthogonal_twist(field: &Arc<CubicField>) -> Result<OrthoTwistCertificate, TwistError> {
    if !field.maximal_order_known() {
        return Err(TwistError::NoIntegralBasis);
    }
    let Some(m) = field.conductor_value() else {
        return Err(TwistError::OrthoUnverified);
    };
    let m2 = Rat::from_integer(BigInt::from(m) * BigInt::from(m));
    let poly = field.min_poly();
    // (x^3 + c2 x^2 + c1 x + c0)' (rho) = 3 rho^2 + 2 c2 rho + c1
    let d = field.element([poly.c1.clone(), rat_i(2) * &poly.c2, rat_i(3)]);
    if d.norm().abs() != m2 {
        return Err(TwistError::OrthoUnverified);
    }
    let rho = field.rho();
    let rho_is_unit = rho.norm().abs() == rat_i(1);
    let base_patterns = [
        d.sign_pattern(),
        d.conj(1).sign_pattern(),
        d.conj(2).sign_pattern(),
    ];
    let rho_pat = rho.sign_pattern();
    let srho_pat = rho.conj(1).sign_pattern();
    let unit_range: Vec<i32> = if rho_is_unit {
        (-4..=4).collect()
    } else {
        alloc::vec![0]
    };
    let powpat = |p: [i8; 3], e: i32| -> [i8; 3] {
        if e.rem_euclid(2) == 0 {
            [1, 1, 1]
        } else {
            p
        }
    };
    for sign in [1i8, -1] {
        for a in 0..3usize {
            for &i in &unit_range {
                for &j in &unit_range {
                    let pat = [0, 1, 2].map(|k| {
                        sign * base_patterns[a][k] * powpat(rho_pat, i)[k] * powpat(srho_pat, j)[k]
                    });
                    if pat != [1, 1, 1] {
                        continue;
                    }
                    let mut delta = if a == 0 { d.clone() } else { d.conj(a as u8) };
                    if rho_is_unit {
                        delta = delta
                            .mul_raw(&rho.pow_i(i).expect("unit power"))
                            .mul_raw(&rho.conj(1).pow_i(j).expect("unit power"));
                    }
                    if sign < 0 {
                        delta = delta.neg();
                    }
                    if let Some(cert) = try_certificate(field, &delta) {
                        return Ok(cert);
                    }
                }
            }
        }
    }
    Err(TwistError::OrthoUnverified)
}

fn try_certificate(field: &Arc<CubicField>, delta: &FieldElement) -> Option<OrthoTwistCertificate> {
    if delta.sign_pattern() != [1, 1, 1] {
        return None;
    }
    let dinv = delta.inv().ok()?;
    let w = field.integral_basis_elements();
    let mut gram_int: [[BigInt; 3]; 3] = Default::default();
    let mut gram_rat: [[Rat; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let t = dinv.mul_raw(&w[i]).mul_raw(&w[j]).trace();
            if !t.is_integer() {
                return None;
            }
            gram_int[i][j] = t.to_integer();
            gram_rat[i][j] = t;
        }
    }
    if crate::field::det3(&gram_rat) != rat_i(1) {
        return None;
    }
    let g = GramMatrix3::new(
        gram_rat[0][0].clone(),
        gram_rat[1][1].clone(),
        gram_rat[2][2].clone(),
        gram_rat[0][1].clone(),
        gram_rat[0][2].clone(),
        gram_rat[1][2].clone(),
    );
    let lat = LatticeBasis3::from_gram(g.clone()).ok()?;
    let short = enumerate_short_vectors(&lat, &rat_i(1), 64).ok()?;
    let units: Vec<[i64; 3]> = short
        .iter()
        .filter(|v| v.norm_sq == rat_i(1))
        .filter_map(|v| {
            let c0: i64 = (&v.coeffs[0]).try_into().ok()?;
            let c1: i64 = (&v.coeffs[1]).try_into().ok()?;
            let c2: i64 = (&v.coeffs[2]).try_into().ok()?;
            Some([c0, c1, c2])
        })
        .collect();
    // a unimodular rank-3 lattice has exactly three +/- pairs of unit
    // vectors; keep one representative per pair
    let mut frame: Vec<[i64; 3]> = Vec::new();
    for c in units {
        let neg = [-c[0], -c[1], -c[2]];
        if !frame.contains(&c) && !frame.contains(&neg) {
            frame.push(if c > neg { c } else { neg });
        }
    }
    if frame.len() != 3 {
        return None;
    }
    frame.sort();
    let t = [frame[0], frame[1], frame[2]];
    let fg = g.transform(&t);
    let identity = GramMatrix3::equal_diag(rat_i(1), rat_i(0), rat_i(0), rat_i(0));
    if fg != identity {
        return None;
    }
    Some(OrthoTwistCertificate {
        delta: delta.clone(),
        unimodular_gram: gram_int,
        orthonormal_frame: t,
    })
}

/// Runs the full pipeline on one basis: the good-basis test plus, when
/// good, the principal-ideal link with the given exponent cap.
pub fn test_good_basis_with_link(
    basis: &[FieldElement; 3],
    t_cap: u32,
    budget: usize,
) -> Result<TwistReport, TwistError> {
    let mut report = test_good_basis(basis)?;
    if report.is_good {
        report.principal_link = principal_link(&report, t_cap, budget);
    }
    Ok(report)
}

/// Oracle cross-check of a report: when `sign_ok`, the twisted lattice
/// (Gram `M_B`) is fed to the enumeration-based well-roundedness test and
/// compared with the criterion verdict.
pub fn report_matches_oracle(report: &TwistReport, budget: usize) -> Result<bool, LatticeError> {
    let Some(g) = &report.twisted_gram else {
        return Ok(true);
    };
    let lat = LatticeBasis3::from_gram(g.clone())?;
    let (wr, _, _) = is_wr_lattice(&lat, budget)?;
    Ok(wr == report.is_good)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{conductor_params, CubicField};
    use crate::rat::rat;

    fn field7() -> Arc<CubicField> {
        CubicField::from_conductor(&conductor_params(7).unwrap()).unwrap()
    }

    #[test]
    fn zero_alpha0_is_rejected_by_the_sign_test() {
        // independent basis whose conjugate-difference determinant
        // degenerates: handled by step 2, never reaches the Gram
        let f = field7();
        let basis = [f.one(), f.element_i(-2, 3, 0), f.element_i(-1, 2, -2)];
        let a0 = alpha0_of_basis(&basis);
        assert!(a0.is_zero());
        let rep = test_good_basis(&basis).unwrap();
        assert!(!rep.sign_ok && !rep.is_good);
        assert!(rep.twisted_gram.is_none());
    }

    #[test]
    fn sign_mismatch_rejected() {
        let f = field7();
        let b = f.integral_basis_elements();
        let a0 = alpha0_of_basis(&b);
        // integral-basis alpha0 of the conductor-7 field is totally
        // negative; claiming + must fail
        assert_eq!(a0.sign_pattern(), [-1, -1, -1]);
        assert!(matches!(
            gram_of_twisted_basis(&b, &a0, 1),
            Err(TwistError::SignMismatch)
        ));
        assert!(gram_of_twisted_basis(&b, &a0, -1).is_ok());
    }

    #[test]
    fn alpha0_of_integral_basis_is_integral() {
        for m in [7u64, 13, 61] {
            let f = CubicField::from_conductor(&conductor_params(m).unwrap()).unwrap();
            let a0 = alpha0_of_basis(&f.integral_basis_elements());
            assert!(a0.integral_coords().is_some(), "m={m}");
        }
    }

    #[test]
    fn principal_link_absent_when_divisibility_fails() {
        // with the exponent cap forced to zero the divisibility hypothesis
        // cannot hold, so the link must be reported absent
        let f = field7();
        let b0 = f.integral_basis_elements();
        let good = good_basis_search(&b0, 500, 2, 0xC0FFEE);
        assert!(!good.is_empty());
        assert!(principal_link(&good[0], 0, 1_000_000).is_none());
        // non-good reports never produce a link
        let rep = test_good_basis(&[f.one(), f.rho(), f.rho().mul_raw(&f.rho())]).unwrap();
        assert!(!rep.is_good);
        assert!(principal_link(&rep, 4, 1_000_000).is_none());
    }

    #[test]
    fn degenerate_basis_rejected() {
        let f = field7();
        let b = [f.one(), f.rho(), f.one().add_raw(&f.rho())];
        assert!(matches!(
            test_good_basis(&b),
            Err(TwistError::DegenerateBasis)
        ));
    }

    #[test]
    fn e_identities_hold() {
        let f = field7();
        let b = [f.element_i(1, 2, 0), f.rho(), f.element_i(0, 1, 1)];
        let rep = test_good_basis(&b).unwrap();
        let a0 = &rep.alpha0;
        let (b0, g0) = (a0.conj(1), a0.conj(2));
        let e1 = a0.add_raw(&b0).add_raw(&g0);
        let e2 = a0
            .mul_raw(&b0)
            .add_raw(&b0.mul_raw(&g0))
            .add_raw(&g0.mul_raw(a0));
        let e3 = a0.mul_raw(&b0).mul_raw(&g0);
        assert!(e1.is_rational() && e2.is_rational() && e3.is_rational());
        assert_eq!(e1.coords()[0], rep.e1);
        assert_eq!(e2.coords()[0], rep.e2);
        assert_eq!(e3.coords()[0], rep.e3);
        assert_eq!(rep.e1, a0.trace());
        assert_eq!(rep.e3, a0.norm());
    }

    #[test]
    fn alpha0_unit_scaling() {
        // alpha0 of {ux, uy, uz} equals alpha0 / u^2 exactly
        let f = field7();
        let b = [f.element_i(1, 1, 0), f.rho(), f.element_i(0, 0, 1)];
        let a0 = alpha0_of_basis(&b);
        let u = f.rho(); // rho is a unit here: N(rho) = -1
        assert_eq!(u.norm().abs(), rat_i(1));
        let ub = [u.mul_raw(&b[0]), u.mul_raw(&b[1]), u.mul_raw(&b[2])];
        let a0u = alpha0_of_basis(&ub);
        let expected = a0.mul_raw(&u.mul_raw(&u).inv().unwrap());
        assert_eq!(a0u, expected);
    }

    #[test]
    fn unit_transport_preserves_gram() {
        let f = field7();
        // the conjugate integral basis has same-sign twist coefficients
        let b = f.integral_basis_elements();
        let rep = test_good_basis(&b).unwrap();
        assert!(rep.sign_ok);
        for u in [f.one(), f.one().neg(), f.rho(), f.rho().mul_raw(&f.rho())] {
            if u.norm().abs() != rat_i(1) {
                continue;
            }
            let rep2 = unit_transport(&rep, &u).unwrap();
            assert_eq!(rep2.twisted_gram, rep.twisted_gram);
            assert_eq!(rep2.sign_ok, rep.sign_ok);
        }
        let not_unit = f.element_i(2, 0, 0);
        assert!(matches!(
            unit_transport(&rep, &not_unit),
            Err(TwistError::NotAUnit)
        ));
    }

    #[test]
    fn search_is_deterministic_and_finds_good_bases() {
        let f = field7();
        let b0 = f.integral_basis_elements();
        let r1 = good_basis_search(&b0, 500, 2, 0xC0FFEE);
        let r2 = good_basis_search(&b0, 500, 2, 0xC0FFEE);
        assert_eq!(r1.len(), r2.len());
        for (a, b) in r1.iter().zip(r2.iter()) {
            assert_eq!(a.twisted_gram, b.twisted_gram);
        }
        assert!(!r1.is_empty(), "conductor 7 has good bases");
        // iterations = 0 probes only b0
        let only_b0 = good_basis_search(&b0, 0, 2, 1);
        let direct = test_good_basis(&b0).unwrap();
        assert_eq!(only_b0.len(), usize::from(direct.is_good));
    }

    #[test]
    fn good_reports_match_enumeration_oracle() {
        let f = field7();
        let b0 = f.integral_basis_elements();
        for rep in good_basis_search(&b0, 30, 2, 7) {
            assert!(report_matches_oracle(&rep, 1_000_000).unwrap());
        }
    }

    #[test]
    fn orthogonal_twist_conductor7() {
        let f = field7();
        let cert = orthogonal_twist(&f).unwrap();
        assert!(cert.delta.is_totally_positive());
        assert_eq!(cert.delta.norm(), rat_i(49));
        let g = &cert.unimodular_gram;
        // symmetric, determinant 1
        assert_eq!(g[0][1], g[1][0]);
        let gr: [[Rat; 3]; 3] =
            core::array::from_fn(|i| core::array::from_fn(|j| Rat::from_integer(g[i][j].clone())));
        assert_eq!(crate::field::det3(&gr), rat_i(1));
    }

    #[test]
    fn grams_similar_detects_scaled_permutations() {
        let g1 = GramMatrix3::equal_diag(rat_i(6), rat_i(1), rat_i(-2), rat_i(3));
        // scale by 5/3 and permute (x,y,z) -> (z,x,y) with sign flips on two
        let g2 = GramMatrix3::equal_diag(
            rat(18, 5),
            rat(3 * 3, 5) * rat_i(-1) / rat_i(3) * rat_i(3), // placeholder below
            rat_i(0),
            rat_i(0),
        );
        let _ = g2;
        // build g2 honestly: permute then scale
        let perm = [[0, 0, 1], [1, 0, 0], [0, 1, 0]];
        let gp = g1.transform(&perm);
        let c = rat(3, 5);
        let g2 = GramMatrix3::new(
            &gp.s11 * &c,
            &gp.s22 * &c,
            &gp.s33 * &c,
            &gp.u * &c,
            &gp.v * &c,
            -(&gp.w * &c),
        );
        // one flipped off-diagonal is NOT an even sign pattern: similarity
        // must fail; flipping two is allowed
        assert!(!grams_similar(&g1, &g2));
        let g3 = GramMatrix3::new(
            gp.s11.clone() * &c,
            gp.s22.clone() * &c,
            gp.s33.clone() * &c,
            -(&gp.u * &c),
            gp.v.clone() * &c,
            -(&gp.w * &c),
        );
        assert!(grams_similar(&g1, &g3));
        assert!(grams_similar(&g1, &g1));
    }
}
