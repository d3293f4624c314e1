//! Rank-3 lattice machinery over exact rationals: the equal-norm
//! well-rounded criterion, twist coefficients of a real basis, the
//! same-sign test, and a complete shortest-vector enumeration.
//!
//! Enumeration works on the Gram matrix alone through an exact rational
//! LDL^T decomposition; the per-level coefficient ranges are
//! `floor/ceil(t ± sqrt(q))` computed exactly (see [`crate::rat`]), and
//! every emitted vector is re-verified by evaluating the quadratic form in
//! rational arithmetic. There are no false negatives to inflate away: the
//! bounds themselves are exact, which subsumes the usual
//! floating-Cholesky-plus-margin scheme.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::field::{det3, FieldElement};
use crate::rat::{ceil_sub_sqrt, floor_add_sqrt, rat_i, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// The WR Gram criterion applies only to equal-diagonal matrices.
    UnequalDiagonal,
    /// The Gram matrix is not positive definite (dependent or degenerate
    /// basis, including exactly-semidefinite borderline input).
    NotPositiveDefinite,
    /// Enumeration exceeded its configured candidate budget.
    BudgetExceeded,
    /// The lattice is not well-rounded (no minimal basis exists).
    NotWR,
}

impl core::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LatticeError::UnequalDiagonal => write!(f, "criterion needs equal diagonal entries"),
            LatticeError::NotPositiveDefinite => write!(f, "Gram matrix is not positive definite"),
            LatticeError::BudgetExceeded => write!(f, "enumeration budget exceeded"),
            LatticeError::NotWR => write!(f, "lattice is not well-rounded"),
        }
    }
}

impl core::error::Error for LatticeError {}

/// Symmetric 3x3 Gram matrix with entries
/// `[[s11, u, v], [u, s22, w], [v, w, s33]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix3 {
    pub s11: Rat,
    pub s22: Rat,
    pub s33: Rat,
    pub u: Rat,
    pub v: Rat,
    pub w: Rat,
}

impl GramMatrix3 {
    pub fn new(s11: Rat, s22: Rat, s33: Rat, u: Rat, v: Rat, w: Rat) -> Self {
        GramMatrix3 {
            s11,
            s22,
            s33,
            u,
            v,
            w,
        }
    }

    /// Equal-diagonal constructor used throughout the twist tests.
    pub fn equal_diag(s: Rat, u: Rat, v: Rat, w: Rat) -> Self {
        GramMatrix3 {
            s11: s.clone(),
            s22: s.clone(),
            s33: s,
            u,
            v,
            w,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        match (i.min(j), i.max(j)) {
            (0, 0) => &self.s11,
            (1, 1) => &self.s22,
            (2, 2) => &self.s33,
            (0, 1) => &self.u,
            (0, 2) => &self.v,
            (1, 2) => &self.w,
            _ => panic!("index out of range"),
        }
    }

    pub fn to_matrix(&self) -> [[Rat; 3]; 3] {
        [
            [self.s11.clone(), self.u.clone(), self.v.clone()],
            [self.u.clone(), self.s22.clone(), self.w.clone()],
            [self.v.clone(), self.w.clone(), self.s33.clone()],
        ]
    }

    pub fn det(&self) -> Rat {
        det3(&self.to_matrix())
    }

    /// Positive definiteness by leading principal minors, all strictly
    /// positive. Exactly-zero minors (semidefinite borderline) fail.
    pub fn is_positive_definite(&self) -> bool {
        if !self.s11.is_positive() {
            return false;
        }
        let m2 = &self.s11 * &self.s22 - &self.u * &self.u;
        if !m2.is_positive() {
            return false;
        }
        self.det().is_positive()
    }

    /// `Some(s)` when all three diagonal entries are equal.
    pub fn equal_diagonal(&self) -> Option<&Rat> {
        if self.s11 == self.s22 && self.s22 == self.s33 {
            Some(&self.s11)
        } else {
            None
        }
    }

    /// Value of the quadratic form at integer coordinates.
    pub fn quad(&self, x: &[BigInt; 3]) -> Rat {
        let xr = [
            Rat::from_integer(x[0].clone()),
            Rat::from_integer(x[1].clone()),
            Rat::from_integer(x[2].clone()),
        ];
        &self.s11 * &xr[0] * &xr[0]
            + &self.s22 * &xr[1] * &xr[1]
            + &self.s33 * &xr[2] * &xr[2]
            + rat_i(2)
                * (&self.u * &xr[0] * &xr[1]
                    + &self.v * &xr[0] * &xr[2]
                    + &self.w * &xr[1] * &xr[2])
    }

    pub fn quad_i(&self, x: &[i64; 3]) -> Rat {
        self.quad(&[BigInt::from(x[0]), BigInt::from(x[1]), BigInt::from(x[2])])
    }

    /// Gram of the transformed basis `b_i' = sum_j t[i][j] b_j`.
    pub fn transform(&self, t: &[[i64; 3]; 3]) -> GramMatrix3 {
        self.transform_big(&core::array::from_fn(|i| {
            core::array::from_fn(|j| BigInt::from(t[i][j]))
        }))
    }

    /// Gram of the transformed basis, big-integer coefficients.
    pub fn transform_big(&self, t: &[[BigInt; 3]; 3]) -> GramMatrix3 {
        let g = self.to_matrix();
        let tr: [[Rat; 3]; 3] =
            core::array::from_fn(|i| core::array::from_fn(|j| Rat::from_integer(t[i][j].clone())));
        let mut tg: [[Rat; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Rat::zero();
                for k in 0..3 {
                    acc += &tr[i][k] * &g[k][j];
                }
                tg[i][j] = acc;
            }
        }
        let mut out: [[Rat; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Rat::zero();
                for k in 0..3 {
                    acc += &tg[i][k] * &tr[j][k];
                }
                out[i][j] = acc;
            }
        }
        GramMatrix3::new(
            out[0][0].clone(),
            out[1][1].clone(),
            out[2][2].clone(),
            out[0][1].clone(),
            out[0][2].clone(),
            out[1][2].clone(),
        )
    }
}

/// Equal-norm well-rounded criterion for a rank-3 basis Gram matrix: with
/// common squared length `s` and pairwise products `u, v, w`, the basis is
/// minimal and its lattice well-rounded iff
/// `max(|u|,|v|,|w|) <= s/2` and
/// `max(-u+v+w, u-v+w, u+v-w, -u-v-w) <= s`.
pub fn wr_gram_criterion(g: &GramMatrix3) -> Result<bool, LatticeError> {
    let s = g
        .equal_diagonal()
        .ok_or(LatticeError::UnequalDiagonal)?
        .clone();
    if !g.is_positive_definite() {
        return Err(LatticeError::NotPositiveDefinite);
    }
    let (u, v, w) = (&g.u, &g.v, &g.w);
    let half = &s / rat_i(2);
    if u.abs() > half || v.abs() > half || w.abs() > half {
        return Ok(false);
    }
    let combos = [
        -u.clone() + v + w,
        u - v.clone() + w,
        u + v - w.clone(),
        -u.clone() - v - w,
    ];
    Ok(combos.iter().all(|c| c <= &s))
}

/// Same-sign test for three reals through the symmetric functions
/// `e1 = r+s+t`, `e2 = rs+st+tr`, `e3 = rst`: all three numbers share a
/// strict sign iff `e1*e3 > 0` and `e2 > 0`.
pub fn same_sign(r: &Rat, s: &Rat, t: &Rat) -> bool {
    let e1 = r + s + t;
    let e2 = r * s + &(s * t) + t * r;
    let e3 = &(r * s) * t;
    (e1 * e3).is_positive() && e2.is_positive()
}

/// Twist coefficients of a basis of R^3 given by rational coordinate rows
/// `x, y, z`: three 2x2 determinants built from the squared coordinates,
/// whose positive multiples `(k a0, k b0, k g0)` are exactly the squared
/// diagonals of the twists equalizing the three vector lengths.
pub fn twist_coefficients(rows: &[[Rat; 3]; 3]) -> (Rat, Rat, Rat) {
    // column i contributes (x_i^2 - y_i^2, y_i^2 - z_i^2)
    let col = |i: usize| -> [Rat; 2] {
        let sq = |r: &Rat| r * r;
        [
            sq(&rows[0][i]) - sq(&rows[1][i]),
            sq(&rows[1][i]) - sq(&rows[2][i]),
        ]
    };
    let (c1, c2, c3) = (col(0), col(1), col(2));
    let det = |a: &[Rat; 2], b: &[Rat; 2]| -> Rat { &a[0] * &b[1] - &b[0] * &a[1] };
    (det(&c2, &c3), det(&c3, &c1), det(&c1, &c2))
}

/// A rank-3 lattice presented by the Gram matrix of a basis. All geometry
/// (shortest vectors, well-roundedness) is computed from the Gram alone.
#[derive(Debug, Clone)]
pub struct LatticeBasis3 {
    gram: GramMatrix3,
}

impl LatticeBasis3 {
    pub fn from_gram(gram: GramMatrix3) -> Result<Self, LatticeError> {
        if !gram.is_positive_definite() {
            return Err(LatticeError::NotPositiveDefinite);
        }
        Ok(LatticeBasis3 { gram })
    }

    /// Basis given by rational coordinate rows in R^3.
    pub fn from_rows(rows: &[[Rat; 3]; 3]) -> Result<Self, LatticeError> {
        let dot =
            |a: &[Rat; 3], b: &[Rat; 3]| -> Rat { &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2] };
        let gram = GramMatrix3::new(
            dot(&rows[0], &rows[0]),
            dot(&rows[1], &rows[1]),
            dot(&rows[2], &rows[2]),
            dot(&rows[0], &rows[1]),
            dot(&rows[0], &rows[2]),
            dot(&rows[1], &rows[2]),
        );
        Self::from_gram(gram)
    }

    /// Ideal-lattice basis from three field elements under the canonical
    /// embedding: Gram entries are the traces `Tr(b_i b_j)`, exact.
    pub fn from_field_elements(elems: &[FieldElement; 3]) -> Result<Self, LatticeError> {
        let tr = |a: &FieldElement, b: &FieldElement| a.checked_mul(b).expect("same field").trace();
        let gram = GramMatrix3::new(
            tr(&elems[0], &elems[0]),
            tr(&elems[1], &elems[1]),
            tr(&elems[2], &elems[2]),
            tr(&elems[0], &elems[1]),
            tr(&elems[0], &elems[2]),
            tr(&elems[1], &elems[2]),
        );
        Self::from_gram(gram)
    }

    pub fn gram(&self) -> &GramMatrix3 {
        &self.gram
    }
}

/// A short lattice vector: integer coefficients on the input basis and its
/// exact squared norm. Coefficients are big integers because skewed input
/// bases can express tiny vectors with astronomically large coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortVector {
    pub coeffs: [BigInt; 3],
    pub norm_sq: Rat,
}

/// Exact rational LDL^T data: `d` diagonal, `l21, l31, l32` the
/// strictly-lower unit-triangular entries.
struct Ldl {
    d: [Rat; 3],
    l21: Rat,
    l31: Rat,
    l32: Rat,
}

fn ldl(g: &GramMatrix3) -> Option<Ldl> {
    let d1 = g.s11.clone();
    if !d1.is_positive() {
        return None;
    }
    let l21 = &g.u / &d1;
    let l31 = &g.v / &d1;
    let d2 = &g.s22 - &l21 * &l21 * &d1;
    if !d2.is_positive() {
        return None;
    }
    let l32 = (&g.w - &l31 * &l21 * &d1) / &d2;
    let d3 = &g.s33 - &l31 * &l31 * &d1 - &l32 * &l32 * &d2;
    if !d3.is_positive() {
        return None;
    }
    Some(Ldl {
        d: [d1, d2, d3],
        l21,
        l31,
        l32,
    })
}

fn to_i64(b: &BigInt) -> Result<i64, LatticeError> {
    b.try_into().map_err(|_| LatticeError::BudgetExceeded)
}

/// Greedy reduction of a rank-3 Gram matrix, all in exact rationals:
/// pairwise Lagrange steps (`b_i -= round(g_ij/g_jj) b_j` when that
/// shortens `b_i`) plus a closest-vector step of the longest vector
/// against the plane of the other two. The greedy algorithm is optimal in
/// rank <= 4, so the reduced diagonal starts at the first minimum and the
/// subsequent enumeration stays tiny even for badly skewed ideal bases.
/// Every step strictly decreases a squared norm (they live on a discrete
/// grid), so the loop terminates. Returns the reduced Gram and the change
/// of basis `U` with `b'_i = sum_j U[i][j] b_j`. Correctness of the
/// enumeration never depends on reduction quality, only its speed does.
fn pair_reduce(g: &GramMatrix3) -> Result<(GramMatrix3, [[BigInt; 3]; 3]), LatticeError> {
    let mut m = g.to_matrix();
    let one = BigInt::from(1);
    let zero = BigInt::from(0);
    let mut u: [[BigInt; 3]; 3] = [
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [zero.clone(), zero.clone(), one.clone()],
    ];
    // applies b_i -= c*b_j to the Gram and the transform
    fn apply(
        m: &mut [[Rat; 3]; 3],
        u: &mut [[BigInt; 3]; 3],
        i: usize,
        j: usize,
        c: &BigInt,
    ) -> Result<(), LatticeError> {
        let cr = Rat::from_integer(c.clone());
        for k in 0..3 {
            let t = &u[i][k] - c * &u[j][k];
            u[i][k] = t;
        }
        let new_diag = &m[i][i] - rat_i(2) * &cr * &m[i][j] + &cr * &cr * &m[j][j];
        for k in 0..3 {
            if k != i {
                let t = &m[i][k] - &cr * &m[j][k];
                m[i][k] = t.clone();
                m[k][i] = t;
            }
        }
        m[i][i] = new_diag;
        Ok(())
    }
    loop {
        let mut changed = false;
        // pairwise size reduction
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let mu = (&m[i][j] / &m[j][j]).round().to_integer();
                if mu.is_zero() {
                    continue;
                }
                let mur = Rat::from_integer(mu.clone());
                let new_norm = &m[i][i] - rat_i(2) * &mur * &m[i][j] + &mur * &mur * &m[j][j];
                if new_norm >= m[i][i] {
                    continue;
                }
                apply(&mut m, &mut u, i, j, &mu)?;
                changed = true;
            }
        }
        // plane step: reduce each vector by the nearest point of the
        // plane spanned by the other two (exact 2x2 solve, candidates in
        // a box around the real solution)
        for i in 0..3 {
            let (a, b) = match i {
                0 => (1usize, 2usize),
                1 => (0, 2),
                _ => (0, 1),
            };
            let det = &m[a][a] * &m[b][b] - &m[a][b] * &m[a][b];
            if !det.is_positive() {
                return Err(LatticeError::NotPositiveDefinite);
            }
            // real solution of [g_aa g_ab; g_ab g_bb] y = (g_ia, g_ib)
            let y0 = (&m[i][a] * &m[b][b] - &m[i][b] * &m[a][b]) / &det;
            let y1 = (&m[i][b] * &m[a][a] - &m[i][a] * &m[a][b]) / &det;
            let f0 = y0.floor().to_integer();
            let f1 = y1.floor().to_integer();
            let mut best: Option<(Rat, BigInt, BigInt)> = None;
            for d0 in -1i64..=2 {
                for d1 in -1i64..=2 {
                    let c0 = &f0 + BigInt::from(d0);
                    let c1 = &f1 + BigInt::from(d1);
                    if c0.is_zero() && c1.is_zero() {
                        continue;
                    }
                    let c0r = Rat::from_integer(c0.clone());
                    let c1r = Rat::from_integer(c1.clone());
                    // |b_i - c0 b_a - c1 b_b|^2
                    let norm = &m[i][i] - rat_i(2) * (&c0r * &m[i][a] + &c1r * &m[i][b])
                        + &c0r * &c0r * &m[a][a]
                        + rat_i(2) * &c0r * &c1r * &m[a][b]
                        + &c1r * &c1r * &m[b][b];
                    if best.as_ref().map(|(n, _, _)| &norm < n).unwrap_or(true) {
                        best = Some((norm, c0, c1));
                    }
                }
            }
            if let Some((norm, c0, c1)) = best {
                if norm < m[i][i] {
                    if !c0.is_zero() {
                        apply(&mut m, &mut u, i, a, &c0)?;
                    }
                    if !c1.is_zero() {
                        apply(&mut m, &mut u, i, b, &c1)?;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let gr = GramMatrix3::new(
        m[0][0].clone(),
        m[1][1].clone(),
        m[2][2].clone(),
        m[0][1].clone(),
        m[0][2].clone(),
        m[1][2].clone(),
    );
    Ok((gr, u))
}

/// Complete list of nonzero lattice vectors with squared norm `<= bound`,
/// sorted by norm then lexicographic coefficients. Every candidate from
/// the exact LDL pruning is re-verified against the quadratic form before
/// being emitted.
pub fn enumerate_short_vectors(
    l: &LatticeBasis3,
    bound: &Rat,
    budget: usize,
) -> Result<Vec<ShortVector>, LatticeError> {
    if !bound.is_positive() {
        return Err(LatticeError::NotPositiveDefinite);
    }
    let (reduced, u) = pair_reduce(&l.gram)?;
    let raw = enumerate_short_vectors_raw(&reduced, bound, budget)?;
    let mut out: Vec<ShortVector> = Vec::with_capacity(raw.len());
    for v in raw {
        let c: [BigInt; 3] =
            core::array::from_fn(|j| (0..3).map(|i| &v.coeffs[i] * &u[i][j]).sum());
        debug_assert_eq!(l.gram.quad(&c), v.norm_sq);
        out.push(ShortVector {
            coeffs: c,
            norm_sq: v.norm_sq,
        });
    }
    out.sort_by(|a, b| a.norm_sq.cmp(&b.norm_sq).then(a.coeffs.cmp(&b.coeffs)));
    Ok(out)
}

fn enumerate_short_vectors_raw(
    g: &GramMatrix3,
    bound: &Rat,
    budget: usize,
) -> Result<Vec<ShortVector>, LatticeError> {
    let f = ldl(g).ok_or(LatticeError::NotPositiveDefinite)?;
    let mut out: Vec<ShortVector> = Vec::new();
    // Q(x) = d1 (x1 + l21 x2 + l31 x3)^2 + d2 (x2 + l32 x3)^2 + d3 x3^2
    let q3 = bound / &f.d[2];
    let hi3 = to_i64(&floor_add_sqrt(&Rat::zero(), &q3))?;
    for x3 in -hi3..=hi3 {
        let x3r = rat_i(x3);
        let rem2 = bound - &f.d[2] * &x3r * &x3r;
        if rem2.is_negative() {
            continue;
        }
        let c2 = -(&f.l32 * &x3r);
        let q2 = &rem2 / &f.d[1];
        let lo2 = to_i64(&ceil_sub_sqrt(&c2, &q2))?;
        let hi2 = to_i64(&floor_add_sqrt(&c2, &q2))?;
        for x2 in lo2..=hi2 {
            let x2r = rat_i(x2);
            let t2 = &x2r - &c2;
            let rem1 = &rem2 - &f.d[1] * &t2 * &t2;
            if rem1.is_negative() {
                continue;
            }
            let c1 = -(&f.l21 * &x2r) - &f.l31 * &x3r;
            let q1 = &rem1 / &f.d[0];
            let lo1 = to_i64(&ceil_sub_sqrt(&c1, &q1))?;
            let hi1 = to_i64(&floor_add_sqrt(&c1, &q1))?;
            for x1 in lo1..=hi1 {
                if x1 == 0 && x2 == 0 && x3 == 0 {
                    continue;
                }
                let coeffs = [x1, x2, x3];
                let n = g.quad_i(&coeffs);
                debug_assert!(n <= *bound);
                if n <= *bound {
                    if out.len() >= budget {
                        return Err(LatticeError::BudgetExceeded);
                    }
                    out.push(ShortVector {
                        coeffs: [BigInt::from(x1), BigInt::from(x2), BigInt::from(x3)],
                        norm_sq: n,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.norm_sq.cmp(&b.norm_sq).then(a.coeffs.cmp(&b.coeffs)));
    Ok(out)
}

/// First minimum and all vectors attaining it (coefficients on the input
/// basis), by enumeration with a shrinking bound: the input is pairwise
/// reduced first, the bound starts at the smallest reduced diagonal entry
/// and the best norm seen so far prunes deeper levels.
pub fn shortest_vectors(
    l: &LatticeBasis3,
    budget: usize,
) -> Result<(Rat, Vec<[BigInt; 3]>), LatticeError> {
    let (reduced, u) = pair_reduce(&l.gram)?;
    let (min, vecs) = shortest_vectors_raw(&reduced, budget)?;
    let mut mapped: Vec<[BigInt; 3]> = Vec::with_capacity(vecs.len());
    for x in vecs {
        let out: [BigInt; 3] =
            core::array::from_fn(|j| (0..3).map(|i| BigInt::from(x[i]) * &u[i][j]).sum());
        debug_assert_eq!(l.gram.quad(&out), min);
        mapped.push(out);
    }
    mapped.sort();
    mapped.dedup();
    Ok((min, mapped))
}

fn shortest_vectors_raw(
    g: &GramMatrix3,
    budget: usize,
) -> Result<(Rat, Vec<[i64; 3]>), LatticeError> {
    let f = ldl(g).ok_or(LatticeError::NotPositiveDefinite)?;
    let mut best = g.s11.clone().min(g.s22.clone()).min(g.s33.clone());
    let mut mins: Vec<[i64; 3]> = Vec::new();
    let mut nodes: usize = 0;
    let q3 = &best / &f.d[2];
    let hi3 = to_i64(&floor_add_sqrt(&Rat::zero(), &q3))?;
    for x3 in -hi3..=hi3 {
        let x3r = rat_i(x3);
        let part3 = &f.d[2] * &x3r * &x3r;
        if part3 > best {
            continue;
        }
        let c2 = -(&f.l32 * &x3r);
        let q2 = (&best - &part3) / &f.d[1];
        let lo2 = to_i64(&ceil_sub_sqrt(&c2, &q2))?;
        let hi2 = to_i64(&floor_add_sqrt(&c2, &q2))?;
        for x2 in lo2..=hi2 {
            let x2r = rat_i(x2);
            let t2 = &x2r - &c2;
            let part2 = &part3 + &f.d[1] * &t2 * &t2;
            if part2 > best {
                continue;
            }
            let c1 = -(&f.l21 * &x2r) - &f.l31 * &x3r;
            let q1 = (&best - &part2) / &f.d[0];
            let lo1 = to_i64(&ceil_sub_sqrt(&c1, &q1))?;
            let hi1 = to_i64(&floor_add_sqrt(&c1, &q1))?;
            for x1 in lo1..=hi1 {
                if x1 == 0 && x2 == 0 && x3 == 0 {
                    continue;
                }
                nodes += 1;
                if nodes > budget {
                    return Err(LatticeError::BudgetExceeded);
                }
                let coeffs = [x1, x2, x3];
                let n = g.quad_i(&coeffs);
                if n < best {
                    best = n;
                    mins.clear();
                    mins.push(coeffs);
                } else if n == best {
                    mins.push(coeffs);
                }
            }
        }
    }
    mins.sort();
    mins.dedup();
    Ok((best, mins))
}

fn rank_of(coeffs: &[[BigInt; 3]]) -> usize {
    let mut rows: Vec<[Rat; 3]> = coeffs
        .iter()
        .map(|c| {
            [
                Rat::from_integer(c[0].clone()),
                Rat::from_integer(c[1].clone()),
                Rat::from_integer(c[2].clone()),
            ]
        })
        .collect();
    let mut rank = 0;
    for col in 0..3 {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pivot;
                for c in 0..3 {
                    let t = &rows[rank][c] * &factor;
                    rows[r][c] -= t;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Well-roundedness by enumeration: computes the first minimum and checks
/// that the minimal vectors span R^3. Exact.
pub fn is_wr_lattice(
    l: &LatticeBasis3,
    budget: usize,
) -> Result<(bool, Rat, Vec<[BigInt; 3]>), LatticeError> {
    let (min, vecs) = shortest_vectors(l, budget)?;
    let wr = rank_of(&vecs) == 3;
    Ok((wr, min, vecs))
}

/// A minimal basis of a well-rounded lattice: three linearly independent
/// minimal vectors (a basis in rank <= 3). Returns the new Gram (equal
/// diagonal, passes the criterion) and the change of basis.
pub fn minimal_basis(
    l: &LatticeBasis3,
    budget: usize,
) -> Result<(LatticeBasis3, [[BigInt; 3]; 3]), LatticeError> {
    let (wr, _min, vecs) = is_wr_lattice(l, budget)?;
    if !wr {
        return Err(LatticeError::NotWR);
    }
    // deterministic greedy pick of three independent minimal vectors
    let mut chosen: Vec<[BigInt; 3]> = Vec::new();
    for v in &vecs {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if rank_of(&trial) == trial.len() {
            chosen.push(v.clone());
            if chosen.len() == 3 {
                break;
            }
        }
    }
    debug_assert_eq!(chosen.len(), 3);
    let t = [chosen[0].clone(), chosen[1].clone(), chosen[2].clone()];
    let gram = l.gram.transform_big(&t);
    debug_assert_eq!(wr_gram_criterion(&gram), Ok(true));
    Ok((LatticeBasis3 { gram }, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn identity() -> LatticeBasis3 {
        LatticeBasis3::from_gram(GramMatrix3::equal_diag(
            rat_i(1),
            rat_i(0),
            rat_i(0),
            rat_i(0),
        ))
        .unwrap()
    }

    fn fcc() -> LatticeBasis3 {
        LatticeBasis3::from_gram(GramMatrix3::equal_diag(
            rat_i(2),
            rat_i(1),
            rat_i(1),
            rat_i(1),
        ))
        .unwrap()
    }

    #[test]
    fn criterion_examples() {
        let id = GramMatrix3::equal_diag(rat_i(1), rat_i(0), rat_i(0), rat_i(0));
        assert_eq!(wr_gram_criterion(&id), Ok(true));
        let face = GramMatrix3::equal_diag(rat_i(2), rat_i(1), rat_i(1), rat_i(1));
        assert_eq!(wr_gram_criterion(&face), Ok(true));
        // -u-v-w = 3 > 2; this matrix is in fact degenerate
        let bad = GramMatrix3::equal_diag(rat_i(2), rat_i(-1), rat_i(-1), rat_i(-1));
        assert_eq!(
            wr_gram_criterion(&bad),
            Err(LatticeError::NotPositiveDefinite)
        );
        let uneq = GramMatrix3::new(rat_i(1), rat_i(2), rat_i(1), rat_i(0), rat_i(0), rat_i(0));
        assert_eq!(wr_gram_criterion(&uneq), Err(LatticeError::UnequalDiagonal));
    }

    #[test]
    fn criterion_matches_oracle_on_fcc() {
        let (wr, min, vecs) = is_wr_lattice(&fcc(), 10_000).unwrap();
        assert!(wr);
        assert_eq!(min, rat_i(2));
        assert_eq!(vecs.len(), 12);
    }

    #[test]
    fn same_sign_cases() {
        assert!(same_sign(&rat_i(1), &rat_i(2), &rat_i(3)));
        assert!(same_sign(&rat_i(-1), &rat_i(-2), &rat_i(-3)));
        assert!(!same_sign(&rat_i(1), &rat_i(-1), &rat_i(1)));
        assert!(!same_sign(&rat_i(0), &rat_i(1), &rat_i(2)));
    }

    #[test]
    fn same_sign_exhaustive_grid() {
        let vals: Vec<Rat> = (-4..=4)
            .flat_map(|n| (1..=3).map(move |d| rat(n, d)))
            .collect();
        for r in &vals {
            for s in &vals {
                for t in &vals {
                    let expected = (r.is_positive() && s.is_positive() && t.is_positive())
                        || (r.is_negative() && s.is_negative() && t.is_negative());
                    assert_eq!(same_sign(r, s, t), expected, "r={r} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn twist_coefficients_identity_and_scaling() {
        let id = [
            [rat_i(1), rat_i(0), rat_i(0)],
            [rat_i(0), rat_i(1), rat_i(0)],
            [rat_i(0), rat_i(0), rat_i(1)],
        ];
        assert_eq!(twist_coefficients(&id), (rat_i(1), rat_i(1), rat_i(1)));
        let rows = [
            [rat_i(2), rat_i(1), rat_i(0)],
            [rat(1, 2), rat_i(-1), rat_i(3)],
            [rat_i(0), rat(2, 3), rat_i(1)],
        ];
        let (a, b, c) = twist_coefficients(&rows);
        let scaled: [[Rat; 3]; 3] =
            core::array::from_fn(|i| core::array::from_fn(|j| &rows[i][j] * rat_i(5)));
        let (a5, b5, c5) = twist_coefficients(&scaled);
        let k = rat_i(5 * 5 * 5 * 5);
        assert_eq!(a5, &a * &k);
        assert_eq!(b5, &b * &k);
        assert_eq!(c5, &c * &k);
    }

    #[test]
    fn twisted_lengths_equalize_symbolically() {
        // for any basis, twisting by the squared diagonal (a0, b0, g0)
        // makes the three squared lengths exactly equal
        let rows = [
            [rat_i(3), rat(-1, 2), rat_i(1)],
            [rat_i(1), rat_i(2), rat(5, 3)],
            [rat_i(-2), rat_i(1), rat_i(4)],
        ];
        let (a, b, c) = twist_coefficients(&rows);
        let len =
            |r: &[Rat; 3]| -> Rat { &a * &r[0] * &r[0] + &b * &r[1] * &r[1] + &c * &r[2] * &r[2] };
        assert_eq!(len(&rows[0]), len(&rows[1]));
        assert_eq!(len(&rows[1]), len(&rows[2]));
    }

    #[test]
    fn enumeration_counts() {
        let id = identity();
        let v1 = enumerate_short_vectors(&id, &rat_i(1), 100).unwrap();
        assert_eq!(v1.len(), 6);
        assert!(v1.iter().all(|v| v.norm_sq == rat_i(1)));
        let v2 = enumerate_short_vectors(&id, &rat_i(2), 100).unwrap();
        assert_eq!(v2.len(), 18);
        assert_eq!(v2.iter().filter(|v| v.norm_sq == rat_i(2)).count(), 12);
        let vf = enumerate_short_vectors(&fcc(), &rat_i(2), 100).unwrap();
        assert_eq!(vf.len(), 12);
        // symmetric under negation, no duplicates
        for v in &vf {
            let neg = [
                -v.coeffs[0].clone(),
                -v.coeffs[1].clone(),
                -v.coeffs[2].clone(),
            ];
            assert!(vf.iter().any(|w| w.coeffs == neg));
        }
        let mut seen: Vec<[BigInt; 3]> = vf.iter().map(|v| v.coeffs.clone()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), vf.len());
    }

    #[test]
    fn enumeration_budget() {
        let id = identity();
        assert_eq!(
            enumerate_short_vectors(&id, &rat_i(100), 10),
            Err(LatticeError::BudgetExceeded)
        );
    }

    #[test]
    fn is_wr_examples() {
        let (wr, min, vecs) = is_wr_lattice(&identity(), 1000).unwrap();
        assert!(wr);
        assert_eq!(min, rat_i(1));
        assert_eq!(vecs.len(), 6);
        let stretched = LatticeBasis3::from_gram(GramMatrix3::new(
            rat_i(1),
            rat_i(1),
            rat_i(2),
            rat_i(0),
            rat_i(0),
            rat_i(0),
        ))
        .unwrap();
        let (wr, min, vecs) = is_wr_lattice(&stretched, 1000).unwrap();
        assert!(!wr);
        assert_eq!(min, rat_i(1));
        assert_eq!(vecs.len(), 4);
    }

    #[test]
    fn minimal_basis_recovers_identity() {
        // unimodular recombination of the cubic lattice
        let t = [[1, 2, -1], [0, 1, 3], [0, 0, 1]];
        let g = identity().gram().transform(&t);
        let l = LatticeBasis3::from_gram(g).unwrap();
        let (min, _u) = minimal_basis(&l, 100_000).unwrap();
        assert_eq!(
            *min.gram(),
            GramMatrix3::equal_diag(rat_i(1), rat_i(0), rat_i(0), rat_i(0))
        );
        let diag = LatticeBasis3::from_gram(GramMatrix3::new(
            rat_i(1),
            rat_i(1),
            rat_i(2),
            rat_i(0),
            rat_i(0),
            rat_i(0),
        ))
        .unwrap();
        assert_eq!(minimal_basis(&diag, 1000).unwrap_err(), LatticeError::NotWR);
    }

    #[test]
    fn equal_norm_nonminimal_basis_of_wr_lattice_exists() {
        // coefficient rows (1,1,0), (1,0,1), (0,-1,2) under the fcc form
        // give an equal-norm basis whose Gram fails the criterion even
        // though the lattice itself is well-rounded: the criterion decides
        // minimality of the basis, not well-roundedness of the lattice
        let t = [[1, 1, 0], [1, 0, 1], [0, -1, 2]];
        let g = fcc().gram().transform(&t);
        assert_eq!(g.equal_diagonal(), Some(&rat_i(6)));
        assert_eq!(wr_gram_criterion(&g), Ok(false));
        let l = LatticeBasis3::from_gram(g).unwrap();
        let (wr, min, _) = is_wr_lattice(&l, 100_000).unwrap();
        assert!(wr);
        assert_eq!(min, rat_i(2));
    }
}
