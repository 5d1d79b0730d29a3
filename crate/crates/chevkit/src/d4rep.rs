//! The 8-dimensional orthogonal representation of the split D₄ group, as
//! explicit matrices, plus the normal-form classification of the twisted
//! torus-unipotent elements built from it (`classify_theta`).
//!
//! Conventions, fixed once here and relied on everywhere below:
//!
//! * Matrices act on **row** vectors, `v ↦ v·M`, and composite group words
//!   multiply in reading order: the element "first g, then h" is the matrix
//!   product `g·h`. No order reversal anywhere.
//! * Coordinate `k` (0-based) carries the weight `MU[k]`, written in the
//!   orthogonal `e`-basis of the D₄ root space. A root element `x_γ(c)` is
//!   `I + c·P_γ` where the pattern `P_γ` has its two nonzero entries at
//!   positions `(i, j)` with `μ_j − μ_i = γ`; positive roots therefore sit
//!   strictly below the diagonal and the Borel subgroup is lower triangular.
//! * Lowering patterns are not free choices: `P_{−γ}` is the unique
//!   transpose-supported matrix with `[P_γ, P_{−γ}] = h_{γ∨}`, the standard
//!   sl₂ normalization. That forces `h_{γ∨}(t) = diag(t^{−(μ_k, γ)})`, which
//!   is what makes `h x_α(c) h⁻¹ = x_α(t^{⟨α,γ∨⟩} c)` come out right for row
//!   actions.
//! * A row eigenvector of `g` for the eigenvalue `λ` is an element of
//!   `left_kernel(g − λI)`.
//!
//! The representation preserves the hyperbolic quadratic form
//! `f(x) = x₀x₇ + x₁x₆ + x₂x₅ + x₃x₄` with polar form
//! `(x, y) = Σ x_k y_{7−k}`, satisfying `f(u+v) = f(u) + f(v) + (u, v)` in
//! every characteristic.
//!
//! The constructor cross-checks the matrix model against the abstract
//! structure constants: it solves for the sign twist `ε` that aligns the
//! engine's Chevalley constants with the matrix brackets, then verifies
//! every ordered root pair, every `ṡ_i`-conjugation sign, and the sl₂
//! monomial inverses, all in integer arithmetic.

use std::collections::HashMap;
use std::sync::Arc;

use crate::chevalley::{GroupCtx, StructConsts};
use crate::error::{ChevError, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{IMat, Mat};
use crate::rootsys::RootSystem;
use crate::weyl::longest_element;

mod classify;
pub use classify::{Classification, ThetaClass};

/// 8×8 matrix over an exact field; the representation space.
pub type Mat8 = Mat;

const DIM: usize = 8;

/// Weights of the 8 coordinates in the `e`-basis.
const MU: [[i64; 4]; DIM] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [0, 0, 0, -1],
    [0, 0, -1, 0],
    [0, -1, 0, 0],
    [-1, 0, 0, 0],
];

/// Raising patterns: simple-root coefficients `(c₁,c₂,c₃,c₄)` of each
/// positive root and the two `(row, col, sign)` entries of its pattern.
const POS_PATTERNS: [([i64; 4], [(usize, usize, i64); 2]); 12] = [
    ([1, 0, 0, 0], [(1, 0, 1), (7, 6, -1)]),
    ([0, 1, 0, 0], [(2, 1, 1), (6, 5, -1)]),
    ([0, 0, 1, 0], [(3, 2, 1), (5, 4, -1)]),
    ([0, 0, 0, 1], [(4, 2, 1), (5, 3, -1)]),
    ([1, 1, 0, 0], [(2, 0, -1), (7, 5, 1)]),
    ([0, 1, 1, 0], [(3, 1, 1), (6, 4, -1)]),
    ([0, 1, 0, 1], [(4, 1, -1), (6, 3, 1)]),
    ([1, 1, 1, 0], [(3, 0, -1), (7, 4, 1)]),
    ([1, 1, 0, 1], [(4, 0, 1), (7, 3, -1)]),
    ([0, 1, 1, 1], [(5, 1, 1), (6, 2, -1)]),
    ([1, 1, 1, 1], [(5, 0, -1), (7, 2, 1)]),
    ([1, 2, 1, 1], [(6, 0, 1), (7, 1, -1)]),
];

/// Coefficient tuple → `e`-basis vector.
fn to_evec(co: &[i64]) -> [i64; 4] {
    [co[0], co[1] - co[0], co[2] + co[3] - co[1], co[3] - co[2]]
}

fn dot(a: &[i64; 4], b: &[i64; 4]) -> i64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn imat_of(entries: &[(usize, usize, i64); 2]) -> IMat {
    let mut m = IMat::zero(DIM);
    for &(i, j, s) in entries {
        m[(i, j)] = s;
    }
    m
}

/// Scalar equality that never trusts representation normalization.
pub(crate) fn sc_eq(a: &Scalar, b: &Scalar) -> bool {
    a.sub(b).is_zero()
}

pub(crate) fn mat_eq(a: &Mat, b: &Mat) -> bool {
    a.n_rows == b.n_rows
        && a.n_cols == b.n_cols
        && a.entries.iter().zip(b.entries.iter()).all(|(x, y)| sc_eq(x, y))
}

/// Product of scalar powers, the workhorse for transcribing monomial
/// formulas. Negative exponents invert, so bases must be nonzero for those.
pub(crate) fn mono(field: &Field, factors: &[(&Scalar, i64)]) -> Scalar {
    let mut acc = field.one();
    for (s, e) in factors {
        acc = acc.mul(&s.pow(*e));
    }
    acc
}

/// The polar form `(x, y) = Σ x_k y_{7−k}`.
pub fn bilinear(x: &[Scalar], y: &[Scalar]) -> Scalar {
    assert_eq!(x.len(), DIM);
    assert_eq!(y.len(), DIM);
    let mut acc = x[0].field().zero();
    for k in 0..DIM {
        acc = acc.add(&x[k].mul(&y[DIM - 1 - k]));
    }
    acc
}

/// The quadratic form `f(x) = x₀x₇ + x₁x₆ + x₂x₅ + x₃x₄`.
pub fn quad(x: &[Scalar]) -> Scalar {
    assert_eq!(x.len(), DIM);
    let mut acc = x[0].field().zero();
    for k in 0..4 {
        acc = acc.add(&x[k].mul(&x[DIM - 1 - k]));
    }
    acc
}

/// Does `m` preserve the quadratic form `f` (and hence its polar form)?
///
/// With `Q` the upper-triangular Gram matrix of `f` and `J = Q + Qᵀ`, the
/// conditions are `MJMᵀ = J` together with a zero diagonal for
/// `A = MQMᵀ − Q`; the first makes `A` antisymmetric, and then `vAvᵀ = 0`
/// for all `v` exactly when the diagonal vanishes, which stays correct in
/// characteristic 2.
pub fn form_preserved(m: &Mat) -> bool {
    if m.n_rows != DIM || m.n_cols != DIM {
        return false;
    }
    let field = m.entries[0].field();
    let mut q = Mat::zero(&field, DIM, DIM);
    let mut j = Mat::zero(&field, DIM, DIM);
    for k in 0..4 {
        q[(k, DIM - 1 - k)] = field.one();
    }
    for k in 0..DIM {
        j[(k, DIM - 1 - k)] = field.one();
    }
    let mjmt = m.mul(&j).mul(&m.transpose());
    if !mat_eq(&mjmt, &j) {
        return false;
    }
    let a = m.mul(&q).mul(&m.transpose());
    (0..DIM).all(|k| sc_eq(&a[(k, k)], &q[(k, k)]))
}

/// Multiplier of `m` as a similitude of the split form: the `λ ≠ 0` with
/// `f(x·m) = λ·f(x)` for all `x`, or `None` if `m` is no similitude. The
/// bilinear and pure-square parts are checked separately so the test stays
/// valid in characteristic 2. Isometries are the `λ = 1` case; diagonal
/// torus moves whose discriminant is a non-square are honest similitudes
/// with `λ` in the non-square class.
pub fn similitude_factor(m: &Mat) -> Option<Scalar> {
    if m.n_rows != DIM || m.n_cols != DIM {
        return None;
    }
    let field = m.entries[0].field();
    let mut q = Mat::zero(&field, DIM, DIM);
    let mut j = Mat::zero(&field, DIM, DIM);
    for k in 0..4 {
        q[(k, DIM - 1 - k)] = field.one();
    }
    for k in 0..DIM {
        j[(k, DIM - 1 - k)] = field.one();
    }
    let mjmt = m.mul(&j).mul(&m.transpose());
    let lambda = mjmt[(0, DIM - 1)].clone();
    if lambda.is_zero() || !mat_eq(&mjmt, &j.scale(&lambda)) {
        return None;
    }
    let a = m.mul(&q).mul(&m.transpose());
    if (0..DIM).all(|k| sc_eq(&a[(k, k)], &q[(k, k)].mul(&lambda))) {
        Some(lambda)
    } else {
        None
    }
}

/// A basis of the representation space adapted to the form: eight rows
/// `v₁..v₈` with every `f(vᵢ) = 0` and `(vᵢ, vⱼ) = 1` exactly when
/// `i + j = 9` (1-based). Conjugating by the row matrix of such a basis
/// carries the form to itself, so normal forms computed afterwards are
/// still orthogonal data.
#[derive(Clone)]
pub struct StdBasis {
    pub rows: Vec<Vec<Scalar>>,
}

impl StdBasis {
    pub fn matrix(&self) -> Mat {
        let field = self.rows[0][0].field();
        let mut m = Mat::zero(&field, DIM, DIM);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    /// Check every defining identity; the error names the first failure.
    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != DIM || self.rows.iter().any(|r| r.len() != DIM) {
            return Err(ChevError::finding("std-basis", "need 8 rows of length 8"));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !quad(row).is_zero() {
                return Err(ChevError::finding(
                    "std-basis",
                    format!("row {} is not isotropic", i + 1),
                ));
            }
        }
        for i in 0..DIM {
            for j in i..DIM {
                let want_one = i + j == DIM - 1;
                let p = bilinear(&self.rows[i], &self.rows[j]);
                let ok = if want_one { p.is_one() } else { p.is_zero() };
                if !ok {
                    return Err(ChevError::finding(
                        "std-basis",
                        format!("pairing of rows {} and {} is off", i + 1, j + 1),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The 8-dimensional D₄ representation with verified structure constants.
///
/// `ctx` is a group context over D₄ whose ε-twist was solved so that the
/// engine's `N`- and `η`-tables agree with the matrix brackets; engine
/// elements and these matrices can therefore be mixed freely.
pub struct D4Rep {
    pub ctx: GroupCtx,
    /// Pattern entries for every root index (raising and lowering).
    pat: Vec<[(usize, usize, i64); 2]>,
    /// `e`-basis expansion of every root.
    evec: Vec<[i64; 4]>,
    /// Weight difference → root index, for walking matrix positions.
    root_of_evec: HashMap<[i64; 4], usize>,
}

impl D4Rep {
    pub fn new(field: &Field) -> Result<D4Rep> {
        let rs = Arc::new(RootSystem::build('D', 4)?);
        let n_roots = rs.n_roots();

        let mut evec = vec![[0i64; 4]; n_roots];
        let mut root_of_evec = HashMap::new();
        for r in 0..n_roots {
            evec[r] = to_evec(&rs.root(r).coeffs);
            root_of_evec.insert(evec[r], r);
        }

        let mut pat: Vec<Option<[(usize, usize, i64); 2]>> = vec![None; n_roots];
        for (coeffs, entries) in POS_PATTERNS.iter() {
            let idx = rs.expect_root(coeffs);
            for &(i, j, _) in entries {
                // Every pattern entry must sit on the weight pair of its root.
                let diff = [
                    MU[j][0] - MU[i][0],
                    MU[j][1] - MU[i][1],
                    MU[j][2] - MU[i][2],
                    MU[j][3] - MU[i][3],
                ];
                assert_eq!(diff, evec[idx], "pattern entry off its weight pair");
            }
            pat[idx] = Some(*entries);
        }

        // Lowering patterns: solve [P_γ, F] = h_{γ∨} over the integers. The
        // two candidate entries contribute to disjoint diagonal positions, so
        // the solution is unique when it exists.
        for p in 0..rs.n_pos {
            let [(i1, j1, _), (i2, j2, _)] = pat[p].unwrap();
            let mut h = IMat::zero(DIM);
            for k in 0..DIM {
                h[(k, k)] = -dot(&MU[k], &evec[p]);
            }
            let pm = imat_of(&pat[p].unwrap());
            let mut found = None;
            for t1 in [1i64, -1] {
                for t2 in [1i64, -1] {
                    let cand = [(j1, i1, t1), (j2, i2, t2)];
                    let fm = imat_of(&cand);
                    let br = pm.mul(&fm).add(&fm.mul(&pm).scale(-1));
                    if br.entries == h.entries {
                        assert!(found.is_none(), "ambiguous lowering pattern");
                        found = Some(cand);
                    }
                }
            }
            pat[rs.neg(p)] = Some(found.expect("no sl2-normalized lowering pattern"));
        }
        let pat: Vec<[(usize, usize, i64); 2]> = pat.into_iter().map(Option::unwrap).collect();

        // Bracket of two patterns, for comparison against N-tables.
        let bracket = |a: usize, b: usize| -> IMat {
            let pa = imat_of(&pat[a]);
            let pb = imat_of(&pat[b]);
            pa.mul(&pb).add(&pb.mul(&pa).scale(-1))
        };
        let bracket_const = |a: usize, b: usize, sum: usize| -> i64 {
            let br = bracket(a, b);
            let (i1, j1, s1) = pat[sum][0];
            let n = br[(i1, j1)] * s1;
            assert!(n == 1 || n == -1, "bracket constant must be ±1");
            assert_eq!(
                br.entries,
                imat_of(&pat[sum]).scale(n).entries,
                "bracket is not a multiple of the sum pattern"
            );
            n
        };

        // Solve the ε-twist: signs are 1 on the simples and propagate up by
        // height through any one decomposition γ = α + β; the exhaustive
        // check below proves the choice consistent for all pairs at once.
        let defaults = StructConsts::new(rs.clone())?;
        let mut eps = vec![0i8; rs.n_pos];
        for idx in 0..rs.n_pos {
            if rs.height(idx) == 1 {
                eps[idx] = 1;
                continue;
            }
            let gamma = rs.root(idx).coeffs.clone();
            let mut assigned = false;
            for b in 0..idx {
                let beta = &rs.root(b).coeffs;
                let diff: Vec<i64> = gamma.iter().zip(beta.iter()).map(|(g, x)| g - x).collect();
                let Some(a_idx) = rs.index_of(&diff) else { continue };
                if !rs.is_positive(a_idx) {
                    continue;
                }
                let n_pat = bracket_const(a_idx, b, idx);
                let n_def = defaults.n(a_idx, b);
                let s: i8 = if n_pat * n_def > 0 { 1 } else { -1 };
                eps[idx] = s * eps[a_idx] * eps[b];
                assigned = true;
                break;
            }
            assert!(assigned, "positive root without a two-term decomposition");
        }
        let consts = Arc::new(StructConsts::with_epsilon(rs.clone(), eps)?);

        // Every ordered root pair: summing pairs must bracket to the engine
        // constant times the sum pattern, non-summing pairs to zero.
        for x in 0..n_roots {
            for y in 0..n_roots {
                if x == y || rs.neg(x) == y {
                    continue;
                }
                match rs.add_roots(x, y) {
                    Some(sum) => {
                        assert_eq!(
                            bracket_const(x, y, sum),
                            consts.n(x, y),
                            "structure constant mismatch at pair ({x}, {y})"
                        );
                    }
                    None => {
                        assert!(
                            bracket(x, y).entries.iter().all(|&e| e == 0),
                            "non-adjacent pair ({x}, {y}) has a nonzero bracket"
                        );
                    }
                }
            }
        }

        // Monomial conjugation: ṡ_i = x_i(1) x_{−i}(−1) x_i(1) must permute
        // the patterns with exactly the engine's η-signs. Integer-exact.
        for i in 0..rs.rank {
            let p_idx = rs.simple(i);
            let f_idx = rs.neg(p_idx);
            let id = IMat::identity(DIM);
            let pm = imat_of(&pat[p_idx]);
            let fm = imat_of(&pat[f_idx]);
            let plus = id.add(&pm);
            let minus = id.add(&pm.scale(-1));
            let s_m = plus.mul(&id.add(&fm.scale(-1))).mul(&plus);
            let s_inv = minus.mul(&id.add(&fm)).mul(&minus);
            assert_eq!(
                s_m.mul(&s_inv).entries,
                id.entries,
                "monomial inverse identity failed at node {i}"
            );
            for b in 0..n_roots {
                let img = rs.simple_refl[i][b];
                let lhs = s_m.mul(&imat_of(&pat[b])).mul(&s_inv);
                let rhs = imat_of(&pat[img]).scale(consts.eta(i, b) as i64);
                assert_eq!(lhs.entries, rhs.entries, "η mismatch at ({i}, {b})");
            }
        }

        let ctx = GroupCtx::with_consts(consts, field.clone());
        Ok(D4Rep { ctx, pat, evec, root_of_evec })
    }

    pub fn field(&self) -> &Field {
        &self.ctx.field
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.ctx.rs
    }

    pub(crate) fn ridx(&self, coeffs: &[i64]) -> usize {
        self.ctx.rs.expect_root(coeffs)
    }

    /// `x_γ(a) = I + a·P_γ` by root index (raising or lowering).
    pub fn x_mat(&self, root: usize, a: &Scalar) -> Mat {
        let mut m = Mat::identity(&self.ctx.field, DIM);
        for &(i, j, s) in &self.pat[root] {
            m[(i, j)] = if s > 0 { a.clone() } else { a.neg() };
        }
        m
    }

    /// Root element by simple-root coefficients; errors on a non-root tuple.
    pub fn d4_matrix(&self, coeffs: &[i64], a: &Scalar) -> Result<Mat> {
        if coeffs.len() != 4 {
            return Err(ChevError::usage("a D4 root needs 4 coefficients"));
        }
        match self.ctx.rs.index_of(coeffs) {
            Some(idx) => Ok(self.x_mat(idx, a)),
            None => Err(ChevError::usage(format!("{coeffs:?} is not a D4 root"))),
        }
    }

    /// `h_{γ∨}(t) = diag(t^{−(μ_k, γ)})`; conjugation scales `x_α(c)` by
    /// `t^{⟨α,γ∨⟩}`.
    pub fn h_coroot_mat(&self, root: usize, t: &Scalar) -> Result<Mat> {
        if t.is_zero() {
            return Err(ChevError::usage("torus parameter must be nonzero"));
        }
        let mut m = Mat::identity(&self.ctx.field, DIM);
        for k in 0..DIM {
            m[(k, k)] = t.pow(-dot(&MU[k], &self.evec[root]));
        }
        Ok(m)
    }

    /// `ρ(ṡ_i) = x_i(1) x_{−i}(−1) x_i(1)` for the 0-based node `i`.
    pub fn s_mat(&self, i: usize) -> Mat {
        let p = self.ctx.rs.simple(i);
        let one = self.ctx.field.one();
        self.x_mat(p, &one)
            .mul(&self.x_mat(self.ctx.rs.neg(p), &one.neg()))
            .mul(&self.x_mat(p, &one))
    }

    pub fn s_mat_inv(&self, i: usize) -> Mat {
        let p = self.ctx.rs.simple(i);
        let one = self.ctx.field.one();
        self.x_mat(p, &one.neg())
            .mul(&self.x_mat(self.ctx.rs.neg(p), &one))
            .mul(&self.x_mat(p, &one.neg()))
    }

    /// Monomial matrix of a Weyl word in 1-based letters.
    pub fn n_word_mat(&self, word: &[usize]) -> Mat {
        let mut m = Mat::identity(&self.ctx.field, DIM);
        for &i in word {
            assert!((1..=4).contains(&i), "word letter {i} out of range");
            m = m.mul(&self.s_mat(i - 1));
        }
        m
    }

    /// Monomial of the longest Weyl element (braid-invariant, so the
    /// canonical word is as good as any reduced word).
    pub fn w_longest_mat(&self) -> Mat {
        self.n_word_mat(&longest_element(&self.ctx.rs).canonical_word(&self.ctx.rs))
    }

    /// Multiplier of a root character: `Π multᵢ^{cᵢ(γ)}`.
    fn root_mult(&self, mult: &[Scalar; 4], root: usize) -> Scalar {
        let co = &self.ctx.rs.root(root).coeffs;
        let mut acc = self.ctx.field.one();
        for (m, &c) in mult.iter().zip(co.iter()) {
            acc = acc.mul(&m.pow(c));
        }
        acc
    }

    /// The diagonal torus matrix `D` with `D x_γ(c) D⁻¹ = x_γ(mult^γ · c)`
    /// for every root `γ`, where `mult^γ` extends the four simple-root
    /// multipliers multiplicatively. Built by walking the weight graph and
    /// then re-verified on every weight pair.
    pub fn torus_conj_diag(&self, mult: &[Scalar; 4]) -> Result<Mat> {
        if mult.iter().any(|m| m.is_zero()) {
            return Err(ChevError::usage("torus multipliers must be nonzero"));
        }
        let f = &self.ctx.field;
        let mut d: Vec<Option<Scalar>> = vec![None; DIM];
        d[0] = Some(f.one());
        let mut queue = vec![0usize];
        while let Some(k) = queue.pop() {
            for l in 0..DIM {
                if d[l].is_some() {
                    continue;
                }
                let diff = [
                    MU[l][0] - MU[k][0],
                    MU[l][1] - MU[k][1],
                    MU[l][2] - MU[k][2],
                    MU[l][3] - MU[k][3],
                ];
                let Some(&g) = self.root_of_evec.get(&diff) else { continue };
                // A γ-entry at (k, l) imposes d_k / d_l = mult^γ.
                let dk = d[k].clone().unwrap();
                d[l] = Some(dk.div(&self.root_mult(mult, g)));
                queue.push(l);
            }
        }
        let d: Vec<Scalar> = d.into_iter().map(|x| x.expect("weight graph connected")).collect();
        for k in 0..DIM {
            for l in 0..DIM {
                let diff = [
                    MU[l][0] - MU[k][0],
                    MU[l][1] - MU[k][1],
                    MU[l][2] - MU[k][2],
                    MU[l][3] - MU[k][3],
                ];
                if let Some(&g) = self.root_of_evec.get(&diff) {
                    assert!(
                        sc_eq(&d[k], &d[l].mul(&self.root_mult(mult, g))),
                        "torus multiplier inconsistency on the weight graph"
                    );
                }
            }
        }
        // The ratios pin the diagonal only up to a global scalar, and the
        // seed d₀ = 1 usually picks a pure similitude: every product
        // d_k·d_{7−k} comes out as the same ρ (here χ₁²χ₂²χ₃χ₄). When ρ is
        // a square, rescaling by a root of ρ⁻¹ lands in the orthogonal
        // group and that representative is returned; otherwise no isometry
        // realizes the multiplier tuple at all — the ambient torus acting
        // on this module is genuinely a similitude torus — and the
        // similitude with factor ρ is the best possible answer.
        let mut d = d;
        let rho = d[0].mul(&d[DIM - 1]);
        if let Some(c) = rho.inv().try_sqrt() {
            for v in d.iter_mut() {
                *v = v.mul(&c);
            }
        }
        let factor = d[0].mul(&d[DIM - 1]);
        for k in 0..DIM {
            assert!(
                sc_eq(&d[k].mul(&d[DIM - 1 - k]), &factor),
                "torus diagonal is not a similitude"
            );
        }
        let mut m = Mat::identity(f, DIM);
        for k in 0..DIM {
            m[(k, k)] = d[k].clone();
        }
        debug_assert!(similitude_factor(&m).is_some());
        Ok(m)
    }

    /// Factor a unipotent element of the Borel into raising coefficients,
    /// by ascending root height: returns `(root, c)` pairs whose in-order
    /// product is `m`. Heights add under multiplication, so the entry at the
    /// lowest remaining height reads its coefficient exactly; anything left
    /// over at the end proves `m` was not such a product.
    pub fn peel(&self, m: &Mat) -> Result<Vec<(usize, Scalar)>> {
        let mut work = m.clone();
        let mut out = Vec::new();
        for idx in 0..self.ctx.rs.n_pos {
            let (i, j, s) = self.pat[idx][0];
            let c = if s > 0 { work[(i, j)].clone() } else { work[(i, j)].neg() };
            if c.is_zero() {
                continue;
            }
            work = self.x_mat(idx, &c.neg()).mul(&work);
            out.push((idx, c));
        }
        if !work.is_identity() {
            return Err(ChevError::finding(
                "unipotent-factorization",
                "matrix is not a product of raising root elements",
            ));
        }
        Ok(out)
    }

    /// Split a Borel element as `m = U·H` with `U` unipotent upper (in the
    /// raising sense) and `H` the diagonal torus part; returns the diagonal
    /// and the peeled factors of `U`.
    pub fn borel_split(&self, m: &Mat) -> Result<(Vec<Scalar>, Vec<(usize, Scalar)>)> {
        let f = &self.ctx.field;
        let mut h_inv = Mat::identity(f, DIM);
        let mut diag = Vec::with_capacity(DIM);
        for k in 0..DIM {
            let e = m[(k, k)].clone();
            if e.is_zero() {
                return Err(ChevError::finding("borel-split", "zero diagonal entry"));
            }
            h_inv[(k, k)] = e.inv();
            diag.push(e);
        }
        let u = m.mul(&h_inv);
        let factors = self.peel(&u)?;
        Ok((diag, factors))
    }

    /// The twisted element `θ = u·h·ẇ₀`: twelve raising factors with
    /// monomial coefficients in `(t₁..t₄, a, b, c)`, a torus part, and the
    /// longest-Weyl monomial. Errors on a zero torus parameter.
    pub fn build_theta_e74(&self, t: &[Scalar; 4], a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Mat> {
        if t.iter().any(|x| x.is_zero()) {
            return Err(ChevError::usage("theta needs nonzero torus parameters"));
        }
        let f = &self.ctx.field;
        let (t1, t2, t3, t4) = (&t[0], &t[1], &t[2], &t[3]);
        let atoms: [([i64; 4], Scalar); 12] = [
            ([1, 0, 0, 0], mono(f, &[(t2, 1), (t3, 1), (t4, 1), (a, 1)])),
            ([1, 1, 0, 0], mono(f, &[(t1, 1), (t2, 1), (t3, 1), (t4, 1), (b, 1)]).neg()),
            ([1, 1, 0, 1], mono(f, &[(t1, 1), (t2, 1), (t3, 1), (t4, 1), (c, 1)])),
            ([1, 1, 1, 1], mono(f, &[(t1, 1), (t2, 2), (t3, 2), (t4, 1), (b, 1)]).neg()),
            ([1, 2, 1, 1], mono(f, &[(t1, 1), (t2, 2), (t3, 2), (t4, 1), (a, 1)])),
            ([0, 0, 1, 0], mono(f, &[(t2, 1), (t3, 1), (a, 1)])),
            ([0, 1, 1, 0], mono(f, &[(t1, 1), (t2, 1), (t3, 1), (b, 1)]).neg()),
            ([0, 1, 1, 1], mono(f, &[(t1, 1), (t2, 1), (t3, 1), (c, 1)])),
            ([0, 0, 0, 1], mono(f, &[(t2, 1), (a, 1)])),
            ([1, 1, 1, 0], mono(f, &[(t1, 1), (t2, 1), (t3, 2), (t4, 1), (c, 1)]).neg()),
            ([0, 1, 0, 1], mono(f, &[(t1, 1), (t2, 1), (b, 1)])),
            ([0, 1, 0, 0], mono(f, &[(t1, 1), (c, 1)])),
        ];
        let mut u = Mat::identity(f, DIM);
        for (coeffs, val) in atoms.iter() {
            u = u.mul(&self.x_mat(self.ridx(coeffs), val));
        }
        let h_atoms: [([i64; 4], Scalar); 4] = [
            ([1, 0, 0, 0], mono(f, &[(t1, 1), (t2, 2), (t3, 3), (t4, 2)])),
            ([0, 1, 0, 0], mono(f, &[(t1, 2), (t2, 3), (t3, 4), (t4, 2)])),
            ([0, 0, 1, 0], mono(f, &[(t1, 1), (t2, 2), (t3, 3), (t4, 1)])),
            ([0, 0, 0, 1], mono(f, &[(t1, 1), (t2, 2), (t3, 2), (t4, 1)])),
        ];
        let mut h = Mat::identity(f, DIM);
        for (coeffs, val) in h_atoms.iter() {
            h = h.mul(&self.h_coroot_mat(self.ridx(coeffs), val)?);
        }
        Ok(u.mul(&h).mul(&self.w_longest_mat()))
    }
}

/// Characteristic polynomial, ascending coefficients.
pub fn char_poly(m: &Mat) -> Vec<Scalar> {
    m.charpoly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn rep(p: u64) -> D4Rep {
        D4Rep::new(&f(p)).unwrap()
    }

    fn nonzero(field: &Field, rng: &mut StdRng) -> Scalar {
        loop {
            let s = field.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let field = a[0].field();
        let mut out = vec![field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }

    #[test]
    fn constructor_verifies_on_assorted_fields() {
        // The constructor is itself the integer-level cross-check of the
        // pattern table (brackets, sl2 normalizations, η signs); running it
        // over several characteristics exercises the field-dependent parts.
        for p in [2, 3, 5, 7, 101] {
            rep(p);
        }
        D4Rep::new(&Field::rationals()).unwrap();
    }

    #[test]
    fn pattern_matrices_match_fixed_examples() {
        let r = rep(7);
        let a = r.field().from_int(3);
        // e1 − e2 raises coordinate 2 into 1 and 8 into 7 with a sign.
        let m = r.d4_matrix(&[1, 0, 0, 0], &a).unwrap();
        assert!(sc_eq(&m[(1, 0)], &a));
        assert!(sc_eq(&m[(7, 6)], &a.neg()));
        assert!(sc_eq(&m[(0, 0)], &r.field().one()));
        assert!(sc_eq(&m[(2, 1)], &r.field().zero()));
        // e3 + e4 pairs the middle coordinates.
        let m = r.d4_matrix(&[0, 0, 0, 1], &a).unwrap();
        assert!(sc_eq(&m[(4, 2)], &a));
        assert!(sc_eq(&m[(5, 3)], &a.neg()));
        // Zero coefficient is the identity.
        let m = r.d4_matrix(&[0, 1, 0, 0], &r.field().zero()).unwrap();
        assert!(m.is_identity());
        // Non-roots are rejected as usage errors.
        match r.d4_matrix(&[1, 0, 1, 0], &a) {
            Err(ChevError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn commutators_realize_structure_constants() {
        let r = rep(7);
        let field = r.field().clone();
        let rs = r.rs().clone();
        let a = field.from_int(3);
        let b = field.from_int(5);
        for x in 0..rs.n_roots() {
            for y in 0..rs.n_roots() {
                if x == y || rs.neg(x) == y {
                    continue;
                }
                let m = r
                    .x_mat(x, &a)
                    .mul(&r.x_mat(y, &b))
                    .mul(&r.x_mat(x, &a.neg()))
                    .mul(&r.x_mat(y, &b.neg()));
                let expected = match rs.add_roots(x, y) {
                    Some(sum) => {
                        let n = field.from_int(r.ctx.consts.n(x, y));
                        r.x_mat(sum, &n.mul(&a).mul(&b))
                    }
                    None => Mat::identity(&field, DIM),
                };
                assert!(mat_eq(&m, &expected), "commutator mismatch at ({x}, {y})");
                // The engine's normal form must agree with the matrices.
                let g = r
                    .ctx
                    .elt_x(x, &a)
                    .multiply(&r.ctx.elt_x(y, &b))
                    .multiply(&r.ctx.elt_x(x, &a.neg()))
                    .multiply(&r.ctx.elt_x(y, &b.neg()));
                let e = match rs.add_roots(x, y) {
                    Some(sum) => {
                        let n = field.from_int(r.ctx.consts.n(x, y));
                        r.ctx.elt_x(sum, &n.mul(&a).mul(&b))
                    }
                    None => r.ctx.identity(),
                };
                assert!(
                    g.multiply(&e.inverse()).is_identity(),
                    "engine commutator mismatch at ({x}, {y})"
                );
            }
        }
    }

    #[test]
    fn monomial_and_torus_conjugation_match_tables() {
        let r = rep(7);
        let field = r.field().clone();
        let rs = r.rs().clone();
        let v = field.from_int(4);
        for i in 0..4 {
            let s = r.s_mat(i);
            let s_inv = r.s_mat_inv(i);
            assert!(s.mul(&s_inv).is_identity());
            for b in 0..rs.n_roots() {
                let lhs = s.mul(&r.x_mat(b, &v)).mul(&s_inv);
                let img = rs.simple_refl[i][b];
                let sign = field.from_int(r.ctx.consts.eta(i, b) as i64);
                let rhs = r.x_mat(img, &sign.mul(&v));
                assert!(mat_eq(&lhs, &rhs), "monomial conjugation off at ({i}, {b})");
            }
        }
        let t = field.from_int(2);
        for beta in 0..rs.n_roots() {
            let h = r.h_coroot_mat(beta, &t).unwrap();
            let h_inv = r.h_coroot_mat(beta, &t.inv()).unwrap();
            for alpha in 0..rs.n_roots() {
                let lhs = h.mul(&r.x_mat(alpha, &v)).mul(&h_inv);
                let rhs = r.x_mat(alpha, &t.pow(rs.pairing(alpha, beta)).mul(&v));
                assert!(mat_eq(&lhs, &rhs), "torus conjugation off at ({alpha}, {beta})");
            }
        }
    }

    #[test]
    fn torus_conj_diag_scales_all_roots() {
        let r = rep(11);
        let field = r.field().clone();
        let mult = [
            field.from_int(2),
            field.from_int(3),
            field.from_int(1),
            field.from_int(5),
        ];
        let d = r.torus_conj_diag(&mult).unwrap();
        let d_inv = d.inverse().unwrap();
        let c = field.from_int(4);
        for g in 0..r.rs().n_roots() {
            let lhs = d.mul(&r.x_mat(g, &c)).mul(&d_inv);
            let rhs = r.x_mat(g, &r.root_mult(&mult, g).mul(&c));
            assert!(mat_eq(&lhs, &rhs), "diagonal conjugation off at root {g}");
        }
    }

    #[test]
    fn generators_preserve_the_form() {
        let r = rep(5);
        let field = r.field().clone();
        let mut rng = StdRng::seed_from_u64(41);
        for g in 0..r.rs().n_roots() {
            let a = field.random(&mut rng);
            assert!(form_preserved(&r.x_mat(g, &a)));
        }
        for i in 0..4 {
            assert!(form_preserved(&r.s_mat(i)));
        }
        let t = field.from_int(3);
        for g in 0..r.rs().n_roots() {
            assert!(form_preserved(&r.h_coroot_mat(g, &t).unwrap()));
        }
        assert!(form_preserved(&Mat::identity(&field, DIM)));
        // A unipotent matrix off the group must fail.
        let mut bad = Mat::identity(&field, DIM);
        bad[(0, 1)] = field.one();
        assert!(!form_preserved(&bad));
    }

    #[test]
    fn quad_and_bilinear_are_polar_pair() {
        let field = f(13);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let u: Vec<Scalar> = (0..DIM).map(|_| field.random(&mut rng)).collect();
            let v: Vec<Scalar> = (0..DIM).map(|_| field.random(&mut rng)).collect();
            let s: Vec<Scalar> = u.iter().zip(v.iter()).map(|(a, b)| a.add(b)).collect();
            let lhs = quad(&s);
            let rhs = quad(&u).add(&quad(&v)).add(&bilinear(&u, &v));
            assert!(sc_eq(&lhs, &rhs));
        }
    }

    #[test]
    fn peel_round_trips_unipotent_products() {
        let r = rep(7);
        let field = r.field().clone();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..25 {
            let mut m = Mat::identity(&field, DIM);
            for _ in 0..6 {
                let idx = rand::Rng::gen_range(&mut rng, 0..r.rs().n_pos);
                m = m.mul(&r.x_mat(idx, &field.random(&mut rng)));
            }
            let factors = r.peel(&m).unwrap();
            let mut back = Mat::identity(&field, DIM);
            for (idx, c) in &factors {
                back = back.mul(&r.x_mat(*idx, c));
            }
            assert!(mat_eq(&m, &back));
            // Ascending root order in the output.
            for w in factors.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
        // A lowering factor is not a raising product.
        let low = r.x_mat(r.rs().neg(0), &field.one());
        assert!(r.peel(&low).is_err());
    }

    #[test]
    fn borel_split_recovers_torus_and_unipotent_parts() {
        let r = rep(11);
        let field = r.field().clone();
        let u = r
            .x_mat(r.ridx(&[0, 1, 0, 0]), &field.from_int(3))
            .mul(&r.x_mat(r.ridx(&[1, 1, 1, 1]), &field.from_int(5)));
        let h = r.h_coroot_mat(r.ridx(&[0, 0, 0, 1]), &field.from_int(2)).unwrap();
        let m = u.mul(&h);
        let (diag, factors) = r.borel_split(&m).unwrap();
        for k in 0..DIM {
            assert!(sc_eq(&diag[k], &h[(k, k)]));
        }
        assert_eq!(factors.len(), 2);
        let coeffs: Vec<i64> = factors.iter().map(|(i, _)| *i as i64).collect();
        assert_eq!(coeffs, vec![r.ridx(&[0, 1, 0, 0]) as i64, r.ridx(&[1, 1, 1, 1]) as i64]);
    }

    #[test]
    fn theta_reduces_to_weyl_monomial_and_rejects_zero_torus() {
        let r = rep(5);
        let field = r.field().clone();
        let one = field.one();
        let zero = field.zero();
        let t = [one.clone(), one.clone(), one.clone(), one.clone()];
        let theta = r.build_theta_e74(&t, &zero, &zero, &zero).unwrap();
        assert!(mat_eq(&theta, &r.w_longest_mat()));
        let bad = [zero.clone(), one.clone(), one.clone(), one.clone()];
        match r.build_theta_e74(&bad, &zero, &zero, &zero) {
            Err(ChevError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn theta_charpoly_factors_through_the_trace_parameter() {
        // charpoly(θ) = (λ−1)⁴ · p(λ)² with p = λ² − Tλ + 1 and
        // T = t₂a² + t₁t₂b² + t₁c² − t₁t₂abc − 2, for every parameter tuple.
        let r = rep(101);
        let field = r.field().clone();
        let mut rng = StdRng::seed_from_u64(2024);
        for _ in 0..100 {
            let t = [
                nonzero(&field, &mut rng),
                nonzero(&field, &mut rng),
                nonzero(&field, &mut rng),
                nonzero(&field, &mut rng),
            ];
            let a = field.random(&mut rng);
            let b = field.random(&mut rng);
            let c = field.random(&mut rng);
            let theta = r.build_theta_e74(&t, &a, &b, &c).unwrap();
            assert!(form_preserved(&theta));
            let (t1, t2) = (&t[0], &t[1]);
            let trace = mono(&field, &[(t2, 1), (&a, 2)])
                .add(&mono(&field, &[(t1, 1), (t2, 1), (&b, 2)]))
                .add(&mono(&field, &[(t1, 1), (&c, 2)]))
                .sub(&mono(&field, &[(t1, 1), (t2, 1), (&a, 1), (&b, 1), (&c, 1)]))
                .sub(&field.from_int(2));
            let lin4: Vec<Scalar> =
                [1i64, -4, 6, -4, 1].iter().map(|&k| field.from_int(k)).collect();
            let p = vec![field.one(), trace.neg(), field.one()];
            let expected = poly_mul(&lin4, &poly_mul(&p, &p));
            let got = char_poly(&theta);
            assert_eq!(got.len(), expected.len());
            for (x, y) in got.iter().zip(expected.iter()) {
                assert!(sc_eq(x, y), "charpoly coefficient mismatch");
            }
        }
    }

    #[test]
    fn char_poly_on_plain_diagonals() {
        let field = f(7);
        let id = Mat::identity(&field, DIM);
        let got = char_poly(&id);
        // (λ−1)⁸ ascending.
        let want: Vec<Scalar> = [1i64, -8, 28, -56, 70, -56, 28, -8, 1]
            .iter()
            .map(|&k| field.from_int(k))
            .collect();
        for (x, y) in got.iter().zip(want.iter()) {
            assert!(sc_eq(x, y));
        }
        // diag(1,1,z,z,z⁻¹,z⁻¹,1,1) has charpoly (λ−1)⁴(λ−z)²(λ−z⁻¹)².
        let z = field.from_int(3);
        let zi = z.inv();
        let mut d = Mat::identity(&field, DIM);
        d[(2, 2)] = z.clone();
        d[(3, 3)] = z.clone();
        d[(4, 4)] = zi.clone();
        d[(5, 5)] = zi.clone();
        let got = char_poly(&d);
        let lin = |r: &Scalar| vec![r.neg(), field.one()];
        let mut want = vec![field.one()];
        for root in [&field.one(), &field.one(), &field.one(), &field.one(), &z, &z, &zi, &zi] {
            want = poly_mul(&want, &lin(root));
        }
        for (x, y) in got.iter().zip(want.iter()) {
            assert!(sc_eq(x, y));
        }
    }

    #[test]
    fn std_basis_validation_accepts_unit_rows_and_rejects_junk() {
        let field = f(5);
        // The coordinate basis itself is standard: e_i pairs with e_{9−i}.
        let rows: Vec<Vec<Scalar>> = (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        let basis = StdBasis { rows };
        basis.validate().unwrap();
        assert!(basis.matrix().is_identity());
        // Break one pairing.
        let mut rows2: Vec<Vec<Scalar>> = basis.rows.clone();
        rows2[0][7] = field.one(); // now f(v1) = 1·... and (v1, v1) changes
        assert!(StdBasis { rows: rows2 }.validate().is_err());
    }
}
