//! Dense matrices over an exact field, plus small integer matrices.
//!
//! Everything here is exact: entries are [`Scalar`]s and the characteristic
//! polynomial comes from the Berkowitz algorithm, which is division-free and
//! therefore valid over any commutative ring (in particular it never trips a
//! budget error by inverting a polynomial denominator mid-computation).

use crate::field::{Field, Scalar};

/// Row-major dense matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub n_rows: usize,
    pub n_cols: usize,
    pub entries: Vec<Scalar>,
}

impl Mat {
    pub fn zero(field: &Field, n_rows: usize, n_cols: usize) -> Mat {
        Mat {
            n_rows,
            n_cols,
            entries: vec![field.zero(); n_rows * n_cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Build from integer entries, mapping them into `field`.
    pub fn from_int_rows(field: &Field, rows: &[Vec<i64>]) -> Mat {
        let n_rows = rows.len();
        let n_cols = if n_rows == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            assert_eq!(row.len(), n_cols, "ragged rows");
            for &v in row {
                entries.push(field.from_int(v));
            }
        }
        Mat { n_rows, n_cols, entries }
    }

    pub fn is_identity(&self) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let e = &self[(i, j)];
                if i == j {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n_cols, rhs.n_rows, "dimension mismatch");
        let field = self.entries[0].field();
        let mut out = Mat::zero(&field, self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    let cur = out[(i, j)].add(&prod);
                    out[(i, j)] = cur;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let field = self.entries[0].field();
        let mut out = Mat::zero(&field, self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.mul(c);
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        let mut out = self.clone();
        for (e, r) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *e = e.add(r);
        }
        out
    }

    /// Row vector times matrix (the representations in this crate act on the
    /// right, matching how the group acts on row coordinate vectors).
    pub fn row_apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.n_rows);
        let field = self.entries[0].field();
        let mut out = vec![field.zero(); self.n_cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.n_cols {
                let e = &self[(i, j)];
                if e.is_zero() {
                    continue;
                }
                out[j] = out[j].add(&vi.mul(e));
            }
        }
        out
    }

    /// Characteristic polynomial coefficients `[c_0, ..., c_n]` of
    /// `det(λI − M) = Σ c_k λ^k` (monic: `c_n = 1`), by the Berkowitz
    /// division-free algorithm.
    ///
    /// Berkowitz computes, for each leading principal minor size, a Toeplitz
    /// vector built from the principal entry, the row/column slices and powers
    /// of the trailing principal submatrix; composing the Toeplitz products
    /// yields the characteristic polynomial with no divisions.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert_eq!(self.n_rows, self.n_cols, "charpoly needs a square matrix");
        let n = self.n_rows;
        let field = if self.entries.is_empty() {
            panic!("charpoly of 0x0 matrix");
        } else {
            self.entries[0].field()
        };
        // Polynomial accumulator, lowest degree last (Berkowitz's natural
        // order: index 0 is the leading coefficient).
        let mut poly = vec![field.one()];
        for k in 0..n {
            // Principal (k+1)x(k+1) block data: a = M[k][k], row = M[k][0..k],
            // col = M[0..k][k], sub = M[0..k][0..k].
            let a = self[(k, k)].clone();
            // Toeplitz column: t[0] = 1, t[1] = -a, t[j+2] = -(row · sub^j · col).
            let mut t = Vec::with_capacity(k + 3);
            t.push(field.one());
            t.push(a.neg());
            if k > 0 {
                let row: Vec<Scalar> = (0..k).map(|j| self[(k, j)].clone()).collect();
                let col: Vec<Scalar> = (0..k).map(|i| self[(i, k)].clone()).collect();
                // cur = sub^j · col, iterated.
                let mut cur = col.clone();
                for _ in 0..k {
                    let dot = dot(&row, &cur, &field);
                    t.push(dot.neg());
                    // cur <- sub · cur
                    let mut next = vec![field.zero(); k];
                    for i in 0..k {
                        for j in 0..k {
                            let e = &self[(i, j)];
                            if e.is_zero() || cur[j].is_zero() {
                                continue;
                            }
                            next[i] = next[i].add(&e.mul(&cur[j]));
                        }
                    }
                    cur = next;
                }
            }
            // poly <- Toeplitz(t) * poly  (polynomial product truncated to the
            // right length: new degree is old + 1).
            let mut next = vec![field.zero(); poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                for (j, tv) in t.iter().enumerate() {
                    if i + j >= next.len() || tv.is_zero() {
                        continue;
                    }
                    next[i + j] = next[i + j].add(&p.mul(tv));
                }
            }
            poly = next;
        }
        // poly[0] is the λ^n coefficient; flip to ascending order.
        poly.reverse();
        poly
    }

    /// Determinant, read off the characteristic polynomial:
    /// `det M = (−1)^n · c_0`.
    pub fn det(&self) -> Scalar {
        let cp = self.charpoly();
        let c0 = cp[0].clone();
        if self.n_rows % 2 == 1 {
            c0.neg()
        } else {
            c0
        }
    }

    fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.n_rows)
            .map(|i| (0..self.n_cols).map(|j| self[(i, j)].clone()).collect())
            .collect()
    }

    /// Reduced row-echelon form in place; returns the pivot column of each
    /// pivot row, in increasing order.
    fn rref_in_place(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
        let n_rows = rows.len();
        let n_cols = if n_rows == 0 { 0 } else { rows[0].len() };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n_cols {
            if r == n_rows {
                break;
            }
            let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].inv();
            for j in c..n_cols {
                rows[r][j] = rows[r][j].mul(&inv);
            }
            for i in 0..n_rows {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in c..n_cols {
                        let t = rows[r][j].mul(&f);
                        rows[i][j] = rows[i][j].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank over the exact field.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows_vec();
        Self::rref_in_place(&mut rows).len()
    }

    /// Inverse by Gauss–Jordan elimination on `[M | I]`; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.n_rows, self.n_cols, "inverse of a non-square matrix");
        let n = self.n_rows;
        let field = self.entries[0].field();
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<Scalar> = (0..n).map(|j| self[(i, j)].clone()).collect();
                row.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
                row
            })
            .collect();
        let pivots = Self::rref_in_place(&mut rows);
        // Invertible iff every pivot lands in the left block, one per column.
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Mat::zero(&field, n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = rows[i][n + j].clone();
            }
        }
        Some(out)
    }

    /// Basis of the right null space `{x : M·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let field = self.entries[0].field();
        let mut rows = self.rows_vec();
        let pivots = Self::rref_in_place(&mut rows);
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.n_cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); self.n_cols];
            v[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[r][free].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left null space `{v : v·M = 0}`. The group acts on row
    /// vectors throughout, so eigenvectors live on this side: a λ-eigenvector
    /// of `g` is a left-kernel element of `g − λ·I`.
    pub fn left_kernel(&self) -> Vec<Vec<Scalar>> {
        self.transpose().kernel()
    }

    /// One solution of `M·x = b` (free coordinates zero), or `None` when the
    /// system is inconsistent. Callers that need the solution to satisfy
    /// extra constraints verify afterwards rather than relying on uniqueness.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.n_rows, "right-hand side length mismatch");
        let field = self.entries[0].field();
        let mut rows: Vec<Vec<Scalar>> = (0..self.n_rows)
            .map(|i| {
                let mut row: Vec<Scalar> =
                    (0..self.n_cols).map(|j| self[(i, j)].clone()).collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        let pivots = Self::rref_in_place(&mut rows);
        // A pivot in the appended column marks an inconsistent system.
        if pivots.last() == Some(&self.n_cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.n_cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rows[r][self.n_cols].clone();
        }
        Some(x)
    }
}

fn dot(a: &[Scalar], b: &[Scalar], field: &Field) -> Scalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b.iter()) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add(&x.mul(y));
    }
    acc
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.entries[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.entries[i * self.n_cols + j]
    }
}

/// Square integer matrix, used for the adjoint representation's structure
/// data where all entries are small integers.
#[derive(Clone, Debug, PartialEq)]
pub struct IMat {
    pub n: usize,
    pub entries: Vec<i64>,
}

impl IMat {
    pub fn zero(n: usize) -> IMat {
        IMat { n, entries: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zero(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = IMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = rhs[(k, j)];
                    if b == 0 {
                        continue;
                    }
                    out[(i, j)] += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, r) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *e += r;
        }
        out
    }

    pub fn scale(&self, c: i64) -> IMat {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= c;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.entries[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion_matrix() {
        // Companion matrix of λ^3 - 2λ + 5 over Q.
        let field = Field::rationals();
        let m = Mat::from_int_rows(&field, &[
            vec![0, 0, -5],
            vec![1, 0, 2],
            vec![0, 1, 0],
        ]);
        let cp = m.charpoly();
        let want: Vec<i64> = vec![5, -2, 0, 1];
        assert_eq!(cp.len(), 4);
        for (c, w) in cp.iter().zip(want) {
            assert_eq!(*c, field.from_int(w));
        }
    }

    #[test]
    fn charpoly_matches_det_and_trace_mod_p() {
        let field = Field::prime(101).unwrap();
        let m = Mat::from_int_rows(&field, &[
            vec![3, 1, 4],
            vec![1, 5, 9],
            vec![2, 6, 5],
        ]);
        let cp = m.charpoly();
        // λ^3 − tr·λ² + (sum of principal 2-minors)·λ − det.
        assert!(cp[3].is_one());
        assert_eq!(cp[2], field.from_int(-(3 + 5 + 5)));
        // det by cofactor: 3(25-54) - 1(5-18) + 4(6-10) = -87 + 13 - 16 = -90.
        assert_eq!(cp[0], field.from_int(90));
        assert_eq!(m.det(), field.from_int(-90));
    }

    #[test]
    fn row_apply_matches_mul() {
        let field = Field::prime(7).unwrap();
        let m = Mat::from_int_rows(&field, &[vec![1, 2], vec![3, 4]]);
        let v = vec![field.from_int(5), field.from_int(6)];
        let out = m.row_apply(&v);
        assert_eq!(out[0], field.from_int(5 + 18));
        assert_eq!(out[1], field.from_int(10 + 24));
    }

    #[test]
    fn inverse_round_trip_and_singular() {
        let field = Field::prime(13).unwrap();
        let m = Mat::from_int_rows(&field, &[
            vec![2, 3, 1],
            vec![0, 1, 4],
            vec![5, 0, 6],
        ]);
        let inv = m.inverse().expect("unit determinant mod 13");
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());

        let sing = Mat::from_int_rows(&field, &[
            vec![1, 2, 3],
            vec![2, 4, 6],
            vec![0, 1, 1],
        ]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.rank(), 2);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let field = Field::prime(11).unwrap();
        let m = Mat::from_int_rows(&field, &[
            vec![1, 2, 3, 4],
            vec![2, 4, 6, 1],
        ]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for i in 0..m.n_rows {
                let mut acc = field.zero();
                for j in 0..m.n_cols {
                    acc = acc.add(&m[(i, j)].mul(&v[j]));
                }
                assert!(acc.is_zero());
            }
        }
        let lk = m.left_kernel();
        assert!(lk.is_empty(), "rows are independent");
    }

    #[test]
    fn solve_particular_and_inconsistent() {
        let field = Field::rationals();
        // Overdetermined but consistent: three equations, two unknowns.
        let m = Mat::from_int_rows(&field, &[
            vec![1, 1],
            vec![1, -1],
            vec![2, 0],
        ]);
        let b = vec![field.from_int(3), field.from_int(1), field.from_int(4)];
        let x = m.solve(&b).expect("consistent");
        assert_eq!(x[0], field.from_int(2));
        assert_eq!(x[1], field.from_int(1));

        let bad = vec![field.from_int(3), field.from_int(1), field.from_int(5)];
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn imat_powers() {
        let mut nilp = IMat::zero(3);
        nilp[(0, 1)] = 1;
        nilp[(1, 2)] = 1;
        let sq = nilp.mul(&nilp);
        assert_eq!(sq[(0, 2)], 1);
        assert!(sq.mul(&nilp) == IMat::zero(3));
    }
}
