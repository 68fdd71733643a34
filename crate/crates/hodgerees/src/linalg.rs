//! Matrices and canonical subspaces.
//!
//! Every structure in this crate ultimately reduces to four subspace
//! operations — sum, intersection, conjugation, and dimension — so this module
//! keeps them canonical and cheap to reason about:
//!
//! * A [`Subspace`] is stored as the reduced row-echelon form (RREF) of any
//!   spanning set. RREF is the unique canonical basis of a row space, so on
//!   the exact backend subspace equality is plain entrywise equality.
//! * Quotients are never materialized: every quotient dimension is computed
//!   through `dim((S+T)/T) = dim(S+T) − dim(T)`.
//! * On the floating backend all rank decisions compare pivots against
//!   `τ · max|entry|` of the working matrix, with τ the process-global
//!   tolerance from [`crate::scalar::rank_tolerance`].
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to use from parallel workers.

use std::fmt;

use crate::scalar::{rank_tolerance, Scalar};

/// Dense row-major matrix over a [`Scalar`] backend.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn new(rows: usize, cols: usize, data: Vec<K>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = K::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<K> {
        self.row(r).to_vec()
    }

    /// Stack `self` on top of `other` (equal column counts).
    pub fn vstack(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `self` and `other` side by side (equal row counts).
    pub fn hstack(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn transpose(&self) -> Matrix<K> {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map(&self, f: impl Fn(&K) -> K) -> Matrix<K> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entrywise complex conjugation.
    pub fn conj(&self) -> Matrix<K> {
        self.map(Scalar::conj)
    }

    pub fn mul(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out: Matrix<K> = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a.clone() * other[(k, c)].clone();
                    out[(r, c)] = out[(r, c)].clone() + add;
                }
            }
        }
        out
    }

    /// Kronecker product: block `self[r][c] · other`.
    pub fn kron(&self, other: &Matrix<K>) -> Matrix<K> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = &self[(r1, c1)];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out[(r1 * other.rows + r2, c1 * other.cols + c2)] =
                            a.clone() * other[(r2, c2)].clone();
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_score(&self) -> f64 {
        self.data.iter().map(Scalar::abs_score).fold(0.0, f64::max)
    }

    /// Zero threshold for entries of this matrix: exact backends use exact
    /// zero tests, floating backends use `τ · max|entry|`.
    fn zero_threshold(&self) -> f64 {
        if K::EXACT {
            0.0
        } else {
            rank_tolerance() * self.max_abs_score()
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row-echelon form together with the pivot columns.
    ///
    /// Row space is preserved and the result is idempotent; on the exact
    /// backend it is the unique canonical representative of the row space.
    pub fn rref(&self) -> (Matrix<K>, Vec<usize>) {
        let mut m = self.clone();
        let threshold = m.zero_threshold();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Pick the usable entry of largest magnitude in column c.
            let mut best: Option<(usize, f64)> = None;
            for rr in r..m.rows {
                let e = &m[(rr, c)];
                let usable = if K::EXACT { !e.is_zero() } else { e.abs_score() > threshold };
                if usable {
                    let score = e.abs_score();
                    if best.is_none_or(|(_, s)| score > s) {
                        best = Some((rr, score));
                    }
                }
            }
            let Some((prow, _)) = best else { continue };
            m.swap_rows(r, prow);
            let pivot = m[(r, c)].clone();
            for cc in c..m.cols {
                m[(r, cc)] = m[(r, cc)].clone() / pivot.clone();
            }
            m[(r, c)] = K::one();
            for rr in 0..m.rows {
                if rr == r {
                    continue;
                }
                let factor = m[(rr, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for cc in c..m.cols {
                    let delta = factor.clone() * m[(r, cc)].clone();
                    m[(rr, cc)] = m[(rr, cc)].clone() - delta;
                }
                m[(rr, c)] = K::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Number of nonzero rows of the reduced row-echelon form.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, if it exists (rank decisions follow the
    /// backend policy).
    pub fn inverse(&self) -> Option<Matrix<K>> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let (red, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() == n && pivots.iter().enumerate().all(|(k, &c)| k == c) {
            let mut data = Vec::with_capacity(n * n);
            for r in 0..n {
                data.extend_from_slice(&red.row(r)[n..]);
            }
            Some(Matrix { rows: n, cols: n, data })
        } else {
            None
        }
    }

    /// The submatrix of columns `lo..hi`.
    pub fn column_block(&self, lo: usize, hi: usize) -> Matrix<K> {
        assert!(lo <= hi && hi <= self.cols, "column block out of range");
        let mut out = Matrix::zeros(self.rows, hi - lo);
        for r in 0..self.rows {
            for c in lo..hi {
                out[(r, c - lo)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Ranks of every trailing column block: entry `c` (for `0 ≤ c ≤ cols`)
    /// is the rank of the submatrix of columns `c..cols`. One reduction with
    /// the column order reversed answers all of them (the rank of a column
    /// prefix equals the number of pivots inside it).
    pub fn trailing_rank_profile(&self) -> Vec<usize> {
        let mut rev = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                rev[(r, c)] = self[(r, self.cols - 1 - c)].clone();
            }
        }
        let (_, pivots) = rev.rref();
        let mut orig_is_pivot = vec![false; self.cols];
        for &p in &pivots {
            orig_is_pivot[self.cols - 1 - p] = true;
        }
        let mut out = vec![0usize; self.cols + 1];
        for c in (0..self.cols).rev() {
            out[c] = out[c + 1] + usize::from(orig_is_pivot[c]);
        }
        out
    }

    /// Basis (as rows) of `{x : self · x = 0}`, built from the RREF: one
    /// vector per free column.
    pub fn right_nullspace(&self) -> Matrix<K> {
        let (red, pivots) = self.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![K::zero(); self.cols];
            v[f] = K::one();
            for (r, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -red[(r, f)].clone();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Matrix::zeros(0, self.cols)
        } else {
            Matrix::from_rows(rows)
        }
    }
}

impl<K> std::ops::Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (r, c): (usize, usize)) -> &K {
        &self.data[r * self.cols + c]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut K {
        &mut self.data[r * self.cols + c]
    }
}

impl<K: Scalar> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A linear subspace of `K^ambient`, stored as the RREF basis of its row
/// span. On the exact backend this representative is unique, so equality is
/// entrywise; on the floating backend equality falls back to mutual
/// containment under the global tolerance.
#[derive(Clone, Debug)]
pub struct Subspace<K> {
    ambient: usize,
    basis: Matrix<K>,
}

impl<K: Scalar> Subspace<K> {
    /// Canonicalize the row span of `m` (rows live in `K^ambient`).
    pub fn from_matrix(ambient: usize, m: &Matrix<K>) -> Self {
        assert_eq!(m.cols(), ambient, "subspace row length mismatch");
        let (red, pivots) = m.rref();
        let rank = pivots.len();
        let mut data = Vec::with_capacity(rank * ambient);
        for r in 0..rank {
            data.extend_from_slice(red.row(r));
        }
        Subspace { ambient, basis: Matrix::new(rank, ambient, data) }
    }

    pub fn from_rows(ambient: usize, rows: Vec<Vec<K>>) -> Self {
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_matrix(ambient, &Matrix::from_rows(rows))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero_space(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical (RREF) basis, rows spanning the subspace.
    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    /// Pivot column of each canonical basis row (the position of its leading
    /// entry). Strictly increasing; for nested subspaces `A ⊆ B` the pivot
    /// set of `A` is contained in that of `B`.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let threshold = self.basis.zero_threshold();
        (0..self.basis.rows())
            .map(|r| {
                (0..self.ambient)
                    .find(|&c| !self.basis[(r, c)].is_zero_with(threshold))
                    .expect("canonical basis rows are nonzero")
            })
            .collect()
    }

    /// Sum of subspaces: canonicalized row space of the stacked bases.
    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in sum");
        if self.is_zero_space() {
            return other.clone();
        }
        if other.is_zero_space() {
            return self.clone();
        }
        Subspace::from_matrix(self.ambient, &self.basis.vstack(&other.basis))
    }

    /// Set-theoretic intersection via the Zassenhaus construction: reduce
    /// `[A|A; B|0]` and read the intersection off the rows whose left half
    /// vanished.
    pub fn intersect(&self, other: &Subspace<K>) -> Subspace<K> {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in intersect");
        if self.is_zero_space() || other.is_zero_space() {
            return Subspace::zero(self.ambient);
        }
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Matrix::zeros(other.basis.rows(), self.ambient));
        let big = top.vstack(&bottom);
        let (red, pivots) = big.rref();
        let threshold = if K::EXACT { 0.0 } else { rank_tolerance() * big.max_abs_score() };
        let mut rows = Vec::new();
        for r in 0..pivots.len() {
            let left_zero = (0..self.ambient).all(|c| red[(r, c)].is_zero_with(threshold));
            if left_zero {
                rows.push(red.row(r)[self.ambient..].to_vec());
            }
        }
        Subspace::from_rows(self.ambient, rows)
    }

    /// Dimension of the intersection without materializing it:
    /// `dim(A ∩ B) = dim A + dim B − rank[A; B]`, one rank computation on
    /// the stacked bases — half the columns of the Zassenhaus reduction, so
    /// noticeably cheaper when only the dimension is needed.
    pub fn intersection_dim(&self, other: &Subspace<K>) -> usize {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in intersection_dim");
        if self.is_zero_space() || other.is_zero_space() {
            return 0;
        }
        if self.is_full() {
            return other.dim();
        }
        if other.is_full() {
            return self.dim();
        }
        let sum_rank = self.basis.vstack(&other.basis).rank();
        self.dim() + other.dim() - sum_rank
    }

    /// Entrywise complex conjugation (conjugating an RREF basis keeps it in
    /// RREF, so no re-reduction is needed).
    pub fn conjugate(&self) -> Subspace<K> {
        Subspace { ambient: self.ambient, basis: self.basis.conj() }
    }

    /// Annihilator under the bilinear pairing `⟨x, y⟩ = Σ x_k y_k` (no
    /// conjugation), as a subspace of the dual coordinates.
    ///
    /// The bilinear form is chosen so that annihilators commute with
    /// conjugation, which is what dualizing a structure with a real weight
    /// filtration needs.
    pub fn annihilator(&self) -> Subspace<K> {
        Subspace::from_matrix(self.ambient, &self.basis.right_nullspace())
    }

    /// Block direct sum inside `K^{m+n}`: spanned by `(x | 0)` for basis rows
    /// `x` of `self` and `(0 | y)` for basis rows `y` of `other`.
    pub fn direct_sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let (m, n) = (self.ambient, other.ambient);
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for r in 0..self.basis.rows() {
            let mut row = self.basis.row_vec(r);
            row.extend(std::iter::repeat_n(K::zero(), n));
            rows.push(row);
        }
        for r in 0..other.basis.rows() {
            let mut row = vec![K::zero(); m];
            row.extend(other.basis.row_vec(r));
            rows.push(row);
        }
        Subspace::from_rows(m + n, rows)
    }

    /// Kronecker-product subspace: span of pairwise Kronecker products of
    /// basis rows inside `K^(ambient·other.ambient)`.
    pub fn kron(&self, other: &Subspace<K>) -> Subspace<K> {
        let ambient = self.ambient * other.ambient;
        if self.is_zero_space() || other.is_zero_space() {
            return Subspace::zero(ambient);
        }
        Subspace::from_matrix(ambient, &self.basis.kron(&other.basis))
    }

    /// Image under the linear map with matrix `map` (columns indexed by this
    /// subspace's ambient coordinates): the row span of `basis · mapᵀ`.
    pub fn apply_map(&self, map: &Matrix<K>) -> Subspace<K> {
        assert_eq!(map.cols(), self.ambient, "map domain mismatch");
        Subspace::from_matrix(map.rows(), &self.basis.mul(&map.transpose()))
    }

    /// Reduce `row` against the basis; returns the residual.
    fn reduce_row(&self, row: &[K]) -> Vec<K> {
        let mut v = row.to_vec();
        for r in 0..self.basis.rows() {
            // RREF: the pivot column of row r holds 1; find it.
            let Some(p) = (0..self.ambient).find(|&c| self.basis[(r, c)].is_one()) else {
                continue;
            };
            let factor = v[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (slot, entry) in v.iter_mut().zip(self.basis.row(r)) {
                let delta = factor.clone() * entry.clone();
                *slot = slot.clone() - delta;
            }
        }
        v
    }

    /// Whether a single vector lies in the subspace (tolerance-aware on the
    /// floating backend).
    pub fn contains_row(&self, row: &[K]) -> bool {
        assert_eq!(row.len(), self.ambient, "vector length mismatch");
        let residual = self.reduce_row(row);
        let threshold = if K::EXACT {
            0.0
        } else {
            let scale = row.iter().map(Scalar::abs_score).fold(1.0, f64::max);
            rank_tolerance() * scale
        };
        residual.iter().all(|e| e.is_zero_with(threshold))
    }

    pub fn contains(&self, other: &Subspace<K>) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in contains");
        (0..other.basis.rows()).all(|r| self.contains_row(other.basis.row(r)))
    }
}

impl<K: Scalar> PartialEq for Subspace<K> {
    fn eq(&self, other: &Self) -> bool {
        if self.ambient != other.ambient || self.dim() != other.dim() {
            return false;
        }
        if K::EXACT {
            self.basis == other.basis
        } else {
            self.contains(other) && other.contains(self)
        }
    }
}

impl<K: Scalar> fmt::Display for Subspace<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span of {} row(s) in dim {}:\n{}", self.dim(), self.ambient, self.basis)
    }
}

/// Pivot-finding and elimination threshold used by rank decisions on the
/// floating backend for a given working matrix.
pub fn float_threshold_for<K: Scalar>(m: &Matrix<K>) -> f64 {
    if K::EXACT {
        0.0
    } else {
        rank_tolerance() * m.max_abs_score()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_complex::Complex64;
    use num_traits::Zero;

    type Qi = GaussianRational;

    fn q(n: i64, d: i64) -> Qi {
        Qi::from_ratio(n, d)
    }

    fn qi(re: i64, im: i64) -> Qi {
        Qi::from_parts(re, 1, im, 1)
    }

    fn mat(rows: Vec<Vec<Qi>>) -> Matrix<Qi> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn rref_permutation_of_identity() {
        let m = mat(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let (red, pivots) = m.rref();
        assert_eq!(red, Matrix::identity(2));
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn rref_dependent_gaussian_rows() {
        // second row = i · first row
        let m = mat(vec![vec![q(1, 1), qi(0, 1)], vec![qi(0, 1), q(-1, 1)]]);
        let (red, pivots) = m.rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(red.row(0), &[q(1, 1), qi(0, 1)][..]);
        assert!(red.row(1).iter().all(Zero::is_zero));
    }

    #[test]
    fn rref_scaling_normalization() {
        let m = mat(vec![vec![q(2, 1), q(4, 1)]]);
        let (red, _) = m.rref();
        assert_eq!(red.row(0), &[q(1, 1), q(2, 1)][..]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<Qi>::zeros(2, 2).rank(), 0);
        assert_eq!(Matrix::<Qi>::identity(3).rank(), 3);
        // stacked [A; conj A] with A = [(2πi, i·t)], t real: conj row = −row
        let t = 0.7350;
        let a = Matrix::from_rows(vec![vec![
            Complex64::new(0.0, 2.0 * std::f64::consts::PI),
            Complex64::new(0.0, t),
        ]]);
        let stacked = a.vstack(&a.conj());
        assert_eq!(stacked.rank(), 1);
    }

    #[test]
    fn rref_idempotent() {
        let m = mat(vec![
            vec![q(1, 2), q(3, 1), q(0, 1)],
            vec![q(1, 1), q(6, 1), q(1, 1)],
            vec![q(3, 2), q(9, 1), q(1, 1)],
        ]);
        let (red, _) = m.rref();
        let (red2, _) = red.rref();
        assert_eq!(red, red2);
    }

    #[test]
    fn subspace_sum_examples() {
        let e1 = Subspace::from_rows(2, vec![vec![q(1, 1), q(0, 1)]]);
        let e2 = Subspace::from_rows(2, vec![vec![q(0, 1), q(1, 1)]]);
        assert_eq!(e1.sum(&e2), Subspace::full(2));
        assert_eq!(e1.sum(&e1), e1);

        let a = Subspace::from_rows(3, vec![vec![q(1, 1), qi(0, 1), q(0, 1)]]);
        let b = Subspace::from_rows(3, vec![vec![q(1, 1), qi(0, -1), q(0, 1)]]);
        let expect = Subspace::from_rows(
            3,
            vec![vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(0, 1)]],
        );
        assert_eq!(a.sum(&b), expect);
    }

    #[test]
    fn subspace_intersect_examples() {
        let e1 = Subspace::from_rows(2, vec![vec![q(1, 1), q(0, 1)]]);
        let e2 = Subspace::from_rows(2, vec![vec![q(0, 1), q(1, 1)]]);
        assert!(e1.intersect(&e2).is_zero_space());
        assert_eq!(e1.intersect(&e1), e1);

        let a = Subspace::from_rows(
            3,
            vec![vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(0, 1)]],
        );
        let b = Subspace::from_rows(
            3,
            vec![vec![q(0, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(0, 1), q(1, 1)]],
        );
        let expect = Subspace::from_rows(3, vec![vec![q(0, 1), q(1, 1), q(0, 1)]]);
        assert_eq!(a.intersect(&b), expect);
    }

    #[test]
    fn subspace_conjugate_examples() {
        let a = Subspace::from_rows(2, vec![vec![q(1, 1), qi(0, 1)]]);
        let expect = Subspace::from_rows(2, vec![vec![q(1, 1), qi(0, -1)]]);
        assert_eq!(a.conjugate(), expect);

        let real = Subspace::from_rows(2, vec![vec![q(1, 1), q(2, 1)]]);
        assert_eq!(real.conjugate(), real);
        assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn dim_formula() {
        let a = Subspace::from_rows(
            4,
            vec![
                vec![q(1, 1), q(0, 1), q(2, 1), q(1, 1)],
                vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)],
            ],
        );
        let b = Subspace::from_rows(
            4,
            vec![
                vec![q(1, 1), q(1, 1), q(3, 1), q(1, 1)],
                vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
            ],
        );
        assert_eq!(
            a.intersect(&b).dim() + a.sum(&b).dim(),
            a.dim() + b.dim(),
            "modular dimension formula"
        );
    }

    #[test]
    fn rref_canonicity_same_space() {
        // Two generating sets of the same plane.
        let g1 = Subspace::from_rows(
            3,
            vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(0, 1), q(1, 1)]],
        );
        let g2 = Subspace::from_rows(
            3,
            vec![vec![q(3, 1), q(2, 1), q(4, 1)], vec![q(1, 1), q(-2, 1), q(-2, 1)]],
        );
        assert_eq!(g1, g2);
        assert_eq!(g1.basis(), g2.basis());
    }

    #[test]
    fn annihilator_bilinear() {
        // ⟨(1,i), (1,i)⟩ = 1 + i² = 0: the line span{(1,i)} annihilates itself.
        let a = Subspace::from_rows(2, vec![vec![q(1, 1), qi(0, 1)]]);
        assert_eq!(a.annihilator(), a);
        // Ann commutes with conjugation because the pairing is bilinear.
        assert_eq!(a.conjugate().annihilator(), a.annihilator().conjugate());
        // dim Ann = ambient − dim
        let b = Subspace::from_rows(3, vec![vec![q(1, 1), q(2, 1), q(0, 1)]]);
        assert_eq!(b.annihilator().dim(), 2);
        assert_eq!(b.annihilator().annihilator(), b);
    }

    #[test]
    fn kron_and_apply() {
        let a = Subspace::from_rows(2, vec![vec![q(1, 1), q(1, 1)]]);
        let b = Subspace::from_rows(2, vec![vec![q(1, 1), q(-1, 1)]]);
        let k = a.kron(&b);
        assert_eq!(k.ambient_dim(), 4);
        assert_eq!(k.dim(), 1);
        assert!(k.contains_row(&[q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)]));

        let theta = mat(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let image = a.apply_map(&theta);
        assert_eq!(image, a, "swap map fixes the diagonal line");
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(vec![
            vec![q(1, 1), q(2, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(4, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1)],
        ]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert_eq!(inv.mul(&m), Matrix::identity(3));
        let singular = mat(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn float_rank_tolerance() {
        // A nearly dependent pair of rows: rank 1 at default tolerance.
        let eps = 1e-13;
        let m = Matrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0 + eps, 0.0)],
        ]);
        assert_eq!(m.rank(), 1);
        // ... but rank 2 well above the tolerance.
        let m2 = Matrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.1, 0.0)],
        ]);
        assert_eq!(m2.rank(), 2);
    }
}
