//! Sparse exact matrices and deterministic echelon-form linear algebra.
//!
//! Matrices store only nonzero entries, column-major, each column sorted by
//! row. Pivoting is deterministic (first nonzero in row-major order) so every
//! kernel/image/quotient basis is reproducible across runs. A dense fallback
//! kicks in below 64x64 where the sparse bookkeeping is not worth it.

use crate::error::{Error, Result};
use crate::field::{Scalar, ScalarField};

pub const DENSE_CUTOFF: usize = 64;

/// A sparse vector: sorted `(index, nonzero scalar)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Adds `c * v` into the sparse accumulator `acc`.
pub fn sparse_axpy(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    let mut out: SparseVec = Vec::with_capacity(acc.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < v.len() {
        if j >= v.len() || (i < acc.len() && acc[i].0 < v[j].0) {
            out.push(acc[i].clone());
            i += 1;
        } else if i >= acc.len() || v[j].0 < acc[i].0 {
            out.push((v[j].0, c.mul(&v[j].1)));
            if out.last().unwrap().1.is_zero() {
                out.pop();
            }
            j += 1;
        } else {
            let s = acc[i].1.add(&c.mul(&v[j].1));
            if !s.is_zero() {
                out.push((acc[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    *acc = out;
}

pub fn sparse_scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, s)| (*i, c.mul(s))).collect()
}

pub fn sparse_get(v: &SparseVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |(j, _)| *j)
        .ok()
        .map(|k| &v[k].1)
}

/// A sparse matrix over one [`ScalarField`]. Every stored entry is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: ScalarField,
    rows: usize,
    cols: usize,
    cols_data: Vec<SparseVec>,
}

impl Matrix {
    pub fn zero(field: ScalarField, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            cols_data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: ScalarField, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.cols_data[i].push((i, field.one()));
        }
        m
    }

    pub fn from_cols(field: ScalarField, rows: usize, cols: Vec<SparseVec>) -> Matrix {
        let m = Matrix {
            field,
            rows,
            cols: cols.len(),
            cols_data: cols,
        };
        debug_assert!(m
            .cols_data
            .iter()
            .all(|c| c.iter().all(|(i, s)| *i < m.rows && !s.is_zero())));
        m
    }

    /// Builds from `(row, col, scalar)` triplets, accumulating duplicates.
    pub fn from_triplets(
        field: ScalarField,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Matrix> {
        let mut m = Matrix::zero(field, rows, cols);
        for (r, c, s) in triplets {
            m.add_entry(r, c, &s)?;
        }
        Ok(m)
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols_data[j]
    }

    pub fn entry_count(&self) -> usize {
        self.cols_data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.cols_data.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        sparse_get(&self.cols_data[c], r)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_entry(&mut self, r: usize, c: usize, s: &Scalar) -> Result<()> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::DimensionMismatch {
                context: format!("entry ({r},{c}) out of range"),
                expected: self.rows * self.cols,
                found: r * c,
            });
        }
        if s.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: s.field(),
            });
        }
        if s.is_zero() {
            return Ok(());
        }
        let col = &mut self.cols_data[c];
        match col.binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => {
                let v = col[k].1.add(s);
                if v.is_zero() {
                    col.remove(k);
                } else {
                    col[k].1 = v;
                }
            }
            Err(k) => col.insert(k, (r, s.clone())),
        }
        Ok(())
    }

    pub fn set_col(&mut self, c: usize, v: SparseVec) {
        debug_assert!(v.iter().all(|(i, s)| *i < self.rows && !s.is_zero()));
        self.cols_data[c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, col) in self.cols_data.iter().enumerate() {
            for (i, s) in col {
                cols[*i].push((j, s.clone()));
            }
        }
        Matrix::from_cols(self.field, self.cols, cols)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product".into(),
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut cols = Vec::with_capacity(other.cols);
        for j in 0..other.cols {
            cols.push(self.apply(&other.cols_data[j]));
        }
        Ok(Matrix::from_cols(self.field, self.rows, cols))
    }

    /// Applies the matrix to a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            sparse_axpy(&mut acc, c, &self.cols_data[*j]);
        }
        acc
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let one = self.field.one();
        let mut out = self.clone();
        for j in 0..self.cols {
            let mut col = std::mem::take(&mut out.cols_data[j]);
            sparse_axpy(&mut col, &one, &other.cols_data[j]);
            out.cols_data[j] = col;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let minus_one = self.field.one().neg();
        let mut out = self.clone();
        for j in 0..self.cols {
            let mut col = std::mem::take(&mut out.cols_data[j]);
            sparse_axpy(&mut col, &minus_one, &other.cols_data[j]);
            out.cols_data[j] = col;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let cols = self
            .cols_data
            .iter()
            .map(|col| sparse_scale(col, c))
            .collect();
        Matrix::from_cols(self.field, self.rows, cols)
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix sum".into(),
                expected: self.rows * self.cols + 1,
                found: other.rows * other.cols + 1,
            });
        }
        Ok(())
    }

    /// Kronecker product with row/col index `(i_a * b.rows + i_b)` ordering,
    /// which is strictly associative on nested products.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zero(self.field, rows, cols);
        for (ja, ca) in self.cols_data.iter().enumerate() {
            for (jb, cb) in other.cols_data.iter().enumerate() {
                let col = &mut out.cols_data[ja * other.cols + jb];
                for (ia, sa) in ca {
                    for (ib, sb) in cb {
                        col.push((ia * other.rows + ib, sa.mul(sb)));
                    }
                }
                col.sort_by_key(|(i, _)| *i);
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "hstack".into(),
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut cols = self.cols_data.clone();
        cols.extend(other.cols_data.iter().cloned());
        Ok(Matrix::from_cols(self.field, self.rows, cols))
    }

    /// Dense view for small matrices (row-major).
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (j, col) in self.cols_data.iter().enumerate() {
            for (i, s) in col {
                d[*i][j] = s.clone();
            }
        }
        d
    }
}

/// A row-echelon accumulator: reduced rows keyed by pivot column. Rows are
/// inserted one at a time; each insertion fully reduces against current
/// pivots, then back-substitutes so the basis stays in reduced form. An
/// occupancy index (column -> pivots of rows containing it) keeps the
/// back-substitution proportional to actual fill.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    /// pivot column -> fully reduced row with a 1 at the pivot.
    rows: std::collections::BTreeMap<usize, SparseVec>,
    /// column -> pivots of the rows whose support contains that column.
    occupancy: std::collections::BTreeMap<usize, std::collections::BTreeSet<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon {
            ncols,
            rows: std::collections::BTreeMap::new(),
            occupancy: std::collections::BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().cloned().collect()
    }

    pub fn rows(&self) -> Vec<(usize, SparseVec)> {
        self.rows.iter().map(|(p, r)| (*p, r.clone())).collect()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    /// Reduces `v` against the current rows without inserting; clears every
    /// pivot position.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut i = 0;
        while i < v.len() {
            let col = v[i].0;
            match self.rows.get(&col) {
                Some(row) => {
                    let c = v[i].1.neg();
                    let row = row.clone();
                    sparse_axpy(&mut v, &c, &row);
                    // v[i] vanished; do not advance.
                }
                None => i += 1,
            }
        }
        v
    }

    fn track(&mut self, pivot: usize, row: &SparseVec) {
        for (c, _) in row {
            self.occupancy.entry(*c).or_default().insert(pivot);
        }
    }

    fn untrack(&mut self, pivot: usize, row: &SparseVec) {
        for (c, _) in row {
            if let Some(set) = self.occupancy.get_mut(c) {
                set.remove(&pivot);
                if set.is_empty() {
                    self.occupancy.remove(c);
                }
            }
        }
    }

    /// Inserts a vector; returns true if it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let lead = v[0].0;
        let inv = v[0].1.inv();
        v = sparse_scale(&v, &inv);
        // Back-substitute only into rows whose support meets the new pivot.
        let holders: Vec<usize> = self
            .occupancy
            .get(&lead)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default();
        for p in holders {
            let mut row = self.rows.remove(&p).expect("occupancy points at a row");
            self.untrack(p, &row);
            if let Some(c) = sparse_get(&row, lead).cloned() {
                let c = c.neg();
                sparse_axpy(&mut row, &c, &v);
            }
            self.track(p, &row);
            self.rows.insert(p, row);
        }
        self.track(lead, &v);
        self.rows.insert(lead, v);
        true
    }

    /// The columns that are not pivots, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let pivots = self.pivots();
        let mut free = Vec::with_capacity(self.ncols - pivots.len());
        let mut pi = 0;
        for c in 0..self.ncols {
            if pi < pivots.len() && pivots[pi] == c {
                pi += 1;
            } else {
                free.push(c);
            }
        }
        free
    }
}

/// Rank plus reduced-echelon kernel and image bases.
pub struct RankDecomposition {
    pub rank: usize,
    /// Kernel basis: canonical vectors in `k^cols`, one per free column.
    pub kernel: Vec<SparseVec>,
    /// Image basis: reduced column-echelon basis of the column space.
    pub image: Vec<SparseVec>,
}

/// Row-echelon data of `m` seen as a list of rows.
fn echelon_of_rows(m: &Matrix) -> Echelon {
    let mut ech = Echelon::new(m.cols());
    let t = m.transpose();
    for i in 0..t.cols() {
        ech.insert(t.col(i).clone());
    }
    ech
}

/// Dense reduced row echelon for small matrices: rows as scalar vectors,
/// first-nonzero pivoting, full back-substitution.
fn dense_rref(m: &Matrix) -> (usize, Vec<usize>, Vec<Vec<Scalar>>) {
    let field = m.field();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].inv();
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = a[r][k].mul(&f);
                    a[i][k] = a[i][k].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let _ = field;
    (r, pivots, a)
}

/// Rank, kernel basis and image basis of `m`, all echelon-canonical. Small
/// matrices take the dense route; large ones stay sparse.
pub fn rank_kernel_image(m: &Matrix) -> RankDecomposition {
    if m.rows() < DENSE_CUTOFF && m.cols() < DENSE_CUTOFF {
        return dense_rank_kernel_image(m);
    }
    // Row echelon of m gives rank, pivot columns and the kernel.
    let ech = echelon_of_rows(m);
    let rank = ech.rank();
    let one = m.field().one();
    let mut kernel = Vec::new();
    let ech_rows = ech.rows();
    for f in ech.free_columns() {
        // x_f = 1, x_{pivot of row k} = -row_k[f].
        let mut v: SparseVec = vec![(f, one.clone())];
        for (p, row) in &ech_rows {
            if let Some(c) = sparse_get(row, f) {
                v.push((*p, c.neg()));
            }
        }
        v.sort_by_key(|(i, _)| *i);
        v.retain(|(_, s)| !s.is_zero());
        kernel.push(v);
    }
    // Column echelon (= row echelon of the transpose) gives the image basis.
    let mut img = Echelon::new(m.rows());
    for j in 0..m.cols() {
        img.insert(m.col(j).clone());
    }
    let image = img.rows().into_iter().map(|(_, r)| r).collect();
    RankDecomposition {
        rank,
        kernel,
        image,
    }
}

fn dense_rank_kernel_image(m: &Matrix) -> RankDecomposition {
    let field = m.field();
    let (rank, pivots, rref) = dense_rref(m);
    let one = field.one();
    let mut kernel = Vec::new();
    let mut pi = 0usize;
    for c in 0..m.cols() {
        if pi < pivots.len() && pivots[pi] == c {
            pi += 1;
            continue;
        }
        let mut v: SparseVec = vec![(c, one.clone())];
        for (row, p) in pivots.iter().enumerate() {
            if !rref[row][c].is_zero() {
                v.push((*p, rref[row][c].neg()));
            }
        }
        v.sort_by_key(|(i, _)| *i);
        kernel.push(v);
    }
    let (_, _, trref) = dense_rref(&m.transpose());
    let image = trref
        .iter()
        .take(rank)
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect()
        })
        .collect();
    RankDecomposition {
        rank,
        kernel,
        image,
    }
}

/// Rank only, via incremental echelon over whichever orientation inserts
/// fewer vectors.
pub fn rank(m: &Matrix) -> usize {
    if m.cols() <= m.rows() {
        let mut ech = Echelon::new(m.rows());
        let mut r = 0;
        for j in 0..m.cols() {
            if ech.insert(m.col(j).clone()) {
                r += 1;
                if r == m.rows() {
                    break;
                }
            }
        }
        r
    } else {
        rank(&m.transpose())
    }
}

/// Solves `m x = b`; returns the canonical echelon solution (free variables
/// zero) or `None` when inconsistent.
pub fn solve_linear(m: &Matrix, b: &SparseVec) -> Result<Option<SparseVec>> {
    if let Some((i, _)) = b.last() {
        if *i >= m.rows() {
            return Err(Error::DimensionMismatch {
                context: "solve_linear right-hand side".into(),
                expected: m.rows(),
                found: i + 1,
            });
        }
    }
    if let Some((_, s)) = b.first() {
        if s.field() != m.field() {
            return Err(Error::FieldMismatch {
                expected: m.field(),
                found: s.field(),
            });
        }
    }
    // Row-reduce the augmented matrix [m | b].
    let aug_col = m.cols();
    let mut ech = Echelon::new(m.cols() + 1);
    let t = m.transpose();
    for i in 0..m.rows() {
        let mut row: SparseVec = t.col(i).clone();
        if let Some(s) = sparse_get(b, i) {
            row.push((aug_col, s.clone()));
        }
        ech.insert(row);
    }
    // Inconsistent iff some pivot sits in the augmented column.
    if ech.pivots().contains(&aug_col) {
        return Ok(None);
    }
    let mut x: SparseVec = Vec::new();
    for (p, row) in ech.rows() {
        if let Some(c) = sparse_get(&row, aug_col) {
            x.push((p, c.clone()));
        }
    }
    x.sort_by_key(|(i, _)| *i);
    Ok(Some(x))
}

/// Inverse of a square matrix, if it exists: row-reduce `[m | I]`.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let n = m.rows();
    let one = m.field().one();
    let mut ech = Echelon::new(2 * n);
    let t = m.transpose();
    for i in 0..n {
        let mut row: SparseVec = t.col(i).clone();
        row.push((n + i, one.clone()));
        ech.insert(row);
    }
    let pivots = ech.pivots();
    if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, p)| *p != i) {
        return None;
    }
    let mut inv = Matrix::zero(m.field(), n, n);
    for (p, row) in ech.rows() {
        if p >= n {
            return None;
        }
        for (c, s) in &row {
            if *c >= n {
                inv.add_entry(p, c - n, s).ok()?;
            }
        }
    }
    Some(inv)
}

/// Projection/section pair presenting `k^ambient / span(subspace)`.
pub struct QuotientData {
    pub dim: usize,
    /// `dim x ambient`; kernel = span(subspace).
    pub projection: Matrix,
    /// `ambient x dim`; `projection * lift = id`.
    pub lift: Matrix,
    /// Ambient indices whose classes form the quotient basis.
    pub kept: Vec<usize>,
}

/// Canonical complement of a spanned subspace: the quotient is identified
/// with the coordinates at non-pivot rows of the column-echelon form.
pub fn quotient_basis(
    field: ScalarField,
    ambient_dim: usize,
    subspace: &[SparseVec],
) -> Result<QuotientData> {
    let mut ech = Echelon::new(ambient_dim);
    for v in subspace {
        if let Some((i, _)) = v.last() {
            if *i >= ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "quotient_basis generator".into(),
                    expected: ambient_dim,
                    found: i + 1,
                });
            }
        }
        if let Some((_, s)) = v.first() {
            if s.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: s.field(),
                });
            }
        }
        ech.insert(v.clone());
    }
    let kept = ech.free_columns();
    let dim = kept.len();
    let one = field.one();
    // lift: e_{kept[k]} as the k-th column.
    let mut lift = Matrix::zero(field, ambient_dim, dim);
    for (k, f) in kept.iter().enumerate() {
        lift.cols_data[k].push((*f, one.clone()));
    }
    // projection(x) = (x - S * x_P) restricted to kept rows, where S is the
    // reduced echelon basis of the subspace with pivot rows P.
    let mut projection = Matrix::zero(field, dim, ambient_dim);
    let kept_pos: std::collections::BTreeMap<usize, usize> =
        kept.iter().enumerate().map(|(k, f)| (*f, k)).collect();
    for (k, f) in kept.iter().enumerate() {
        projection.cols_data[*f].push((k, one.clone()));
    }
    for (p, row) in ech.rows() {
        // Column p of the projection: -(subspace vector with pivot p) at kept rows.
        let col = &mut projection.cols_data[p];
        for (i, s) in &row {
            if let Some(&k) = kept_pos.get(i) {
                col.push((k, s.neg()));
            }
        }
        col.sort_by_key(|(i, _)| *i);
    }
    Ok(QuotientData {
        dim,
        projection,
        lift,
        kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ScalarField {
        ScalarField::Q
    }

    fn qm(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Matrix {
        Matrix::from_triplets(
            q(),
            rows,
            cols,
            entries.iter().map(|(r, c, v)| (*r, *c, q().from_int(*v))),
        )
        .unwrap()
    }

    #[test]
    fn identity_has_full_rank_and_no_kernel() {
        let m = Matrix::identity(q(), 2);
        let d = rank_kernel_image(&m);
        assert_eq!(d.rank, 2);
        assert!(d.kernel.is_empty());
        assert_eq!(d.image.len(), 2);
    }

    #[test]
    fn proportional_rows_have_rank_one() {
        // [[1,2],[2,4]] -> rank 1, kernel spanned by (-2, 1).
        let m = qm(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        let d = rank_kernel_image(&m);
        assert_eq!(d.rank, 1);
        assert_eq!(d.kernel.len(), 1);
        let k = &d.kernel[0];
        // Echelon-canonical: free col 1 set to 1, pivot col 0 gets -2.
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], (0, q().from_int(-2)));
        assert_eq!(k[1], (1, q().from_int(1)));
    }

    #[test]
    fn char_two_collapse() {
        let f = ScalarField::Fp(2);
        let m = Matrix::from_triplets(
            f,
            2,
            2,
            [(0usize, 0usize, 1i64), (0, 1, 1), (1, 0, 1), (1, 1, 1)]
                .into_iter()
                .map(|(r, c, v)| (r, c, f.from_int(v))),
        )
        .unwrap();
        let d = rank_kernel_image(&m);
        assert_eq!(d.rank, 1);
        assert_eq!(d.kernel.len(), 1);
        assert_eq!(d.kernel[0], vec![(0, f.one()), (1, f.one())]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = Matrix::identity(q(), 2);
        let b = vec![(0, q().from_int(3)), (1, q().from_int(5))];
        assert_eq!(solve_linear(&id, &b).unwrap().unwrap(), b);

        let m = qm(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        let b = vec![(0, q().from_int(1)), (1, q().from_int(3))];
        assert!(solve_linear(&m, &b).unwrap().is_none());
    }

    #[test]
    fn solve_picks_canonical_echelon_solution() {
        // [[1,1]] x = (1) over F2 -> (1, 0).
        let f = ScalarField::Fp(2);
        let m = Matrix::from_triplets(f, 1, 2, vec![(0, 0, f.one()), (0, 1, f.one())]).unwrap();
        let b = vec![(0, f.one())];
        let x = solve_linear(&m, &b).unwrap().unwrap();
        assert_eq!(x, vec![(0, f.one())]);
    }

    #[test]
    fn quotient_dims() {
        // ambient 2, subspace {(1,0)} -> dim 1
        let d = quotient_basis(q(), 2, &[vec![(0, q().one())]]).unwrap();
        assert_eq!(d.dim, 1);
        // ambient 3, empty subspace -> identity projection
        let d = quotient_basis(q(), 3, &[]).unwrap();
        assert_eq!(d.dim, 3);
        assert_eq!(d.projection, Matrix::identity(q(), 3));
        // dependent generators
        let d = quotient_basis(
            q(),
            2,
            &[
                vec![(0, q().one()), (1, q().one())],
                vec![(0, q().from_int(2)), (1, q().from_int(2))],
            ],
        )
        .unwrap();
        assert_eq!(d.dim, 1);
    }

    #[test]
    fn projection_kills_subspace_and_splits() {
        let gens = vec![
            vec![(0, q().from_int(1)), (2, q().from_int(3))],
            vec![(1, q().from_int(2)), (2, q().from_int(1))],
        ];
        let d = quotient_basis(q(), 4, &gens).unwrap();
        assert_eq!(d.dim, 2);
        for g in &gens {
            assert!(d.projection.apply(g).is_empty());
        }
        let pl = d.projection.mul(&d.lift).unwrap();
        assert_eq!(pl, Matrix::identity(q(), 2));
    }

    #[test]
    fn mixed_field_entry_rejected() {
        let mut m = Matrix::zero(q(), 2, 2);
        let bad = ScalarField::Fp(5).one();
        assert!(m.add_entry(0, 0, &bad).is_err());
    }

    #[test]
    fn dense_and_sparse_decompositions_agree() {
        // Force the sparse route by padding rows past the cutoff.
        let small = qm(3, 4, &[(0, 0, 1), (0, 2, 2), (1, 1, 3), (2, 3, 1), (2, 0, 5)]);
        let mut big = Matrix::zero(q(), DENSE_CUTOFF + 3, 4);
        for c in 0..small.cols() {
            big.set_col(c, small.col(c).clone());
        }
        let a = rank_kernel_image(&small);
        let b = rank_kernel_image(&big);
        assert_eq!(a.rank, b.rank);
        assert_eq!(a.kernel, b.kernel);
        assert_eq!(a.image, b.image);
    }

    #[test]
    fn kron_is_associative_on_indices() {
        let a = qm(2, 2, &[(0, 0, 1), (1, 1, 2)]);
        let b = qm(2, 1, &[(0, 0, 3), (1, 0, 4)]);
        let c = qm(1, 2, &[(0, 0, 5), (0, 1, 6)]);
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        assert_eq!(left, right);
    }
}
