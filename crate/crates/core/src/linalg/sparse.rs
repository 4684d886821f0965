use crate::error::{Error, Result};

use super::ring::{Field, Ring};

/// Sparse column: strictly increasing row indices, nonzero coefficients.
pub type SparseColumn<R> = Vec<(usize, R)>;

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseColumnMatrix<R> {
    rows: usize,
    columns: Vec<SparseColumn<R>>,
}

impl<R: Ring> SparseColumnMatrix<R> {
    /// Validates bounds, ordering and nonzero-ness of every column.
    pub fn new(rows: usize, columns: Vec<SparseColumn<R>>) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            for w in col.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(Error::domain(format!("column {j}: rows not strictly increasing")));
                }
            }
            if let Some((i, _)) = col.iter().find(|(i, v)| *i >= rows || v.is_zero()) {
                return Err(Error::domain(format!("column {j}: bad entry at row {i}")));
            }
        }
        Ok(SparseColumnMatrix { rows, columns })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseColumnMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    pub fn from_dense(dense: &[Vec<R>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let columns = (0..cols)
            .map(|j| {
                (0..rows)
                    .filter(|&i| !dense[i][j].is_zero())
                    .map(|i| (i, dense[i][j].clone()))
                    .collect()
            })
            .collect();
        SparseColumnMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, R)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseColumn<R>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        self.columns[j]
            .binary_search_by_key(&i, |e| e.0)
            .map(|pos| self.columns[j][pos].1.clone())
            .unwrap_or_else(|_| R::zero())
    }

    /// Entry-wise conversion into another coefficient ring.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseColumnMatrix<S> {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .filter_map(|(i, v)| {
                        let w = f(v);
                        (!w.is_zero()).then_some((*i, w))
                    })
                    .collect()
            })
            .collect();
        SparseColumnMatrix { rows: self.rows, columns }
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut out = vec![vec![R::zero(); self.cols()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    /// Submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        SparseColumnMatrix {
            rows: self.rows,
            columns: cols.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Submatrix on the given rows; row `rows[r]` becomes row `r`. `rows` must be increasing.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut remap = vec![usize::MAX; self.rows];
        for (r, &i) in rows.iter().enumerate() {
            remap[i] = r;
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|(i, _)| remap[*i] != usize::MAX)
                    .map(|(i, v)| (remap[*i], v.clone()))
                    .collect()
            })
            .collect();
        SparseColumnMatrix { rows: rows.len(), columns }
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<SparseColumn<R>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i].push((j, v.clone()));
            }
        }
        SparseColumnMatrix { rows: self.cols(), columns }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows {
            return Err(Error::domain(format!(
                "shape mismatch: {}x{} * {}x{}",
                self.rows,
                self.cols(),
                rhs.rows,
                rhs.cols()
            )));
        }
        let columns = rhs
            .columns
            .iter()
            .map(|rc| {
                let mut acc = vec![R::zero(); self.rows];
                for (k, w) in rc {
                    for (i, v) in &self.columns[*k] {
                        acc[*i] = acc[*i].add(&v.mul(w));
                    }
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Ok(SparseColumnMatrix { rows: self.rows, columns })
    }
}

/// `a - factor * b` for sorted sparse columns, written into `out`.
pub(crate) fn axpy_into<F: Ring>(a: &[(usize, F)], factor: &F, b: &[(usize, F)], out: &mut Vec<(usize, F)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, b[j].1.mul(factor).neg()));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a[i].1.sub(&b[j].1.mul(factor));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(r, v)| (*r, v.mul(factor).neg())));
}

/// Left-to-right column reduction state: reduced columns keyed by their lowest (largest) row.
///
/// Stored columns are normalised so the pivot coefficient is one.
#[derive(Clone, Debug)]
pub struct ColumnReducer<F> {
    rows: usize,
    pivot_owner: Vec<u32>,
    stored: Vec<SparseColumn<F>>,
}

const NO_PIVOT: u32 = u32::MAX;

impl<F: Field> ColumnReducer<F> {
    pub fn new(rows: usize) -> Self {
        ColumnReducer { rows, pivot_owner: vec![NO_PIVOT; rows], stored: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of stored (independent) columns.
    pub fn len(&self) -> usize {
        self.stored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stored.is_empty()
    }

    pub fn has_pivot(&self, row: usize) -> bool {
        self.pivot_owner[row] != NO_PIVOT
    }

    /// Reduces `col` against the stored columns until its pivot is new or it vanishes.
    pub fn reduce(&self, mut col: SparseColumn<F>) -> SparseColumn<F> {
        let mut scratch = Vec::with_capacity(col.len());
        while let Some((low, coeff)) = col.last() {
            let owner = self.pivot_owner[*low];
            if owner == NO_PIVOT {
                break;
            }
            let factor = coeff.clone();
            axpy_into(&col, &factor, &self.stored[owner as usize], &mut scratch);
            std::mem::swap(&mut col, &mut scratch);
        }
        col
    }

    /// Stores a reduced nonzero column and returns its pivot row.
    pub fn insert_reduced(&mut self, mut col: SparseColumn<F>) -> usize {
        let (low, coeff) = col.last().cloned().expect("inserting a zero column");
        debug_assert_eq!(self.pivot_owner[low], NO_PIVOT);
        if coeff != F::one() {
            let inv = coeff.inv();
            for (_, v) in col.iter_mut() {
                *v = v.mul(&inv);
            }
        }
        self.pivot_owner[low] = self.stored.len() as u32;
        self.stored.push(col);
        low
    }

    /// Reduces and, when independent, stores `col`. Returns the pivot row if stored.
    pub fn push(&mut self, col: SparseColumn<F>) -> Option<usize> {
        let reduced = self.reduce(col);
        if reduced.is_empty() {
            None
        } else {
            Some(self.insert_reduced(reduced))
        }
    }
}

/// Incremental linear-matroid independence test over a field.
#[derive(Clone, Debug)]
pub struct RankOracle<F> {
    reducer: ColumnReducer<F>,
}

impl<F: Field> RankOracle<F> {
    pub fn new(rows: usize) -> Self {
        RankOracle { reducer: ColumnReducer::new(rows) }
    }

    pub fn rows(&self) -> usize {
        self.reducer.rows()
    }

    pub fn accepted(&self) -> usize {
        self.reducer.len()
    }

    /// Accepts `col` iff it is independent of the accepted columns; state is unchanged otherwise.
    pub fn try_add(&mut self, col: &[(usize, F)]) -> bool {
        debug_assert!(col.iter().all(|(i, _)| *i < self.rows()));
        self.reducer.push(col.to_vec()).is_some()
    }

    /// Independence probe without accepting.
    pub fn is_independent(&self, col: &[(usize, F)]) -> bool {
        !self.reducer.reduce(col.to_vec()).is_empty()
    }
}

/// Rank over the field `F`.
pub fn rank<F: Field>(m: &SparseColumnMatrix<F>) -> usize {
    let mut oracle = RankOracle::new(m.rows());
    m.columns().iter().filter(|c| oracle.try_add(c)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ring::Gf;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = SparseColumnMatrix::<BigRational>::zeros(3, 4);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn oracle_rejects_repeat_and_zero() {
        let mut o = RankOracle::<BigRational>::new(3);
        let e1 = vec![(0, q(1))];
        assert!(o.try_add(&e1));
        assert!(!o.try_add(&e1));
        assert!(!o.try_add(&[]));
        assert_eq!(o.accepted(), 1);
    }

    #[test]
    fn axpy_cancels() {
        let a = vec![(0, Gf::from_i64(2)), (3, Gf::from_i64(1))];
        let mut out = Vec::new();
        axpy_into(&a, &Gf::from_i64(1), &a, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn constructor_rejects_bad_columns() {
        assert!(SparseColumnMatrix::new(2, vec![vec![(1, q(1)), (0, q(1))]]).is_err());
        assert!(SparseColumnMatrix::new(2, vec![vec![(2, q(1))]]).is_err());
        assert!(SparseColumnMatrix::new(2, vec![vec![(0, q(0))]]).is_err());
    }

    #[test]
    fn transpose_and_product() {
        let m = SparseColumnMatrix::from_dense(&[vec![q(1), q(2)], vec![q(0), q(3)]]);
        let mt = m.transpose();
        assert_eq!(mt.get(1, 0), q(2));
        let p = m.mul(&mt).unwrap();
        assert_eq!(p.get(0, 0), q(5));
        assert_eq!(p.get(0, 1), q(6));
        assert_eq!(p.get(1, 1), q(9));
    }
}
