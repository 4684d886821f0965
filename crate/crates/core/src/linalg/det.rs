use crate::error::{Error, Result};

use super::ring::Ring;
use super::sparse::SparseColumnMatrix;

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant<R: Ring>(m: &SparseColumnMatrix<R>) -> Result<R> {
    if m.rows() != m.cols() {
        return Err(Error::domain(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(bareiss(m.to_dense()))
}

pub(crate) fn bareiss<R: Ring>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return R::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                row[j] = row[j].mul(&pivot_row[k]).sub(&lead.mul(&pivot_row[j])).div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}
