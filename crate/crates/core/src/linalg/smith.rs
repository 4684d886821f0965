//! Integer Smith normal form by elimination with minimal-absolute-value pivoting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sparse::SparseColumnMatrix;

/// Elementary divisors `d_1 | d_2 | ... | d_r` of an integer matrix (all positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    /// Rational rank of the input.
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.divisors.iter().filter(|d| !d.is_one())
    }

    /// Product of all divisors, i.e. the order of the torsion of the cokernel.
    pub fn torsion_order(&self) -> BigInt {
        self.divisors.iter().product()
    }
}

/// Scalar operations needed by the elimination; the `i128` instance signals overflow with `None`.
trait SnfScalar: Clone + PartialEq {
    fn is_nil(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn quot(&self, d: &Self) -> Self;
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl SnfScalar for i128 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl SnfScalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

/// Diagonalises `a` in place; returns the nonzero diagonal or `None` on overflow.
fn diagonalize<T: SnfScalar>(a: &mut [Vec<T>]) -> Option<Vec<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // global minimum |entry| of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_nil() && best.is_none_or(|(bi, bj)| a[i][j].abs_lt(&a[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_nil() {
                    continue;
                }
                let q = a[i][t].quot(&a[t][t]);
                for j in t..cols {
                    let v = a[i][j].sub_mul(&q, &a[t][j])?;
                    a[i][j] = v;
                }
                clean &= a[i][t].is_nil();
            }
            for j in t + 1..cols {
                if a[t][j].is_nil() {
                    continue;
                }
                let q = a[t][j].quot(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = row[j].sub_mul(&q, &row[t])?;
                    row[j] = v;
                }
                clean &= a[t][j].is_nil();
            }
            if clean {
                break;
            }
            // a remainder smaller than the pivot survived: promote it and repeat
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[i][t].is_nil() && a[i][t].abs_lt(&a[best.0][best.1]) {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_nil() && a[t][j].abs_lt(&a[best.0][best.1]) {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        let p = a[t][t].clone();
        diag.push(p);
    }
    Some(diag)
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &SparseColumnMatrix<BigInt>) -> SmithForm {
    let fits = m
        .columns()
        .iter()
        .flatten()
        .all(|(_, v)| v.to_i64().is_some());
    let diag: Vec<BigInt> = if fits {
        let mut small: Vec<Vec<i128>> = vec![vec![0; m.cols()]; m.rows()];
        for (j, col) in m.columns().iter().enumerate() {
            for (i, v) in col {
                small[*i][j] = i128::from(v.to_i64().expect("checked above"));
            }
        }
        match diagonalize(&mut small) {
            Some(d) => d.into_iter().map(SnfScalar::into_big).collect(),
            None => diagonalize(&mut m.to_dense()).expect("BigInt elimination never overflows"),
        }
    } else {
        diagonalize(&mut m.to_dense()).expect("BigInt elimination never overflows")
    };
    SmithForm { divisors: divisibility_chain(diag.into_iter().map(|d| d.abs()).collect()) }
}

/// Turns a diagonal into the equivalent divisibility chain via gcd/lcm exchanges.
fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if !(&d[j] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[j]);
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> SparseColumnMatrix<BigInt> {
        let dense: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        SparseColumnMatrix::from_dense(&dense)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diagonal_two_four() {
        let snf = smith_normal_form(&int_matrix(&[&[2, 0], &[0, 4]]));
        assert_eq!(snf.divisors, big(&[2, 4]));
    }

    #[test]
    fn chain_repair() {
        // diag(4, 6) ~ diag(2, 12)
        let snf = smith_normal_form(&int_matrix(&[&[4, 0], &[0, 6]]));
        assert_eq!(snf.divisors, big(&[2, 12]));
        assert_eq!(snf.torsion_order(), BigInt::from(24));
    }

    #[test]
    fn triangle_graph_boundary_is_torsion_free() {
        // vertices 0,1,2; edges 01, 02, 12
        let m = int_matrix(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.divisors, big(&[1, 1]));
    }

    #[test]
    fn zero_matrix() {
        let snf = smith_normal_form(&SparseColumnMatrix::zeros(3, 2));
        assert_eq!(snf.rank(), 0);
        assert_eq!(snf.torsion_order(), BigInt::from(1));
    }

    #[test]
    fn large_entries_fall_back_to_bigint() {
        let huge = i64::MAX;
        let snf = smith_normal_form(&int_matrix(&[&[huge, huge - 1], &[huge - 1, huge]]));
        // det = huge^2 - (huge-1)^2 = 2*huge - 1
        let det = BigInt::from(huge) * 2 - 1;
        assert_eq!(snf.torsion_order(), det);
    }
}
