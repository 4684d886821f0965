//! Abstract simplicial complexes and their oriented boundary operators.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use crate::combinatorics::KSubsets;
use crate::error::{Error, Result};
use crate::linalg::{rank, Backend, Gf, GfAlt, Ring, SparseColumnMatrix};
use num_rational::BigRational;

/// A simplex as its strictly increasing vertex list; orientation is the vertex order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidComplex("empty simplex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidComplex(format!(
                "vertices {vertices:?} are not strictly increasing"
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts and deduplicates; fails only on an empty list.
    pub fn from_unsorted(mut vertices: Vec<u32>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex::new(vertices)
    }

    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces `σ \ {v_j}` paired with `j`; the incidence sign is `(-1)^j`.
    pub fn facets(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let k = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..k).map(move |j| {
            let mut v = self.0.clone();
            v.remove(j);
            (j, Simplex(v))
        })
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl Borrow<[u32]> for Simplex {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Finite simplicial complex on vertices `0..n_vertices`, every vertex present.
///
/// Simplices of each dimension are kept in lexicographic order; a simplex's position in
/// that order is its index, which is also its row/column in boundary matrices.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    n_vertices: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices && self.simplices == other.simplices
    }
}

impl SimplicialComplex {
    /// Builds a complex from an explicit list that must already be closed under faces.
    /// Vertices `0..n_vertices` are always included.
    pub fn from_simplices(n_vertices: usize, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let c = Self::assemble(n_vertices, simplices)?;
        for k in 1..c.simplices.len() {
            for s in &c.simplices[k] {
                if let Some((_, face)) = s.facets().find(|(_, f)| !c.index[k - 1].contains_key(f)) {
                    return Err(Error::InvalidComplex(format!("{s} is present but its face {face} is not")));
                }
            }
        }
        Ok(c)
    }

    /// Smallest complex on `n_vertices` vertices containing the given simplices.
    pub fn closure(n_vertices: usize, generators: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut all = Vec::new();
        for g in generators {
            let k = g.0.len();
            for size in 1..=k {
                for pick in KSubsets::new(k, size) {
                    all.push(Simplex(pick.iter().map(|&i| g.0[i as usize]).collect()));
                }
            }
        }
        Self::assemble(n_vertices, all)
    }

    /// The `k`-skeleton of the full simplex on `n` vertices.
    pub fn skeleton(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::domain(format!("skeleton dimension {k} needs 0 <= k <= n-1 with n = {n} >= 1")));
        }
        let simplices = (0..=k)
            .map(|j| KSubsets::new(n, j + 1).map(Simplex).collect::<Vec<_>>())
            .collect();
        Ok(Self::from_sorted_levels(n, simplices))
    }

    pub(crate) fn from_sorted_levels(n_vertices: usize, simplices: Vec<Vec<Simplex>>) -> Self {
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex { n_vertices, simplices, index }
    }

    fn assemble(n_vertices: usize, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidComplex("a complex needs at least one vertex".into()));
        }
        let mut levels: Vec<Vec<Simplex>> = vec![(0..n_vertices as u32).map(|v| Simplex(vec![v])).collect()];
        for s in simplices {
            if let Some(&v) = s.0.iter().find(|&&v| v as usize >= n_vertices) {
                return Err(Error::InvalidComplex(format!("{s} uses vertex {v} outside 0..{n_vertices}")));
            }
            let k = s.dim();
            if k == 0 {
                continue;
            }
            if levels.len() <= k {
                levels.resize(k + 1, Vec::new());
            }
            levels[k].push(s);
        }
        for level in &mut levels {
            level.sort_unstable();
            level.dedup();
        }
        while levels.len() > 1 && levels.last().is_some_and(Vec::is_empty) {
            levels.pop();
        }
        Ok(Self::from_sorted_levels(n_vertices, levels))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// `f_k`, zero above the dimension.
    pub fn f(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// The `k`-simplices in lexicographic order (empty above the dimension).
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, vertices: &[u32]) -> Option<usize> {
        let k = vertices.len().checked_sub(1)?;
        self.index.get(k)?.get(vertices).copied()
    }

    pub fn contains(&self, vertices: &[u32]) -> bool {
        self.index_of(vertices).is_some()
    }

    /// `X^{(k)}`; a clone when `k >= dim`.
    pub fn skeleton_of(&self, k: usize) -> SimplicialComplex {
        let keep = (k + 1).min(self.simplices.len());
        SimplicialComplex {
            n_vertices: self.n_vertices,
            simplices: self.simplices[..keep].to_vec(),
            index: self.index[..keep].to_vec(),
        }
    }

    /// `X^{(k-1)}` together with the `k`-simplices at the given indices.
    pub fn with_top_simplices(&self, k: usize, indices: &[usize]) -> SimplicialComplex {
        let mut levels = self.simplices[..k.min(self.simplices.len())].to_vec();
        let mut top: Vec<Simplex> = indices.iter().map(|&i| self.simplices[k][i].clone()).collect();
        top.sort_unstable();
        top.dedup();
        if !top.is_empty() {
            levels.push(top);
        }
        Self::from_sorted_levels(self.n_vertices, levels)
    }

    /// Whether every `k`-subset of `0..n_vertices` is present, i.e. the `k`-skeleton is full.
    pub fn has_complete_skeleton(&self, k: usize) -> bool {
        crate::combinatorics::binomial(self.n_vertices as u64, k as u64 + 1) == self.f(k) as u128
    }

    /// Signed boundary column of the `i`-th `k`-simplex (`k >= 1`), rows sorted.
    pub fn boundary_column<R: Ring>(&self, k: usize, i: usize) -> Vec<(usize, R)> {
        let s = &self.simplices[k][i];
        let mut col: Vec<(usize, R)> = s
            .facets()
            .map(|(j, face)| {
                let row = self.index[k - 1][&face];
                (row, if j % 2 == 0 { R::one() } else { R::one().neg() })
            })
            .collect();
        col.sort_unstable_by_key(|e| e.0);
        col
    }

    /// Column of the augmented `∂_k`: the boundary for `k >= 1`, the single entry `1` for `k = 0`.
    pub fn augmented_column<R: Ring>(&self, k: usize, i: usize) -> Vec<(usize, R)> {
        if k == 0 {
            vec![(0, R::one())]
        } else {
            self.boundary_column(k, i)
        }
    }

    /// Number of rows of the augmented `∂_k`.
    pub fn augmented_rows(&self, k: usize) -> usize {
        if k == 0 {
            1
        } else {
            self.f(k - 1)
        }
    }

    /// `∂_k` with rows indexed by `(k-1)`-simplices and columns by `k`-simplices.
    pub fn boundary_matrix<R: Ring>(&self, k: usize) -> Result<SparseColumnMatrix<R>> {
        if k == 0 || k > self.dim() {
            return Err(Error::domain(format!("boundary degree {k} outside 1..={}", self.dim())));
        }
        Ok(self.augmented_boundary(k))
    }

    /// `∂_k` for `k >= 1`; for `k = 0` the augmentation `C_0 -> Z`, a single row of ones.
    /// Using it at `k = 0` makes degree-0 homology reduced. Zero columns above the dimension.
    pub fn augmented_boundary<R: Ring>(&self, k: usize) -> SparseColumnMatrix<R> {
        if k == 0 {
            let cols = (0..self.f(0)).map(|_| vec![(0, R::one())]).collect();
            return SparseColumnMatrix::new(1, cols).expect("well-formed augmentation");
        }
        let cols = (0..self.f(k)).map(|i| self.boundary_column(k, i)).collect();
        SparseColumnMatrix::new(self.f(k - 1), cols).expect("well-formed boundary")
    }

    /// Rank of the augmented `∂_k` under the given backend.
    pub fn boundary_rank(&self, k: usize, backend: Backend) -> usize {
        if k > self.dim() {
            return 0;
        }
        match backend {
            Backend::Rational => rank(&self.augmented_boundary::<BigRational>(k)),
            Backend::Modular => rank(&self.augmented_boundary::<Gf>(k)),
            Backend::ModularAlt => rank(&self.augmented_boundary::<GfAlt>(k)),
        }
    }

    /// Reduced Betti number `β_k`.
    pub fn betti(&self, k: usize, backend: Backend) -> usize {
        if k > self.dim() {
            return 0;
        }
        self.f(k) - self.boundary_rank(k, backend) - self.boundary_rank(k + 1, backend)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simplex_validation() {
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![1, 0]).is_err());
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert_eq!(Simplex::from_unsorted(vec![2, 0, 2]).unwrap(), s(&[0, 2]));
        let facets: Vec<_> = s(&[0, 1, 2]).facets().collect();
        assert_eq!(facets, vec![(0, s(&[1, 2])), (1, s(&[0, 2])), (2, s(&[0, 1]))]);
        assert_eq!(s(&[4]).facets().count(), 0);
    }

    #[test]
    fn skeleton_counts() {
        assert_eq!(SimplicialComplex::skeleton(4, 2).unwrap().f_vector(), vec![4, 6, 4]);
        assert_eq!(SimplicialComplex::skeleton(4, 3).unwrap().f(3), 1);
        assert_eq!(SimplicialComplex::skeleton(6, 2).unwrap().f(2), 20);
        assert!(SimplicialComplex::skeleton(4, 4).is_err());
        assert!(SimplicialComplex::skeleton(0, 0).is_err());
    }

    #[test]
    fn closure_rejection_and_acceptance() {
        assert!(SimplicialComplex::from_simplices(3, [s(&[0, 1, 2])]).is_err());
        assert!(SimplicialComplex::from_simplices(2, [s(&[0, 2])]).is_err());
        let c = SimplicialComplex::closure(3, [s(&[0, 1, 2])]).unwrap();
        assert_eq!(c.f_vector(), vec![3, 3, 1]);
        let again = SimplicialComplex::from_simplices(3, c.simplices(1).iter().chain(c.simplices(2)).cloned()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn triangle_boundary_ranks() {
        let c = SimplicialComplex::closure(3, [s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]).unwrap();
        let d1 = c.boundary_matrix::<BigInt>(1).unwrap();
        assert_eq!(d1.get(0, 0), BigInt::from(-1));
        assert_eq!(d1.get(1, 0), BigInt::from(1));
        assert_eq!(c.boundary_rank(1, Backend::Rational), 2);
        assert_eq!(c.betti(0, Backend::Rational), 0);
        assert_eq!(c.betti(1, Backend::Rational), 1);
        assert!(c.boundary_matrix::<BigInt>(0).is_err());
        assert!(c.boundary_matrix::<BigInt>(2).is_err());
    }

    #[test]
    fn full_two_skeleton_ranks() {
        let c = SimplicialComplex::skeleton(4, 2).unwrap();
        assert_eq!(c.boundary_rank(2, Backend::Rational), 3);
        let c5 = SimplicialComplex::skeleton(5, 2).unwrap();
        assert_eq!(c5.boundary_rank(2, Backend::Modular), 6);
        assert_eq!(c5.betti(0, Backend::Rational), 0);
        assert_eq!(c5.betti(1, Backend::Rational), 0);
        assert_eq!(c5.betti(2, Backend::Rational), 4);
    }

    #[test]
    fn top_simplex_subcomplex() {
        let c = SimplicialComplex::skeleton(4, 2).unwrap();
        let sub = c.with_top_simplices(2, &[0, 1]);
        assert_eq!(sub.f_vector(), vec![4, 6, 2]);
        assert_eq!(sub.betti(1, Backend::Rational), 1);
        let bare = c.with_top_simplices(2, &[]);
        assert_eq!(bare.dim(), 1);
    }
}
