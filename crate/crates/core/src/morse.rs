//! The lexicographic `(d-1, d)` acyclic matching and its critical simplices.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::combinatorics::binomial;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A partial matching between `(d-1)`- and `d`-simplices; everything unmatched is critical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicMatching {
    degree: usize,
    /// `(σ, φ(σ))` with `σ` a `(d-1)`-face of `φ(σ)`.
    pairs: Vec<(Simplex, Simplex)>,
    /// Critical simplices per dimension.
    critical: Vec<Vec<Simplex>>,
}

impl AcyclicMatching {
    /// Validates shape: faces of the right dimensions present in `x`, `σ ⊂ φ(σ)`, and a bijection.
    /// Acyclicity is not checked here; see [`verify_acyclic`].
    pub fn new(x: &SimplicialComplex, d: usize, pairs: Vec<(Simplex, Simplex)>) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("matching degree must be at least 1"));
        }
        let mut low = HashSet::new();
        let mut high = HashSet::new();
        for (s, t) in &pairs {
            if s.dim() + 1 != d || t.dim() != d || !s.is_face_of(t) {
                return Err(Error::Structural(format!("{s} -> {t} is not a ({}, {d}) face pair", d - 1)));
            }
            if !x.contains(s.vertices()) || !x.contains(t.vertices()) {
                return Err(Error::Structural(format!("{s} -> {t} leaves the complex")));
            }
            if !low.insert(s.clone()) || !high.insert(t.clone()) {
                return Err(Error::Structural(format!("{s} -> {t} reuses a matched simplex")));
            }
        }
        let critical = (0..=x.dim())
            .map(|k| {
                x.simplices(k)
                    .iter()
                    .filter(|s| !(k + 1 == d && low.contains(*s)) && !(k == d && high.contains(*s)))
                    .cloned()
                    .collect()
            })
            .collect();
        Ok(AcyclicMatching { degree: d, pairs, critical })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    pub fn critical(&self, k: usize) -> &[Simplex] {
        self.critical.get(k).map_or(&[], Vec::as_slice)
    }

    /// Number of critical `k`-simplices.
    pub fn critical_count(&self, k: usize) -> usize {
        self.critical(k).len()
    }
}

/// Pairs each `(d-1)`-simplex `σ` with its lexicographically smallest coface `τ` satisfying
/// `σ <_lex τ`, i.e. `τ = σ ∪ {v}` for the smallest present `v > max σ`.
///
/// Two simplices never compete for one coface: `τ` can only be chosen by `τ \ {max τ}`.
pub fn lex_matching(x: &SimplicialComplex, d: usize) -> Result<AcyclicMatching> {
    if d == 0 {
        return Err(Error::domain("matching degree must be at least 1"));
    }
    let n = x.n_vertices() as u32;
    let pairs: Vec<(Simplex, Simplex)> = x
        .simplices(d - 1)
        .par_iter()
        .filter_map(|s| {
            let top = *s.vertices().last().expect("nonempty simplex");
            (top + 1..n).find_map(|v| {
                let mut verts = s.vertices().to_vec();
                verts.push(v);
                x.contains(&verts).then(|| (s.clone(), Simplex::from_sorted(verts)))
            })
        })
        .collect();
    AcyclicMatching::new(x, d, pairs)
}

/// Whether the relation `σ' ◁ σ ⇔ σ' ⊂ φ(σ)` on matched `(d-1)`-simplices has no cycle
/// (Kahn topological sort).
pub fn verify_acyclic(m: &AcyclicMatching) -> bool {
    let position: HashMap<&Simplex, usize> = m.pairs.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m.pairs.len()];
    let mut indegree = vec![0usize; m.pairs.len()];
    for (i, (s, t)) in m.pairs.iter().enumerate() {
        for (_, face) in t.facets() {
            if face == *s {
                continue;
            }
            if let Some(&j) = position.get(&face) {
                succ[j].push(i);
                indegree[i] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..m.pairs.len()).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = ready.pop() {
        seen += 1;
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    seen == m.pairs.len()
}

/// Expected number of critical `(d-1)`-simplices of the lexicographic matching on the
/// random clique complex with edge probability `t`, and its closed-form upper bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalExpectation {
    /// `Σ_{j=d}^{n} C(j-1, d-1) t^{C(d,2)} (1 - t^d)^{n-j}`.
    pub exact: f64,
    /// `C(n, d-1) t^{C(d,2) - d}`.
    pub bound: f64,
}

pub fn expected_critical(n: usize, d: usize, t: f64) -> Result<CriticalExpectation> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("edge probability {t} outside [0, 1]")));
    }
    if d == 0 || d > n {
        return Err(Error::domain(format!("degree {d} outside 1..={n}")));
    }
    let pairs = (d * (d - 1) / 2) as i32;
    let present = t.powi(pairs);
    let miss = 1.0 - t.powi(d as i32);
    let exact = (d..=n)
        .map(|j| binomial(j as u64 - 1, d as u64 - 1) as f64 * present * miss.powi((n - j) as i32))
        .sum();
    let bound = binomial(n as u64, d as u64 - 1) as f64 * t.powi(pairs - d as i32);
    Ok(CriticalExpectation { exact, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn filled_triangle() {
        let x = SimplicialComplex::closure(3, [s(&[0, 1, 2])]).unwrap();
        let m = lex_matching(&x, 2).unwrap();
        assert_eq!(m.pairs(), &[(s(&[0, 1]), s(&[0, 1, 2]))]);
        assert_eq!(m.critical(1), &[s(&[0, 2]), s(&[1, 2])]);
        assert_eq!(m.critical_count(2), 0);
        assert_eq!(m.critical_count(0), 3);
        assert!(verify_acyclic(&m));
    }

    #[test]
    fn graph_matching_and_cycle() {
        let x = SimplicialComplex::closure(3, [s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]).unwrap();
        let m = lex_matching(&x, 1).unwrap();
        assert_eq!(m.critical_count(0), 1);
        assert_eq!(m.critical_count(1), 1);
        assert!(verify_acyclic(&m));
        let cyclic = AcyclicMatching::new(
            &x,
            1,
            vec![(s(&[0]), s(&[0, 1])), (s(&[1]), s(&[1, 2])), (s(&[2]), s(&[0, 2]))],
        )
        .unwrap();
        assert!(!verify_acyclic(&cyclic));
    }

    #[test]
    fn malformed_matchings_rejected() {
        let x = SimplicialComplex::skeleton(3, 2).unwrap();
        assert!(AcyclicMatching::new(&x, 2, vec![(s(&[0, 1]), s(&[0, 1, 2])), (s(&[0, 2]), s(&[0, 1, 2]))]).is_err());
        assert!(AcyclicMatching::new(&x, 2, vec![(s(&[0]), s(&[0, 1, 2]))]).is_err());
        let empty = AcyclicMatching::new(&x, 2, vec![]).unwrap();
        assert!(verify_acyclic(&empty));
        assert_eq!(empty.critical_count(1), 3);
    }

    #[test]
    fn expectation_endpoints() {
        let e = expected_critical(10, 2, 0.0).unwrap();
        assert_eq!(e.exact, 0.0);
        let e = expected_critical(10, 2, 1.0).unwrap();
        assert_eq!(e.exact, 9.0);
        let e = expected_critical(30, 2, 0.1).unwrap();
        assert!(e.exact <= e.bound);
        assert!(expected_critical(10, 2, 1.5).is_err());
    }
}
