//! Spanning acycles: cardinality, detection, greedy minimisation, torsion, Kalai sums,
//! determinantal expansions and shadows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, index_subsets};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtration::{format_time, Filtration, Time};
use crate::linalg::{determinant, smith_normal_form, Backend, Field, Gf, GfAlt, RankOracle, SparseColumnMatrix};

/// Default refusal threshold for exhaustive enumerations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// `γ_k(X) = f_k - β_k(X^{(k)}) + β_{k-1}(X^{(k)})`, the size of every `k`-spanning acycle.
///
/// When the skeleta below `k` are acyclic the alternating-sum closed form is evaluated too
/// and a disagreement is reported as an error.
pub fn gamma(x: &SimplicialComplex, k: usize) -> Result<usize> {
    gamma_with(x, k, Backend::Rational)
}

/// [`gamma`] with ranks taken over the given backend.
pub fn gamma_with(x: &SimplicialComplex, k: usize, backend: Backend) -> Result<usize> {
    if k > x.dim() {
        return Err(Error::domain(format!("degree {k} exceeds dimension {}", x.dim())));
    }
    let sk = x.skeleton_of(k);
    let below = if k == 0 { 0 } else { sk.betti(k - 1, backend) };
    let g = x.f(k) - sk.betti(k, backend) + below;
    if let Some(closed) = gamma_closed_form(x, k, backend) {
        if closed != g as i128 {
            return Err(Error::IdentityViolation(format!(
                "gamma_{k}: Betti route gives {g}, alternating sum gives {closed}"
            )));
        }
    }
    Ok(g)
}

/// `(-1)^k (1 - Σ_{j<k} (-1)^j f_j)`, provided `β_{j-1}(X^{(j)}) = 0` for `1 <= j < k`.
pub fn gamma_closed_form(x: &SimplicialComplex, k: usize, backend: Backend) -> Option<i128> {
    for j in 1..k {
        if x.skeleton_of(j).betti(j - 1, backend) != 0 {
            return None;
        }
    }
    let alt: i128 = (0..k).map(|j| if j % 2 == 0 { x.f(j) as i128 } else { -(x.f(j) as i128) }).sum();
    let v = 1 - alt;
    Some(if k % 2 == 0 { v } else { -v })
}

fn indices_of(x: &SimplicialComplex, k: usize, simplices: &[Simplex]) -> Result<Vec<usize>> {
    simplices
        .iter()
        .map(|s| {
            if s.dim() != k {
                return Err(Error::domain(format!("{s} is not a {k}-simplex")));
            }
            x.index_of(s.vertices())
                .ok_or_else(|| Error::domain(format!("{s} is not in the complex")))
        })
        .collect()
}

fn rank_of_columns<F: Field>(x: &SimplicialComplex, k: usize, indices: &[usize]) -> usize {
    let mut oracle = RankOracle::<F>::new(x.augmented_rows(k));
    indices.iter().filter(|&&i| oracle.try_add(&x.augmented_column(k, i))).count()
}

/// Rank of the columns of the augmented `∂_k` at `indices`.
pub fn columns_rank(x: &SimplicialComplex, k: usize, indices: &[usize], backend: Backend) -> usize {
    match backend {
        Backend::Rational => rank_of_columns::<BigRational>(x, k, indices),
        Backend::Modular => rank_of_columns::<Gf>(x, k, indices),
        Backend::ModularAlt => rank_of_columns::<GfAlt>(x, k, indices),
    }
}

/// Whether `S` is a `k`-spanning acycle: `∂_k|_S` injective and `|S| = γ_k`.
pub fn is_spanning_acycle(x: &SimplicialComplex, s: &[Simplex], k: usize) -> Result<bool> {
    let idx = indices_of(x, k, s)?;
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return Err(Error::domain("repeated simplex in candidate acycle"));
    }
    Ok(idx.len() == gamma(x, k)? && columns_rank(x, k, &idx, Backend::Rational) == idx.len())
}

/// The hypotheses `β_{d-1}(X^{(d)}) = 0` and `β_{d-2}(X^{(d-1)}) = 0` (vacuous below degree 0).
pub fn check_hypotheses(x: &SimplicialComplex, d: usize, backend: Backend) -> Result<()> {
    if d > x.dim() {
        return Err(Error::domain(format!("degree {d} exceeds dimension {}", x.dim())));
    }
    let checks = [(d, d.checked_sub(1)), (d.wrapping_sub(1), d.checked_sub(2))];
    for (skel, deg) in checks {
        let Some(deg) = deg else { continue };
        let b = x.skeleton_of(skel).betti(deg, backend);
        if b != 0 {
            return Err(Error::Precondition { degree: deg as isize, complex: format!("X^({skel})"), betti: b });
        }
    }
    Ok(())
}

/// A spanning acycle with its weight under a filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningAcycleResult {
    pub degree: usize,
    pub gamma: usize,
    /// Indices into `complex.simplices(degree)`, in acceptance order.
    pub indices: Vec<usize>,
    pub simplices: Vec<Simplex>,
    pub weight: Time,
    /// Independence of the selected columns confirmed over the rationals.
    pub certified: bool,
}

impl SpanningAcycleResult {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            degree: usize,
            gamma: usize,
            weight: String,
            simplices: Vec<&'a [u32]>,
            certified: bool,
        }
        serde_json::to_value(Out {
            degree: self.degree,
            gamma: self.gamma,
            weight: format_time(&self.weight),
            simplices: self.simplices.iter().map(Simplex::vertices).collect(),
            certified: self.certified,
        })
        .expect("plain record serializes")
    }
}

fn greedy<F: Field>(f: &Filtration, d: usize, target: usize) -> Vec<usize> {
    let x = f.complex();
    let mut oracle = RankOracle::<F>::new(x.augmented_rows(d));
    let mut chosen = Vec::with_capacity(target);
    for i in f.order(d) {
        if chosen.len() == target {
            break;
        }
        if oracle.try_add(&x.augmented_column(d, i)) {
            chosen.push(i);
        }
    }
    chosen
}

/// Minimum-weight `d`-spanning acycle by the matroid greedy over boundary columns taken in
/// (birth, lexicographic) order.
pub fn min_spanning_acycle(f: &Filtration, d: usize, backend: Backend) -> Result<SpanningAcycleResult> {
    let x = f.complex();
    check_hypotheses(x, d, backend)?;
    let g = gamma_with(x, d, backend)?;
    let chosen = match backend {
        Backend::Rational => greedy::<BigRational>(f, d, g),
        Backend::Modular => greedy::<Gf>(f, d, g),
        Backend::ModularAlt => greedy::<GfAlt>(f, d, g),
    };
    if chosen.len() < g {
        return Err(Error::Structural(format!(
            "only {} independent {d}-columns, expected gamma = {g}",
            chosen.len()
        )));
    }
    let certified = backend == Backend::Rational || columns_rank(x, d, &chosen, Backend::Rational) == g;
    Ok(SpanningAcycleResult {
        degree: d,
        gamma: g,
        weight: f.weight(d, chosen.iter().copied()),
        simplices: chosen.iter().map(|&i| x.simplices(d)[i].clone()).collect(),
        indices: chosen,
        certified,
    })
}

/// `max_{S ∈ 𝒮^{(d-1)}} wt(X_{d-1} \ S) = wt(X_{d-1}) - wt(min spanning (d-1)-acycle)`.
pub fn max_complement_weight(f: &Filtration, d: usize, backend: Backend) -> Result<Time> {
    if d == 0 {
        return Err(Error::domain("complement weight needs degree d >= 1"));
    }
    let total = f.weight(d - 1, 0..f.complex().f(d - 1));
    Ok(total - min_spanning_acycle(f, d - 1, backend)?.weight)
}

/// `L_{d-1}` as `wt(MSA_d) - max complement weight`.
pub fn lifetime_via_msa(f: &Filtration, d: usize, backend: Backend) -> Result<Time> {
    let msa = min_spanning_acycle(f, d, backend)?;
    Ok(msa.weight - max_complement_weight(f, d, backend)?)
}

fn integer_columns(x: &SimplicialComplex, k: usize, indices: &[usize]) -> SparseColumnMatrix<BigInt> {
    let cols = indices.iter().map(|&i| x.augmented_column::<BigInt>(k, i)).collect();
    SparseColumnMatrix::new(x.augmented_rows(k), cols).expect("boundary columns are well formed")
}

/// `|H_{k-1}(X_S)|` for a spanning acycle `S`: the product of the elementary divisors of `∂_k|_S`.
pub fn torsion_order(x: &SimplicialComplex, s: &[Simplex], k: usize) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::domain("torsion order needs k >= 1"));
    }
    if !is_spanning_acycle(x, s, k)? {
        return Err(Error::domain(format!("the given {k}-simplices do not form a spanning acycle")));
    }
    let idx = indices_of(x, k, s)?;
    Ok(smith_normal_form(&integer_columns(x, k, &idx)).torsion_order())
}

/// Outcome of an exhaustive spanning-acycle enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KalaiSummary {
    pub n: usize,
    pub d: usize,
    /// `Σ_S |H_{d-1}(X_S)|^2`.
    pub sum: BigInt,
    /// `n^{C(n-2, d)}`.
    pub expected: BigInt,
    pub candidates: u128,
    pub acycles: u64,
    /// Torsion order → number of acycles with that order.
    pub torsion_counts: BTreeMap<BigInt, u64>,
}

/// Largest `|det|` of any `γ×γ` minor of a `±1` matrix with `d+1` entries per column
/// is at most `(d+1)^{γ/2}`; below the modulus, modular rank equals rational rank.
fn modular_rank_is_exact(d: usize, gamma: usize) -> bool {
    let log_bound = gamma as f64 * 0.5 * ((d + 1) as f64).ln();
    log_bound < (f64::from(Gf::MODULUS)).ln() - 1.0
}

/// Enumerates every `γ_d`-subset of `d`-simplices of the full `d`-skeleton on `n` vertices,
/// keeps the spanning acycles and sums their squared torsion orders.
pub fn kalai_sum(n: usize, d: usize, cap: u128) -> Result<KalaiSummary> {
    let x = SimplicialComplex::skeleton(n, d)?;
    let g = gamma(&x, d)?;
    let candidates = binomial(x.f(d) as u64, g as u64);
    if candidates > cap {
        return Err(Error::CapExceeded { estimate: candidates, cap });
    }
    let exact_mod = modular_rank_is_exact(d, g);
    let per_subset = |subset: Vec<usize>| -> Option<BigInt> {
        let independent = if exact_mod {
            rank_of_columns::<Gf>(&x, d, &subset) == g
        } else {
            rank_of_columns::<BigRational>(&x, d, &subset) == g
        };
        independent.then(|| smith_normal_form(&integer_columns(&x, d, &subset)).torsion_order())
    };
    let (sum, acycles, torsion_counts) = index_subsets(x.f(d), g)
        .par_bridge()
        .filter_map(per_subset)
        .fold(
            || (BigInt::zero(), 0u64, BTreeMap::new()),
            |(mut s, mut c, mut h), t| {
                s += &t * &t;
                c += 1;
                *h.entry(t).or_insert(0) += 1;
                (s, c, h)
            },
        )
        .reduce(
            || (BigInt::zero(), 0u64, BTreeMap::new()),
            |(s1, c1, mut h1), (s2, c2, h2)| {
                for (k, v) in h2 {
                    *h1.entry(k).or_insert(0) += v;
                }
                (s1 + s2, c1 + c2, h1)
            },
        );
    let exponent = binomial(n as u64 - 2, d as u64);
    let expected = num_traits::pow(BigInt::from(n), exponent as usize);
    Ok(KalaiSummary { n, d, sum, expected, candidates, acycles, torsion_counts })
}

/// Report of [`det_expansion_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct DetExpansionReport {
    /// `det(M_K M_K^T)` with `M = diag(x) ∂_d diag(y)` restricted to rows `K`.
    pub lhs: BigRational,
    /// `Σ_{S ∈ 𝒮^{(d)}} det(∂_KS)^2 x_K^2 y_S^2`.
    pub rhs: BigRational,
    /// Number of spanning acycles `S` with `det ∂_KS ≠ 0`.
    pub nonzero_terms: usize,
    /// Some subset outside `𝒮^{(d)}` had a nonzero minor (never expected).
    pub stray_minor: bool,
    /// Whether `X_{d-1} \ K` is a `(d-1)`-spanning acycle, enabling the torsion check.
    pub complement_is_acycle: bool,
    /// Per-term torsion identity held for every `S` (vacuously true when not checked).
    pub torsion_formula_holds: bool,
}

impl DetExpansionReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs && !self.stray_minor && self.torsion_formula_holds
    }
}

fn torsion_of_coker(m: &SparseColumnMatrix<BigInt>) -> BigInt {
    smith_normal_form(m).torsion_order()
}

/// Checks the Binet–Cauchy expansion of `det(M_K M_K^T)` over spanning acycles, with row
/// weights `xw` (one per `(d-1)`-simplex) and column weights `yw` (one per `d`-simplex).
///
/// When the complement `L = X_{d-1} \ K` is a `(d-1)`-spanning acycle, each minor is also
/// compared with `|det ∂_KS| · |H_{d-2}(X_S)| = |H_{d-1}(X_S)| · |H_{d-2}(X_L)|`.
pub fn det_expansion_check(
    x: &SimplicialComplex,
    d: usize,
    rows: &[usize],
    xw: &[BigRational],
    yw: &[BigRational],
    cap: u128,
) -> Result<DetExpansionReport> {
    if d == 0 || d > x.dim() {
        return Err(Error::domain(format!("degree {d} outside 1..={}", x.dim())));
    }
    if xw.len() != x.f(d - 1) || yw.len() != x.f(d) {
        return Err(Error::domain("one weight per (d-1)-simplex and per d-simplex required"));
    }
    let g = gamma(x, d)?;
    let mut k_rows = rows.to_vec();
    k_rows.sort_unstable();
    k_rows.dedup();
    if k_rows.len() != g || k_rows.iter().any(|&r| r >= x.f(d - 1)) {
        return Err(Error::domain(format!("row set must be {g} distinct (d-1)-simplices, got {}", rows.len())));
    }
    let candidates = binomial(x.f(d) as u64, g as u64);
    if candidates > cap {
        return Err(Error::CapExceeded { estimate: candidates, cap });
    }

    let full: SparseColumnMatrix<BigInt> = x.boundary_matrix(d)?;
    let restricted = full.select_rows(&k_rows);
    let weighted = SparseColumnMatrix::new(
        g,
        restricted
            .columns()
            .iter()
            .enumerate()
            .map(|(j, col)| {
                col.iter()
                    .map(|(r, v)| (*r, BigRational::from_integer(v.clone()) * &xw[k_rows[*r]] * &yw[j]))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect(),
    )?;
    let gram = weighted.mul(&weighted.transpose())?;
    let lhs = determinant(&gram)?;

    let x_k_sq: BigRational = k_rows.iter().map(|&r| &xw[r] * &xw[r]).product();

    let l_rows: Vec<usize> = (0..x.f(d - 1)).filter(|r| k_rows.binary_search(r).is_err()).collect();
    let complement_simplices: Vec<Simplex> = l_rows.iter().map(|&r| x.simplices(d - 1)[r].clone()).collect();
    let complement_is_acycle = is_spanning_acycle(x, &complement_simplices, d - 1)?;
    let (h_l, h_below) = if complement_is_acycle && d >= 2 {
        let below = x.augmented_boundary::<BigInt>(d - 1);
        (torsion_of_coker(&below.select_columns(&l_rows)), torsion_of_coker(&below))
    } else {
        (BigInt::one(), BigInt::one())
    };

    let mut rhs = BigRational::zero();
    let mut nonzero_terms = 0;
    let mut stray_minor = false;
    let mut torsion_formula_holds = true;
    for subset in index_subsets(x.f(d), g) {
        let minor = determinant(&restricted.select_columns(&subset))?;
        let acyclic = columns_rank(x, d, &subset, Backend::Rational) == g;
        if !acyclic {
            stray_minor |= !minor.is_zero();
            continue;
        }
        if minor.is_zero() {
            // the row set does not see this acycle; the term vanishes
            if complement_is_acycle {
                torsion_formula_holds = false;
            }
            continue;
        }
        nonzero_terms += 1;
        let y_s_sq: BigRational = subset.iter().map(|&j| &yw[j] * &yw[j]).product();
        let minor_q = BigRational::from_integer(&minor * &minor);
        rhs += minor_q * &x_k_sq * y_s_sq;
        if complement_is_acycle {
            let h_s = torsion_of_coker(&full.select_columns(&subset));
            torsion_formula_holds &= minor.abs() * &h_below == h_s * &h_l;
        }
    }
    Ok(DetExpansionReport { lhs, rhs, nonzero_terms, stray_minor, complement_is_acycle, torsion_formula_holds })
}

/// Row set used in Kalai's count: the `(d-1)`-simplices avoiding vertex 0.
pub fn kalai_rows(x: &SimplicialComplex, d: usize) -> Vec<usize> {
    x.simplices(d - 1)
        .iter()
        .enumerate()
        .filter(|(_, s)| s.vertices()[0] != 0)
        .map(|(i, _)| i)
        .collect()
}

/// Classification of the `d`-simplices of the full simplex relative to `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowPartition {
    pub degree: usize,
    /// `d`-simplices whose addition lowers `β_{d-1}(Y)` by one.
    pub adders: Vec<Simplex>,
    /// The remaining `d`-simplices (this includes `Y_d`).
    pub shadow: Vec<Simplex>,
}

impl ShadowPartition {
    /// `Y` together with every shadow simplex.
    pub fn hull(&self, y: &SimplicialComplex) -> SimplicialComplex {
        let mut levels: Vec<Vec<Simplex>> = (0..self.degree).map(|k| y.simplices(k).to_vec()).collect();
        levels.push(self.shadow.clone());
        SimplicialComplex::from_sorted_levels(y.n_vertices(), levels)
    }
}

fn shadow_over<F: Field>(y: &SimplicialComplex, d: usize) -> ShadowPartition {
    let mut oracle = RankOracle::<F>::new(y.augmented_rows(d));
    for i in 0..y.f(d) {
        oracle.try_add(&y.augmented_column(d, i));
    }
    let mut adders = Vec::new();
    let mut shadow = Vec::new();
    for v in crate::combinatorics::KSubsets::new(y.n_vertices(), d + 1) {
        let sigma = Simplex::from_sorted(v);
        let mut col: Vec<(usize, F)> = sigma
            .facets()
            .map(|(j, face)| {
                let row = y.index_of(face.vertices()).expect("complete (d-1)-skeleton");
                (row, if j % 2 == 0 { F::one() } else { F::one().neg() })
            })
            .collect();
        if d == 0 {
            col = vec![(0, F::one())];
        }
        col.sort_unstable_by_key(|e| e.0);
        if oracle.is_independent(&col) {
            adders.push(sigma);
        } else {
            shadow.push(sigma);
        }
    }
    ShadowPartition { degree: d, adders, shadow }
}

fn require_complete_skeleton(y: &SimplicialComplex, d: usize) -> Result<()> {
    if d == 0 || d >= y.n_vertices() {
        return Err(Error::domain(format!("degree {d} outside 1..{}", y.n_vertices())));
    }
    if !y.has_complete_skeleton(d - 1) {
        return Err(Error::domain(format!("the {}-skeleton is not complete", d - 1)));
    }
    if y.dim() > d {
        return Err(Error::domain(format!("expected a complex of dimension at most {d}")));
    }
    Ok(())
}

/// Splits the `d`-simplices of the full simplex into adders and shadow relative to `Y`.
pub fn shadow(y: &SimplicialComplex, d: usize, backend: Backend) -> Result<ShadowPartition> {
    require_complete_skeleton(y, d)?;
    Ok(match backend {
        Backend::Rational => shadow_over::<BigRational>(y, d),
        Backend::Modular => shadow_over::<Gf>(y, d),
        Backend::ModularAlt => shadow_over::<GfAlt>(y, d),
    })
}

/// Both sides of the rank lower bound `n · rank ∂_d ≥ (d+1) |Y_d|` and the Betti bound
/// `n · β_{d-1}(Y) ≤ (d+1) |adders|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankBoundReport {
    pub n: usize,
    pub d: usize,
    pub faces: usize,
    pub rank: usize,
    pub betti: usize,
    pub adders: usize,
    pub rank_bound_holds: bool,
    pub betti_bound_holds: bool,
}

impl RankBoundReport {
    pub fn holds(&self) -> bool {
        self.rank_bound_holds && self.betti_bound_holds
    }
}

pub fn rank_bound_check(y: &SimplicialComplex, d: usize, backend: Backend) -> Result<RankBoundReport> {
    let part = shadow(y, d, backend)?;
    let n = y.n_vertices();
    let faces = y.f(d);
    let rank = y.boundary_rank(d, backend);
    let betti = y.betti(d - 1, backend);
    let adders = part.adders.len();
    Ok(RankBoundReport {
        n,
        d,
        faces,
        rank,
        betti,
        adders,
        rank_bound_holds: n * rank >= (d + 1) * faces,
        betti_bound_holds: n * betti <= (d + 1) * adders,
    })
}
