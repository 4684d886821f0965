//! Worked examples with hand-checkable answers.

use acycle::acycle::*;
use acycle::asymptotics::*;
use acycle::combinatorics::{binomial, index_subsets};
use acycle::complex::{Simplex, SimplicialComplex};
use acycle::experiment::*;
use acycle::filtration::{parse_time, Filtration, Time};
use acycle::linalg::{determinant, rank, smith_normal_form, Backend, RankOracle, SparseColumnMatrix};
use acycle::morse::*;
use acycle::persistence::*;
use acycle::process::*;
use acycle::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn s(v: &[u32]) -> Simplex {
    Simplex::new(v.to_vec()).unwrap()
}

fn q(text: &str) -> Time {
    parse_time(text).unwrap()
}

fn k3_filtration() -> Filtration {
    Filtration::from_pairs(3, vec![(s(&[0, 1]), q("1/4")), (s(&[0, 2]), q("1/2")), (s(&[1, 2]), q("3/4"))]).unwrap()
}

fn filled_triangle_filtration() -> Filtration {
    Filtration::from_pairs(
        3,
        vec![(s(&[0, 1]), q("1/4")), (s(&[0, 2]), q("1/2")), (s(&[1, 2]), q("3/4")), (s(&[0, 1, 2]), q("1"))],
    )
    .unwrap()
}

/// Six-vertex real projective plane (ten triangles).
fn rp2() -> SimplicialComplex {
    let tris = [
        [0, 1, 2], [0, 1, 3], [0, 2, 4], [0, 3, 5], [0, 4, 5],
        [1, 2, 5], [1, 3, 4], [1, 4, 5], [2, 3, 4], [2, 3, 5],
    ];
    SimplicialComplex::closure(6, tris.iter().map(|t| s(t))).unwrap()
}

#[test]
fn skeleton_face_counts() {
    assert_eq!(SimplicialComplex::skeleton(4, 2).unwrap().f_vector(), vec![4, 6, 4]);
    assert_eq!(SimplicialComplex::skeleton(4, 3).unwrap().f(3), 1);
    assert_eq!(SimplicialComplex::skeleton(6, 2).unwrap().f(2), 20);
}

#[test]
fn boundary_ranks_of_small_complexes() {
    let triangle = SimplicialComplex::closure(3, [s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]).unwrap();
    assert_eq!(triangle.boundary_rank(1, Backend::Rational), 2);
    let path = SimplicialComplex::closure(3, [s(&[0, 1]), s(&[1, 2])]).unwrap();
    assert_eq!(rank(&path.boundary_matrix::<BigRational>(1).unwrap()), 2);
    assert_eq!(rank(&SimplicialComplex::skeleton(4, 2).unwrap().boundary_matrix::<BigRational>(2).unwrap()), 3);
    assert_eq!(rank(&SimplicialComplex::skeleton(5, 2).unwrap().boundary_matrix::<BigRational>(2).unwrap()), 6);
    assert_eq!(rank(&SparseColumnMatrix::<BigRational>::zeros(3, 3)), 0);
}

#[test]
fn events_break_ties_lexicographically() {
    let f = Filtration::from_pairs(3, vec![(s(&[0, 2]), q("1/2")), (s(&[0, 1]), q("1/2"))]).unwrap();
    let edges: Vec<Simplex> = f.events(1).into_iter().filter(|(_, x)| x.dim() == 1).map(|(_, x)| x).collect();
    assert_eq!(edges, vec![s(&[0, 1]), s(&[0, 2])]);
    let zero = Filtration::constant(SimplicialComplex::skeleton(3, 1).unwrap());
    let all: Vec<Simplex> = zero.events(1).into_iter().map(|(_, x)| x).collect();
    assert_eq!(all, vec![s(&[0]), s(&[1]), s(&[2]), s(&[0, 1]), s(&[0, 2]), s(&[1, 2])]);
}

#[test]
fn oracle_detects_tetrahedron_dependency() {
    let x = SimplicialComplex::skeleton(4, 2).unwrap();
    let mut oracle = RankOracle::<BigRational>::new(x.f(1));
    let accepted: Vec<bool> = (0..4).map(|i| oracle.try_add(&x.boundary_column(2, i))).collect();
    assert_eq!(accepted, vec![true, true, true, false]);
    let mut oracle = RankOracle::<BigRational>::new(3);
    let e1 = vec![(0, BigRational::one())];
    assert!(oracle.try_add(&e1));
    assert!(!oracle.try_add(&e1));
    assert!(!oracle.try_add(&[]));
}

#[test]
fn determinant_examples() {
    let id = SparseColumnMatrix::from_dense(&[
        vec![BigInt::one(), BigInt::zero(), BigInt::zero()],
        vec![BigInt::zero(), BigInt::one(), BigInt::zero()],
        vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
    ]);
    assert_eq!(determinant(&id).unwrap(), BigInt::one());
    let singular = SparseColumnMatrix::from_dense(&[vec![BigInt::from(1), BigInt::from(2)], vec![BigInt::from(2), BigInt::from(4)]]);
    assert!(determinant(&singular).unwrap().is_zero());
}

/// With `L` = the edges through vertex 0, every vertex lies in `X_L`, so the relative
/// complex `(X_S, X_L)` has no relative 0-chains and `H_1(X_S, X_L)` is the cokernel of
/// `∂_KS`. Its order (from the Smith form) must match the Bareiss determinant.
#[test]
fn minors_match_relative_homology() {
    for n in [4usize, 5] {
        let x = SimplicialComplex::skeleton(n, 2).unwrap();
        let rows = kalai_rows(&x, 2);
        let full = x.boundary_matrix::<BigInt>(2).unwrap().select_rows(&rows);
        for subset in index_subsets(x.f(2), rows.len()) {
            let minor = full.select_columns(&subset);
            let det = determinant(&minor).unwrap();
            let snf = smith_normal_form(&minor);
            if det.is_zero() {
                assert!(snf.rank() < rows.len());
            } else {
                assert_eq!(snf.rank(), rows.len());
                assert_eq!(det.abs(), snf.torsion_order());
            }
        }
    }
}

#[test]
fn triangle_persistence() {
    let d0 = compute_persistence(&k3_filtration(), 0, Backend::Rational);
    let births: Vec<_> = d0.pairs().iter().map(|p| (p.birth.clone(), p.death.clone())).collect();
    assert_eq!(births, vec![(q("0"), Extended::Finite(q("1/4"))), (q("0"), Extended::Finite(q("1/2")))]);
    assert_eq!(d0.lifetime_sum(), Extended::Finite(q("3/4")));

    let f = filled_triangle_filtration();
    let d1 = compute_persistence(&f, 1, Backend::Rational);
    assert_eq!(d1.len(), 1);
    assert_eq!(d1.pairs()[0].birth, q("3/4"));
    assert_eq!(d1.lifetime_sum(), Extended::Finite(q("1/4")));
    assert!(compute_persistence(&f, 2, Backend::Rational).is_empty());
    assert!(compute_persistence(&k3_filtration(), 1, Backend::Rational).pairs()[0].death.is_infinite());
    assert_eq!(compute_persistence(&k3_filtration(), 1, Backend::Rational).lifetime_sum(), Extended::Infinite);
    assert_eq!(PersistenceDiagram::empty(0).lifetime_sum(), Extended::Finite(Time::zero()));

    let curve = betti_curve(&f, 1, Backend::Rational);
    assert_eq!(curve.integrate(&q("1")), q("1/4"));
    let flat = betti_curve(&f, 2, Backend::Rational);
    assert_eq!(flat.integrate(&q("1")), Time::zero());
}

#[test]
fn persistent_betti_examples() {
    let f = filled_triangle_filtration();
    let d1 = compute_persistence(&f, 1, Backend::Rational);
    assert_eq!(d1.persistent_betti(&q("3/4"), &q("7/8")).unwrap(), 1);
    assert_eq!(d1.persistent_betti(&q("1/2"), &q("7/8")).unwrap(), 0);
    let curve = betti_curve(&f, 1, Backend::Rational);
    for t in ["0", "1/2", "3/4", "7/8", "1", "2"] {
        assert_eq!(d1.persistent_betti(&q(t), &q(t)).unwrap(), curve.value_at(&q(t)), "t = {t}");
    }
}

#[test]
fn l2_examples() {
    let pair = |b: &str, d: &str| PersistencePair { birth: q(b), death: Extended::Finite(q(d)) };
    let empty = PersistenceDiagram::empty(0);
    assert_eq!(empty.l2_norm_sq().unwrap(), Time::zero());
    assert_eq!(empty.l2_via_integral().unwrap(), Time::zero());
    let one = PersistenceDiagram::new(0, vec![pair("0", "1")]).unwrap();
    assert_eq!(one.l2_norm_sq().unwrap(), q("1"));
    assert_eq!(one.l2_via_integral().unwrap(), q("1"));
    let two = PersistenceDiagram::new(0, vec![pair("0", "1"), pair("1/4", "1/2")]).unwrap();
    assert_eq!(two.l2_norm_sq().unwrap(), q("17/16"));
    assert_eq!(two.l2_via_integral().unwrap(), q("17/16"));
}

#[test]
fn gamma_examples() {
    for n in 3..7usize {
        let x = SimplicialComplex::skeleton(n, n - 1).unwrap();
        for k in 0..n {
            assert_eq!(gamma(&x, k).unwrap() as u128, binomial(n as u64 - 1, k as u64), "n = {n}, k = {k}");
        }
    }
    assert_eq!(gamma(&SimplicialComplex::skeleton(4, 2).unwrap(), 2).unwrap(), 3);
    let graph = SimplicialComplex::closure(5, [s(&[0, 1]), s(&[1, 2]), s(&[2, 3]), s(&[3, 4]), s(&[0, 4]), s(&[1, 3])]).unwrap();
    assert_eq!(gamma(&graph, 1).unwrap(), 4);
}

#[test]
fn spanning_acycle_examples() {
    let sphere = SimplicialComplex::skeleton(4, 2).unwrap();
    let tris = sphere.simplices(2).to_vec();
    for subset in index_subsets(4, 3) {
        let chosen: Vec<Simplex> = subset.iter().map(|&i| tris[i].clone()).collect();
        assert!(is_spanning_acycle(&sphere, &chosen, 2).unwrap());
        assert_eq!(torsion_order(&sphere, &chosen, 2).unwrap(), BigInt::one());
    }
    for subset in index_subsets(4, 2) {
        let chosen: Vec<Simplex> = subset.iter().map(|&i| tris[i].clone()).collect();
        assert!(!is_spanning_acycle(&sphere, &chosen, 2).unwrap());
    }
    let k3 = SimplicialComplex::skeleton(3, 1).unwrap();
    let tree = [s(&[0, 1]), s(&[0, 2])];
    assert!(is_spanning_acycle(&k3, &tree, 1).unwrap());
    assert_eq!(torsion_order(&k3, &tree, 1).unwrap(), BigInt::one());
}

#[test]
fn projective_plane_has_torsion_two() {
    let x = rp2();
    assert_eq!(x.f_vector(), vec![6, 15, 10]);
    let tris = x.simplices(2).to_vec();
    assert!(is_spanning_acycle(&x, &tris, 2).unwrap());
    assert_eq!(torsion_order(&x, &tris, 2).unwrap(), BigInt::from(2));
    // one triangle short is no longer spanning
    assert!(!is_spanning_acycle(&x, &tris[1..], 2).unwrap());
}

#[test]
fn minimum_spanning_acycle_examples() {
    let k3 = k3_filtration();
    let msa = min_spanning_acycle(&k3, 1, Backend::Rational).unwrap();
    assert_eq!(msa.simplices, vec![s(&[0, 1]), s(&[0, 2])]);
    assert_eq!(msa.weight, q("3/4"));
    assert_eq!(max_complement_weight(&k3, 1, Backend::Rational).unwrap(), Time::zero());
    assert_eq!(lifetime_via_msa(&k3, 1, Backend::Rational).unwrap(), q("3/4"));

    let x = SimplicialComplex::skeleton(4, 2).unwrap();
    let mut births: Vec<Vec<Time>> = vec![vec![Time::zero(); 4], vec![Time::zero(); 6]];
    births.push(["1/10", "2/10", "3/10", "4/10"].iter().map(|t| q(t)).collect());
    let f = Filtration::new(x, births).unwrap();
    let msa = min_spanning_acycle(&f, 2, Backend::Rational).unwrap();
    assert_eq!(msa.weight, q("6/10"));
    assert_eq!(msa.indices, vec![0, 1, 2]);

    let zero = Filtration::constant(SimplicialComplex::skeleton(5, 2).unwrap());
    assert_eq!(lifetime_via_msa(&zero, 2, Backend::Rational).unwrap(), Time::zero());
    let lm = lm_process(6, 2, SeedSpec::new(4, 0)).unwrap();
    assert_eq!(max_complement_weight(&lm, 2, Backend::Rational).unwrap(), Time::zero());
}

/// Kruskal with union–find, independent of the linear-algebra oracle.
fn kruskal_weight(n: usize, mut edges: Vec<(Time, u32, u32)>) -> Time {
    edges.sort();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut total = Time::zero();
    for (t, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra != rb {
            parent[ra] = rb;
            total += t;
        }
    }
    total
}

#[test]
fn clique_complement_weight_is_edges_minus_kruskal() {
    for trial in 0..5 {
        let f = clique_process(5, SeedSpec::new(21, trial), 2).unwrap();
        let x = f.complex();
        let edges: Vec<(Time, u32, u32)> = (0..x.f(1))
            .map(|i| {
                let v = x.simplices(1)[i].vertices();
                (f.birth(1, i).clone(), v[0], v[1])
            })
            .collect();
        let all: Time = edges.iter().fold(Time::zero(), |a, e| a + &e.0);
        let expected = all - kruskal_weight(5, edges);
        assert_eq!(max_complement_weight(&f, 2, Backend::Rational).unwrap(), expected);
    }
}

#[test]
fn kalai_sums_for_small_cases() {
    for (n, d, sum) in [(3usize, 1usize, 3u64), (4, 2, 4), (5, 2, 125)] {
        let r = kalai_sum(n, d, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(r.sum, BigInt::from(sum));
        assert_eq!(r.sum, r.expected);
    }
    assert!(matches!(kalai_sum(8, 3, 1000), Err(Error::CapExceeded { .. })));
}

fn unit(len: usize) -> Vec<BigRational> {
    vec![BigRational::one(); len]
}

#[test]
fn determinantal_expansion_on_the_sphere() {
    let x = SimplicialComplex::skeleton(4, 2).unwrap();
    // spanning tree of the edge graph: the star at vertex 0; K is the other three edges
    let rows = kalai_rows(&x, 2);
    assert_eq!(rows.len(), 3);
    let r = det_expansion_check(&x, 2, &rows, &unit(6), &unit(4), DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(r.passed());
    assert!(r.complement_is_acycle);
    assert_eq!(r.lhs, BigRational::from_integer(BigInt::from(4)));
    assert_eq!(r.nonzero_terms, 4);
}

#[test]
fn process_endpoints() {
    let empty = uniform_complex(6, 2, 0, SeedSpec::new(1, 0)).unwrap();
    assert_eq!(empty.betti(1, Backend::Rational) as u128, binomial(5, 2));
    let full = uniform_complex(6, 2, 20, SeedSpec::new(1, 0)).unwrap();
    assert_eq!(full.betti(1, Backend::Rational), 0);
    let lm = lm_process(5, 1, SeedSpec::new(2, 0)).unwrap();
    assert_eq!(lm.complex().f_vector(), vec![5, 10]);
}

#[test]
fn shadow_examples() {
    let bare = SimplicialComplex::skeleton(5, 0).unwrap();
    assert_eq!(shadow(&bare, 1, Backend::Rational).unwrap().adders.len(), 10);
    let full = SimplicialComplex::skeleton(5, 2).unwrap();
    assert!(shadow(&full, 2, Backend::Rational).unwrap().adders.is_empty());
    let mut gens: Vec<Simplex> = SimplicialComplex::skeleton(4, 1).unwrap().simplices(1).to_vec();
    gens.push(s(&[0, 1, 2]));
    let one = SimplicialComplex::closure(4, gens).unwrap();
    assert_eq!(shadow(&one, 2, Backend::Rational).unwrap().adders.len(), 3);
    for y in [SimplicialComplex::skeleton(6, 1).unwrap(), SimplicialComplex::skeleton(6, 2).unwrap()] {
        assert!(rank_bound_check(&y, 2, Backend::Rational).unwrap().holds());
    }
}

#[test]
fn morse_examples() {
    let graph = SimplicialComplex::skeleton(5, 1).unwrap();
    let m = lex_matching(&graph, 2).unwrap();
    assert_eq!(m.critical_count(1), graph.f(1));
    let full = SimplicialComplex::skeleton(4, 2).unwrap();
    assert!(verify_acyclic(&lex_matching(&full, 2).unwrap()));
    assert_eq!(expected_critical(8, 3, 0.0).unwrap().exact, 0.0);
    assert_eq!(expected_critical(8, 3, 1.0).unwrap().exact, binomial(7, 2) as f64);
}

#[test]
fn asymptotic_examples() {
    assert_eq!(t_c(0.0, 3).unwrap(), 1.0);
    for c in [0.0, 0.3, 1.0] {
        assert_eq!(t_c(c, 1).unwrap(), 1.0);
        assert!((h(c, 1).unwrap() - (1.0 - c / 2.0)).abs() < 1e-15);
    }
    for c in [1.5, 2.0, 5.0, 20.0] {
        let t = t_c(c, 1).unwrap();
        assert!((psi(t, 1).unwrap() - c).abs() < 1e-12 * c.max(1.0), "c = {c}");
    }
    for t in [0.9, 0.99, 0.999, 0.9999] {
        let gap = (psi(t, 1).unwrap() - 1.0).abs();
        assert!(gap < 1.0 - t, "psi_1({t}) = {}", psi(t, 1).unwrap());
    }
    assert_eq!((t_star(1).unwrap(), c_star(1).unwrap()), (1.0, 1.0));
    for d in 1..=3 {
        assert_eq!(h(0.0, d).unwrap(), 1.0);
        assert!(h(60.0, d).unwrap().abs() < 1e-12);
    }
    let z4 = std::f64::consts::PI.powi(4) / 90.0;
    assert!((zeta(4).unwrap() - z4).abs() < 1e-13);
    assert!((janson_sigma2() - (6.0 * z4 - 4.0 * zeta(3).unwrap())).abs() < 1e-13);
}

#[test]
fn second_limit_constant_is_stable() {
    let base = limit_constant(2, 1e-6).unwrap();
    assert!(base.integral > 0.0 && base.conjectural);
    let longer = limit_constant_with_floor(2, 1e-6, 2.0 * base.c_max).unwrap();
    let finer = limit_constant(2, 1e-6 / 32.0).unwrap();
    assert!((base.integral - longer.integral).abs() < 1e-6);
    assert!((base.integral - finer.integral).abs() < 1e-6);
    assert!(finer.panels.len() > base.panels.len());
}

#[test]
fn identity_examples() {
    let r = verify_identity(&k3_filtration(), 1).unwrap();
    assert_eq!(r.msa, q("3/4"));
    assert_eq!(r.persistence, Extended::Finite(q("3/4")));
    assert_eq!(r.betti_integral, Extended::Finite(q("3/4")));
    let zero = Filtration::constant(SimplicialComplex::skeleton(5, 2).unwrap());
    let r = verify_identity(&zero, 2).unwrap();
    assert_eq!(r.msa, Time::zero());
    let lm = lm_process(6, 2, SeedSpec::new(9, 1)).unwrap();
    verify_identity(&lm, 2).unwrap();
    let open_cycle = Filtration::constant(SimplicialComplex::skeleton(4, 1).unwrap());
    assert!(matches!(verify_identity(&open_cycle, 1), Ok(_)));
    let hollow = Filtration::constant(SimplicialComplex::closure(4, [s(&[0, 1]), s(&[1, 2]), s(&[2, 3]), s(&[0, 3])]).unwrap());
    assert!(matches!(verify_identity(&hollow, 2), Err(Error::Domain(_))));
    let split = Filtration::constant(SimplicialComplex::closure(4, [s(&[0, 1]), s(&[2, 3])]).unwrap());
    assert!(matches!(verify_identity(&split, 1), Err(Error::Precondition { .. })));
}

#[test]
fn single_trial_is_reproducible() {
    let cfg = ExperimentConfig::new(ProcessSpec::linial_meshulam(30, 1), 1, 77);
    let a = run_trials(&cfg).unwrap();
    let b = run_trials(&cfg).unwrap();
    assert_eq!(a.trials, b.trials);
    assert_eq!(a.mean_exact, b.mean_exact);
}
