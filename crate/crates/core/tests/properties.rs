use std::collections::BTreeSet;
use std::sync::Arc;

use gmtlab::chains::{push_forward, EmbeddedComplex, IntegralChain};
use gmtlab::flatnorm::{flat_distance, solve_filling, FillOptions, FillingProblem, Objective, SolverChoice};
use gmtlab::harness::grid_disc;
use gmtlab::metric::{covering_number, gh_distance, hausdorff_distance, CoverMode, FiniteMetricSpace, GhMode};
use gmtlab::geom::AmbientNorm;
use proptest::prelude::*;

/// Top simplices of dimension `top` on `n` vertices, each in a shuffled
/// vertex order so orientations are mixed.
fn tops(n: usize, top: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    let one = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), top + 1).prop_shuffle();
    proptest::collection::vec(one, 1..6).prop_map(|ss| {
        let mut seen = BTreeSet::new();
        ss.into_iter()
            .filter(|s| {
                let mut k = s.clone();
                k.sort_unstable();
                seen.insert(k)
            })
            .collect()
    })
}

fn chain_on(k: &Arc<EmbeddedComplex>, dim: usize, coefs: &[i64]) -> IntegralChain {
    let terms: Vec<(usize, i64)> = coefs.iter().enumerate().take(k.count(dim)).map(|(p, &c)| (p, c)).collect();
    IntegralChain::from_terms(k.clone(), dim, terms).unwrap()
}

fn flat_grid() -> Arc<EmbeddedComplex> {
    Arc::new(grid_disc(2).unwrap())
}

fn one_chain() -> impl Strategy<Value = Vec<i64>> {
    // grid_disc(2) has 16 edges; mostly zero coefficients.
    proptest::collection::vec(prop_oneof![4 => Just(0i64), 1 => -2i64..=2], 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_of_boundary_vanishes(
        top in 2usize..=3,
        simplices in tops(7, 3),
        coefs in proptest::collection::vec(-3i64..=3, 40),
    ) {
        let simplices: Vec<Vec<usize>> = simplices.into_iter().map(|s| s[..=top].to_vec()).collect();
        let k = Arc::new(EmbeddedComplex::abstract_complex(7, &dedup(simplices)).unwrap());
        let t = chain_on(&k, top, &coefs);
        prop_assert!(t.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn mass_is_absolutely_homogeneous(coefs in one_chain(), s in -4i64..=4) {
        let k = flat_grid();
        let t = chain_on(&k, 1, &coefs);
        let lhs = t.scale(s).mass().total;
        let rhs = s.unsigned_abs() as f64 * t.mass().total;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn push_forward_commutes_with_boundary(
        simplices in tops(6, 2),
        coefs in proptest::collection::vec(-3i64..=3, 30),
        map in proptest::collection::vec(0usize..4, 6),
    ) {
        let k = Arc::new(EmbeddedComplex::abstract_complex(6, &simplices).unwrap());
        let target = Arc::new(EmbeddedComplex::abstract_complex(4, &[vec![0, 1, 2, 3]]).unwrap());
        let t = chain_on(&k, 2, &coefs);
        let a = push_forward(&t, &target, &map).unwrap().boundary().unwrap();
        let b = push_forward(&t.boundary().unwrap(), &target, &map).unwrap();
        prop_assert_eq!(a.terms(), b.terms());
    }

    #[test]
    fn hausdorff_distance_is_a_metric_on_subsets(
        pts in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 2), 12),
        a in proptest::sample::subsequence((0..12).collect::<Vec<_>>(), 1..6),
        b in proptest::sample::subsequence((0..12).collect::<Vec<_>>(), 1..6),
        c in proptest::sample::subsequence((0..12).collect::<Vec<_>>(), 1..6),
    ) {
        let x = FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean);
        let d = |p: &[usize], q: &[usize]| hausdorff_distance(p, q, &x).unwrap();
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= (d(&a, &b) + d(&b, &c)) * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gh_distance_is_symmetric_and_vanishes_on_isometric_copies(
        pts in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 5),
        other in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 4),
        perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let x = FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean);
        let y = FiniteMetricSpace::from_points(&other, AmbientNorm::Euclidean);
        let copy = x.subspace(&perm);
        prop_assert_eq!(gh_distance(&x, &copy, GhMode::Exact).unwrap(), 0.0);
        prop_assert_eq!(gh_distance(&x, &y, GhMode::Exact).unwrap(), gh_distance(&y, &x, GhMode::Exact).unwrap());
    }

    #[test]
    fn covering_numbers_are_antitone_and_greedy_is_never_below_exact(
        pts in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 10),
        e1 in 0.05f64..0.6,
        e2 in 0.05f64..0.6,
    ) {
        let x = FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean);
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let exact = |e| covering_number(&x, e, CoverMode::Exact).unwrap();
        prop_assert!(exact(hi) <= exact(lo));
        prop_assert!(covering_number(&x, lo, CoverMode::Greedy).unwrap() >= exact(lo));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flat_distance_is_symmetric_and_satisfies_the_triangle_inequality(
        a in one_chain(), b in one_chain(), c in one_chain(),
    ) {
        let k = flat_grid();
        let (a, b, c) = (chain_on(&k, 1, &a), chain_on(&k, 1, &b), chain_on(&k, 1, &c));
        let f = |p: &IntegralChain, q: &IntegralChain| flat_distance(p, q, &k).unwrap().value_exact;
        let (ab, ba, bc, ac) = (f(&a, &b), f(&b, &a), f(&b, &c), f(&a, &c));
        prop_assert_eq!(&ab, &ba);
        prop_assert!(ac <= ab + bc);
    }

    #[test]
    fn flat_norm_never_exceeds_mass(coefs in one_chain()) {
        let k = flat_grid();
        let t = chain_on(&k, 1, &coefs);
        let w = flat_distance(&t, &IntegralChain::zero(k.clone(), 1), &k).unwrap();
        prop_assert!(w.value <= t.mass().total + 1e-12);
        prop_assert!(w.verify(&t).is_ok());
    }

    #[test]
    fn network_and_simplex_solvers_agree(coefs in one_chain()) {
        let k = Arc::new(grid_disc(2).unwrap());
        let t = chain_on(&k, 1, &coefs);
        let p = FillingProblem::new(k, &t, Objective::FlatNorm).unwrap();
        let solve = |solver| solve_filling(&p, &FillOptions { solver, ..Default::default() }).unwrap().value_exact;
        prop_assert_eq!(solve(SolverChoice::Network), solve(SolverChoice::Simplex));
    }
}

fn dedup(ss: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    ss.into_iter()
        .filter(|s| {
            let mut k = s.clone();
            k.sort_unstable();
            seen.insert(k)
        })
        .collect()
}
