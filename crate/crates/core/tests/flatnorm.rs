use std::sync::Arc;

use gmtlab::chains::IntegralChain;
use gmtlab::flatnorm::{
    filling_radius, filling_volume, flat_norm, solve_filling, FillOptions, FillingProblem, Objective, SolverChoice,
};
use gmtlab::generators::gen_sphere;
use gmtlab::geom::AmbientNorm;
use gmtlab::harness::enumerate_filling;
use gmtlab::metric::FiniteMetricSpace;
use num_traits::ToPrimitive;

/// The equatorial 4-cycle of the octahedron, oriented around the z axis.
fn octahedron_equator() -> IntegralChain {
    let s = gen_sphere(0).unwrap();
    let k = s.complex.clone();
    let at = |p: [f64; 3]| k.vertices().iter().position(|v| v.as_slice() == p).unwrap();
    let ring = [at([1.0, 0.0, 0.0]), at([0.0, 1.0, 0.0]), at([-1.0, 0.0, 0.0]), at([0.0, -1.0, 0.0])];
    let terms: Vec<(usize, i64)> = (0..4)
        .map(|i| {
            let (p, sign) = k.find(&[ring[i], ring[(i + 1) % 4]]).unwrap();
            (p, sign)
        })
        .collect();
    IntegralChain::from_terms(k, 1, terms).unwrap()
}

#[test]
fn octahedron_equator_fills_with_four_faces() {
    let t = octahedron_equator();
    assert!(t.boundary().unwrap().is_zero());
    // Four equilateral faces of side sqrt 2.
    let closed = 4.0 * 3f64.sqrt() / 2.0;
    let k = t.complex().clone();
    let p = FillingProblem::new(k.clone(), &t, Objective::FillVolume).unwrap();
    let w = filling_volume(&p).unwrap();
    assert!((w.value - closed).abs() < 1e-12, "{}", w.value);
    assert_eq!(w.s.terms().len(), 4);
    assert!(w.verify(&t).is_ok());
    let brute = enumerate_filling(&p.clone().with_bound(2), 2).unwrap().unwrap();
    assert_eq!(brute, w.value_exact);
    // The cycle itself costs 4 sqrt 2 > 2 sqrt 3, so the flat norm fills too.
    let f = flat_norm(&t, &k).unwrap();
    assert_eq!(f.value_exact, w.value_exact);
}

#[test]
fn solvers_agree_on_sphere_cycles() {
    let s = gen_sphere(1).unwrap();
    let k = s.complex.clone();
    // Boundary of a few faces, with multiplicity.
    let faces = IntegralChain::from_terms(k.clone(), 2, vec![(0, 1), (3, 2), (7, -1), (12, 1)]).unwrap();
    let t = faces.boundary().unwrap();
    for objective in [Objective::FillVolume, Objective::FlatNorm] {
        let p = FillingProblem::new(k.clone(), &t, objective).unwrap();
        let values: Vec<_> = [SolverChoice::Auto, SolverChoice::Simplex, SolverChoice::Network]
            .into_iter()
            .map(|solver| solve_filling(&p, &FillOptions { solver, ..Default::default() }).unwrap().value_exact)
            .collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
        assert!(values[0].to_f64().unwrap() <= faces.mass().total + 1e-12);
    }
}

fn polygon(sides: usize) -> (FiniteMetricSpace, Vec<(Vec<usize>, i64)>) {
    let pts: Vec<Vec<f64>> = (0..sides)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / sides as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let cycle = (0..sides).map(|i| (vec![i, (i + 1) % sides], 1)).collect();
    (FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean), cycle)
}

#[test]
fn unit_side_hexagon_fills_at_the_short_diagonal() {
    let (x, cycle) = polygon(6);
    let f = filling_radius(&x, &cycle, None, 10_000).unwrap();
    assert!((f.value - 3f64.sqrt()).abs() < 1e-12, "{}", f.value);
    assert_eq!(f.coefficients, "rational");
    // Reversed orientation and doubled multiplicity change nothing.
    let rev: Vec<_> = cycle.iter().map(|(s, c)| (s.clone(), -c)).collect();
    let dbl: Vec<_> = cycle.iter().map(|(s, c)| (s.clone(), 2 * c)).collect();
    for c in [rev, dbl] {
        assert_eq!(filling_radius(&x, &c, None, 10_000).unwrap().value, f.value);
    }
}

#[test]
fn square_fills_only_at_the_diagonal() {
    let (x, cycle) = polygon(4);
    let f = filling_radius(&x, &cycle, None, 10_000).unwrap();
    assert!((f.value - 2.0).abs() < 1e-12);
    let f = filling_radius(&x, &cycle, Some(&[1.5, 2.5]), 10_000).unwrap();
    assert_eq!(f.value, 2.5);
}

#[test]
fn non_cycle_is_rejected() {
    let (x, mut cycle) = polygon(5);
    cycle.pop();
    assert!(filling_radius(&x, &cycle, None, 10_000).is_err());
    let k = Arc::new(gmtlab::harness::grid_disc(1).unwrap());
    let open = IntegralChain::from_terms(k.clone(), 1, vec![(0, 1)]).unwrap();
    let p = FillingProblem::new(k, &open, Objective::FillVolume).unwrap();
    assert!(filling_volume(&p).is_err());
}
