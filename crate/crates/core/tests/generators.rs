use std::f64::consts::PI;
use std::time::Instant;

use gmtlab::flatnorm::{flat_norm, FillMethod};
use gmtlab::generators::{
    frostman_weights, gen_ellipsoid, gen_sphere, gen_torus, gen_tower, gen_ultrametric, TowerParams,
};
use gmtlab::metric::{ball_measure, hausdorff_distance_points, Metric};

#[test]
fn torus_masses_follow_the_product_area() {
    for n in [1u32, 2, 4, 8] {
        let t = gen_torus(n, 64).unwrap();
        let exact = 4.0 * PI * PI / n as f64;
        let mass = t.chain.mass().total;
        assert!(
            (mass / exact - 1.0).abs() < 0.01,
            "n = {n}: {mass} vs {exact}"
        );
        assert!(t.chain.boundary().unwrap().is_zero());
    }
}

#[test]
fn torus_is_at_distance_one_over_n_from_its_core_circle() {
    let n = 4;
    let t = gen_torus(n, 32).unwrap();
    let circle: Vec<Vec<f64>> = (0..512)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / 512.0).sin_cos();
            vec![c, s, 0.0, 0.0]
        })
        .collect();
    let d = hausdorff_distance_points(&t.chain.support_sample(8), &circle).unwrap();
    assert!((d - 1.0 / n as f64).abs() < 0.01, "{d}");
}

#[test]
fn ellipsoid_mass_and_distance_to_the_disc() {
    let e = gen_ellipsoid(1, 64).unwrap();
    let mass = e.chain.mass().total;
    assert!((mass / (4.0 * PI) - 1.0).abs() < 0.01, "{mass}");
    let mut disc = Vec::new();
    for i in -40i32..=40 {
        for j in -40i32..=40 {
            let (x, y) = (i as f64 / 40.0, j as f64 / 40.0);
            if x * x + y * y <= 1.0 {
                disc.push(vec![x, y, 0.0]);
            }
        }
    }
    for n in [1u32, 4, 16, 64] {
        let e = gen_ellipsoid(n, 32).unwrap();
        let d = hausdorff_distance_points(&e.chain.support_sample(4), &disc).unwrap();
        let exact = 1.0 / (n as f64).sqrt();
        assert!((d / exact - 1.0).abs() < 0.05, "n = {n}: {d}");
    }
}

#[test]
fn ellipsoid_flat_norm_is_close_to_the_enclosed_volume() {
    let start = Instant::now();
    let e = gen_ellipsoid(16, 32).unwrap();
    let w = flat_norm(&e.ambient_chain().unwrap(), &e.ambient).unwrap();
    let exact = 4.0 / 3.0 * PI / 4.0;
    eprintln!(
        "flat {} vs {exact} via {:?} in {:?}",
        w.value,
        w.method,
        start.elapsed()
    );
    assert!((w.value / exact - 1.0).abs() < 0.1);
    assert_eq!(w.method, FillMethod::Network);
}

#[test]
fn sphere_cone_fill_volume() {
    let s = gen_sphere(2).unwrap();
    let w = flat_norm(&s.ambient_chain().unwrap(), &s.ambient).unwrap();
    let vol: f64 = s.ambient.volumes(3).iter().sum();
    assert!((w.value - vol).abs() < 1e-9, "{} vs {vol}", w.value);
}

#[test]
fn tower_sandwich_at_stage_two() {
    let t = gen_tower(&TowerParams::new(2, 2, 0.5, 2, 1).unwrap()).unwrap();
    eprintln!("nodes {} edges {}", t.n_nodes(), t.n_edges());
    for k in [1u32, 2] {
        let a = 0.5f64.powi(k as i32);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for m in t.markers.iter().filter(|m| m.stage == k) {
            for &b in m.base.iter().filter(|&&b| t.is_coarse(b)) {
                let d = t.distances_from(&[b]);
                for &r in &m.roof {
                    lo = lo.min(d[r]);
                    hi = hi.max(d[r]);
                }
            }
        }
        eprintln!("stage {k}: [{lo}, {hi}] vs [{a}, {}]", 3.0 * a);
        assert!(lo >= 0.9 * a && hi <= 1.1 * 3.0 * a);
    }
}

#[test]
fn frostman_ball_measures() {
    let u = gen_ultrametric(4, 2, 3).unwrap();
    let mu = frostman_weights(4, 3, &u.space).unwrap();
    for z in 0..u.len() {
        for k in 1..=3 {
            let r = 0.5f64.powi(k);
            assert_eq!(ball_measure(&mu, &u.space, z, r), 4f64.powi(-(k - 1)));
            assert!(ball_measure(&mu, &u.space, z, r) <= 16.0 * r * r);
        }
    }
    assert_eq!(u.space.diameter(), 0.5);
}
