//! Frozen constants for the bounds whose constant is only known to exist.
//!
//! Both are fitted once on the reference sphere (octahedral mesh, unit
//! radius, `lambda = 2`) by [`fit_density_c`] and [`fit_covering_k`] and
//! stored with 25% headroom; tests re-fit them and check the frozen values
//! still sit on the safe side.

use std::f64::consts::PI;

use super::bounds::{covering_factor, density_factor};
use crate::chains::{restrict_to_ball, RestrictPolicy};
use crate::error::Result;
use crate::exact::to_f64;
use crate::generators::gen_sphere;
use crate::metric::{covering_number, CoverMode, PointCloud};

/// Density constant `C` (headroom: 0.75 times the fitted minimum).
pub const DENSITY_C: f64 = 115.0;
/// Covering constant `K` (headroom: 1.25 times the fitted maximum).
pub const COVERING_K: f64 = 0.0155;

pub const REFERENCE_LAMBDA: f64 = 2.0;
pub const REFERENCE_MESH: u32 = 4;
pub const HEADROOM: f64 = 0.25;

/// `count` points spread evenly over the unit sphere (Fibonacci lattice).
pub fn fibonacci_sphere(count: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let (s, c) = (golden * i as f64).sin_cos();
            vec![rho * c, rho * s, z]
        })
        .collect()
}

/// `count` radii spaced geometrically from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Smallest `mass(B(z, s)) / (lambda^{-6} s^2)` over the sample points and
/// radii on the reference sphere.
pub fn fit_density_c(points: &[Vec<f64>], radii: &[f64]) -> Result<f64> {
    let s = gen_sphere(REFERENCE_MESH)?;
    let factor = to_f64(&density_factor(2, REFERENCE_LAMBDA));
    let mut c = f64::INFINITY;
    for z in points {
        for &r in radii {
            let mass = restrict_to_ball(&s.chain, z, r, RestrictPolicy::Subdivide { rounds: 1 })?
                .chain
                .mass()
                .total;
            c = c.min(mass / (factor * r * r));
        }
    }
    Ok(c)
}

/// Largest `N(eps) eps^2 / (lambda^6 M(T))` on the reference sphere.
pub fn fit_covering_k(eps: &[f64], density: usize) -> Result<f64> {
    let s = gen_sphere(REFERENCE_MESH)?;
    let cloud = PointCloud::new(s.chain.support_sample(density));
    let scale = to_f64(&covering_factor(2, REFERENCE_LAMBDA)) * s.chain.mass().total;
    let mut k: f64 = 0.0;
    for &e in eps {
        k = k.max(covering_number(&cloud, e, CoverMode::Greedy)? as f64 * e * e / scale);
    }
    Ok(k)
}

/// Grid the frozen constants were fitted on.
pub fn reference_density_grid() -> (Vec<Vec<f64>>, Vec<f64>) {
    (fibonacci_sphere(20), geometric_grid(0.05, 0.5, 8))
}

pub fn reference_covering_grid() -> Vec<f64> {
    geometric_grid(0.05, 0.4, 6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_constants_keep_their_headroom() {
        let (pts, radii) = reference_density_grid();
        let c = fit_density_c(&pts, &radii).unwrap();
        assert!(
            DENSITY_C <= (1.0 - HEADROOM) * c && DENSITY_C >= (1.0 - HEADROOM) * c * 0.9,
            "{c}"
        );
        let k = fit_covering_k(&reference_covering_grid(), 4).unwrap();
        assert!(
            COVERING_K >= (1.0 + HEADROOM) * k && COVERING_K <= (1.0 + HEADROOM) * k * 1.1,
            "{k}"
        );
    }

    #[test]
    fn fibonacci_points_are_unit() {
        for p in fibonacci_sphere(20) {
            assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
