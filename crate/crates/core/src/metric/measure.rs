//! Finite-scale estimators for Hausdorff measure and densities.

use serde::{Deserialize, Serialize};

use super::{Metric, WeightedMeasure};
use crate::error::{Error, Result};
use crate::exact::unit_ball_volume;

/// `μ(B̄(z, r))`.
pub fn ball_measure<M: Metric + ?Sized>(mu: &WeightedMeasure, x: &M, z: usize, r: f64) -> f64 {
    (0..x.len())
        .filter(|&j| x.dist(z, j) <= r)
        .map(|j| mu.weights()[j])
        .sum()
}

/// Two-sided estimate of `H^m` for a finite sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureBounds {
    pub lower: f64,
    pub lower_delta: f64,
    pub upper: f64,
    pub upper_delta: f64,
    /// Certified `K` with `μ(B̄(z, r)) <= K r^m` for `r` in
    /// `[resolution, lower_delta)`.
    pub growth_constant: f64,
    /// Smallest positive distance; scales below it see isolated points.
    pub resolution: f64,
}

/// Smallest positive pairwise distance (`inf` if there is none).
fn resolution<M: Metric + ?Sized>(x: &M) -> f64 {
    let mut r = f64::INFINITY;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = x.dist(i, j);
            if d > 0.0 {
                r = r.min(d);
            }
        }
    }
    r
}

/// Greedy partition into members of diameter `< delta`, in index order.
/// Returns the member diameters.
fn greedy_partition<M: Metric + ?Sized>(x: &M, delta: f64) -> Vec<f64> {
    let n = x.len();
    let mut used = vec![false; n];
    let mut diams = Vec::new();
    for p in 0..n {
        if used[p] {
            continue;
        }
        used[p] = true;
        let mut member = vec![p];
        let mut diam: f64 = 0.0;
        for q in p + 1..n {
            if used[q] || x.dist(p, q) >= delta {
                continue;
            }
            let reach = member.iter().map(|&a| x.dist(a, q)).fold(0.0, f64::max);
            if reach < delta {
                used[q] = true;
                member.push(q);
                diam = diam.max(reach);
            }
        }
        diams.push(diam);
    }
    diams
}

/// Upper estimate: the least greedy-cover sum `Σ ω_m (diam/2)^m` over
/// schedule scales above the sample resolution.
///
/// Lower estimate: the mass-distribution bound `ω_m 2^{-m} μ(X) / K`, where
/// `K` is certified as the largest `μ(B̄(z, r)) / r^m` over every point `z`
/// and every radius in `[resolution, δ_0)`. The ratio is a step function
/// divided by `r^m`, so checking radii at pairwise distances is exhaustive.
/// Covers by sets finer than the resolution are outside the certificate.
/// `mu` defaults to the uniform probability measure.
pub fn hausdorff_measure_bounds<M: Metric + ?Sized>(
    x: &M,
    m: u32,
    deltas: &[f64],
    mu: Option<&WeightedMeasure>,
) -> Result<MeasureBounds> {
    if m == 0 {
        return Err(Error::ZeroDimension);
    }
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    if deltas.is_empty()
        || deltas.iter().any(|d| !(*d > 0.0))
        || deltas.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidArgument(
            "delta schedule must be positive and strictly decreasing".into(),
        ));
    }
    let uniform;
    let mu = match mu {
        Some(mu) if mu.len() != x.len() => {
            return Err(Error::InvalidArgument(
                "measure and space sizes differ".into(),
            ));
        }
        Some(mu) => mu,
        None => {
            uniform = WeightedMeasure::uniform(x.len(), 1.0)?;
            &uniform
        }
    };
    let omega = unit_ball_volume(m);
    let res = resolution(x);
    let mi = m as i32;

    let (upper, upper_delta) = if res.is_infinite() {
        (0.0, deltas[0])
    } else {
        deltas
            .iter()
            .filter(|&&d| d > res)
            .map(|&d| {
                let sum: f64 = greedy_partition(x, d)
                    .iter()
                    .map(|s| omega * (s / 2.0).powi(mi))
                    .sum();
                (sum, d)
            })
            .fold((f64::INFINITY, deltas[0]), |best, c| {
                if c.0 < best.0 {
                    c
                } else {
                    best
                }
            })
    };
    if upper.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "no schedule scale exceeds the sample resolution {res}"
        )));
    }

    let delta0 = deltas[0];
    let mut k: f64 = 0.0;
    for z in 0..x.len() {
        let mut radii: Vec<f64> = (0..x.len())
            .map(|j| x.dist(z, j))
            .filter(|&r| r >= res && r < delta0)
            .collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        for r in radii {
            k = k.max(ball_measure(mu, x, z, r) / r.powi(mi));
        }
    }
    let lower = if k > 0.0 {
        omega * 2f64.powi(-mi) * mu.total() / k
    } else {
        0.0
    };

    Ok(MeasureBounds {
        lower,
        lower_delta: delta0,
        upper,
        upper_delta,
        growth_constant: k,
        resolution: res,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    /// Radius at which the minimum was attained.
    pub radius: f64,
    pub schedule: Vec<f64>,
}

/// `min_r μ(B̄(z, r)) / (ω_m r^m)` over a finite radius schedule.
pub fn lower_density<M: Metric + ?Sized>(
    mu: &WeightedMeasure,
    x: &M,
    z: usize,
    m: u32,
    radii: &[f64],
) -> Result<DensityEstimate> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("empty radius schedule".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(
            "radii must be positive and sorted descending".into(),
        ));
    }
    if z >= x.len() || mu.len() != x.len() {
        return Err(Error::InvalidArgument(
            "point index or measure size out of range".into(),
        ));
    }
    let omega = unit_ball_volume(m);
    let (value, radius) = radii
        .iter()
        .map(|&r| (ball_measure(mu, x, z, r) / (omega * r.powi(m as i32)), r))
        .fold((f64::INFINITY, radii[0]), |best, c| {
            if c.0 < best.0 {
                c
            } else {
                best
            }
        });
    Ok(DensityEstimate {
        value,
        radius,
        schedule: radii.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdict {
    pub pass: bool,
    /// `(x, x', x'')` with `max(d(x,x''), d(x',x'')) < d(x,x')`.
    pub witness: Option<(usize, usize, usize)>,
}

/// Check the strong triangle inequality on every triple. The first
/// violation in order `x < x'` (lexicographic), then `x''` is reported.
pub fn rectifiability_witness_check(x: &super::FiniteMetricSpace) -> Result<WitnessVerdict> {
    if !x.is_ultrametric() {
        return Err(Error::NotUltrametric);
    }
    let n = x.len();
    for a in 0..n {
        for b in a + 1..n {
            let d = x.dist(a, b);
            for c in 0..n {
                if x.dist(a, c).max(x.dist(b, c)) < d {
                    return Ok(WitnessVerdict {
                        pass: false,
                        witness: Some((a, b, c)),
                    });
                }
            }
        }
    }
    Ok(WitnessVerdict {
        pass: true,
        witness: None,
    })
}
