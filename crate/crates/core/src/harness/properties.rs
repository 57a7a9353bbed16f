//! Seeded sweeps of the algebraic and metric invariants.
//!
//! Each case draws a small random instance from a ChaCha stream, so a
//! sweep is a pure function of its seed and case counts.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::ExperimentReport;
use crate::chains::{push_forward, EmbeddedComplex, IntegralChain};
use crate::error::Result;
use crate::flatnorm::flat_distance;
use crate::geom::AmbientNorm;
use crate::metric::{hausdorff_distance, FiniteMetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCounts {
    pub boundary: usize,
    pub flat_norm: usize,
    pub push_forward: usize,
    pub hausdorff: usize,
}

impl Default for PropertyCounts {
    fn default() -> Self {
        Self {
            boundary: 1000,
            flat_norm: 200,
            push_forward: 100,
            hausdorff: 1000,
        }
    }
}

/// Relative slack on the Hausdorff triangle inequality: the distances are
/// rounded square roots.
pub const HAUSDORFF_SLACK: f64 = 1e-12;

/// Random abstract complex: `n` vertices and a few top simplices of
/// dimension `top` in shuffled vertex order (mixed orientations).
fn random_complex(
    rng: &mut ChaCha8Rng,
    n: usize,
    top: usize,
    count: usize,
) -> Result<EmbeddedComplex> {
    let verts: Vec<usize> = (0..n).collect();
    let tops: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut s: Vec<usize> = verts.choose_multiple(rng, top + 1).copied().collect();
            s.shuffle(rng);
            s
        })
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let tops: Vec<Vec<usize>> = tops
        .into_iter()
        .filter(|s| {
            let mut k = s.clone();
            k.sort_unstable();
            seen.insert(k)
        })
        .collect();
    EmbeddedComplex::abstract_complex(n, &tops)
}

fn random_chain(
    rng: &mut ChaCha8Rng,
    k: &Arc<EmbeddedComplex>,
    dim: usize,
    terms: usize,
    coef: i64,
) -> Result<IntegralChain> {
    let count = k.count(dim);
    let t: Vec<(usize, i64)> = (0..terms)
        .map(|_| (rng.gen_range(0..count), rng.gen_range(-coef..=coef)))
        .collect();
    IntegralChain::from_terms(k.clone(), dim, t)
}

/// `n x n` unit-square grid split into right triangles.
pub fn grid_disc(n: usize) -> Result<EmbeddedComplex> {
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut verts = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            verts.push(vec![i as f64 / n as f64, j as f64 / n as f64]);
        }
    }
    let mut tris = Vec::new();
    for i in 0..n {
        for j in 0..n {
            tris.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            tris.push(vec![idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    EmbeddedComplex::from_simplices(verts, AmbientNorm::Euclidean, &tris)
}

/// Zero failures expected for each of:
///
/// * `∂∂T = 0` on random 2- and 3-chains;
/// * `F(a - c) <= F(a - b) + F(b - c)` and `F(a - b) = F(b - a)`, exactly,
///   for random 1-chains on a triangulated square;
/// * `f#(∂T) = ∂(f#T)` for random vertex maps into a full simplex;
/// * `d_H(A, C) <= d_H(A, B) + d_H(B, C)` on random subsets of a point
///   cloud.
pub fn check_properties(seed: u64, counts: &PropertyCounts) -> Result<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ExperimentReport::new("properties");
    rep.input("seed", seed);
    rep.input("counts", counts);

    let mut fails = 0usize;
    for _ in 0..counts.boundary {
        let n = rng.gen_range(4..=8);
        let top = rng.gen_range(2..=3);
        let count = rng.gen_range(1..=6);
        let k = Arc::new(random_complex(&mut rng, n, top, count)?);
        let t = random_chain(&mut rng, &k, top, 6, 3)?;
        if !t.boundary()?.boundary()?.is_zero() {
            fails += 1;
        }
    }
    rep.value("boundary_failures", fails.into());
    rep.subcheck(
        "boundary_squared_zero",
        fails == 0,
        0.0,
        format!("{fails} of {} random chains", counts.boundary),
    );

    let disc = Arc::new(grid_disc(3)?);
    let (mut tri_fails, mut sym_fails) = (0usize, 0usize);
    for _ in 0..counts.flat_norm {
        let a = random_chain(&mut rng, &disc, 1, 3, 1)?;
        let b = random_chain(&mut rng, &disc, 1, 3, 1)?;
        let c = random_chain(&mut rng, &disc, 1, 3, 1)?;
        let ab = flat_distance(&a, &b, &disc)?.value_exact;
        let ba = flat_distance(&b, &a, &disc)?.value_exact;
        let bc = flat_distance(&b, &c, &disc)?.value_exact;
        let ac = flat_distance(&a, &c, &disc)?.value_exact;
        if ab != ba {
            sym_fails += 1;
        }
        if ac > &ab + &bc {
            tri_fails += 1;
        }
    }
    rep.value("flat_triangle_failures", tri_fails.into());
    rep.value("flat_symmetry_failures", sym_fails.into());
    rep.subcheck(
        "flat_triangle",
        tri_fails == 0,
        0.0,
        format!("{tri_fails} of {} random triples", counts.flat_norm),
    );
    rep.subcheck(
        "flat_symmetry",
        sym_fails == 0,
        0.0,
        format!("{sym_fails} of {} random pairs", counts.flat_norm),
    );

    let full: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    let target = Arc::new(EmbeddedComplex::abstract_complex(4, &full)?);
    let mut fails = 0usize;
    for _ in 0..counts.push_forward {
        let n = rng.gen_range(3..=7);
        let count = rng.gen_range(1..=5);
        let k = Arc::new(random_complex(&mut rng, n, 2, count)?);
        let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let t = random_chain(&mut rng, &k, 2, 5, 3)?;
        if push_forward(&t.boundary()?, &target, &f)?
            != push_forward(&t, &target, &f)?.boundary()?
        {
            fails += 1;
        }
    }
    rep.value("push_forward_failures", fails.into());
    rep.subcheck(
        "push_forward_commutes",
        fails == 0,
        0.0,
        format!("{fails} of {} random maps", counts.push_forward),
    );

    let pts: Vec<Vec<f64>> = (0..16)
        .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
        .collect();
    let x = FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean);
    let mut fails = 0usize;
    let subset = |rng: &mut ChaCha8Rng| {
        let size = rng.gen_range(1..=8);
        let mut s: Vec<usize> = (0..16)
            .collect::<Vec<_>>()
            .choose_multiple(rng, size)
            .copied()
            .collect();
        s.sort_unstable();
        s
    };
    for _ in 0..counts.hausdorff {
        let (a, b, c) = (subset(&mut rng), subset(&mut rng), subset(&mut rng));
        let ac = hausdorff_distance(&a, &c, &x)?;
        let rhs = hausdorff_distance(&a, &b, &x)? + hausdorff_distance(&b, &c, &x)?;
        if ac > rhs * (1.0 + HAUSDORFF_SLACK) {
            fails += 1;
        }
    }
    rep.value("hausdorff_triangle_failures", fails.into());
    rep.subcheck(
        "hausdorff_triangle",
        fails == 0,
        HAUSDORFF_SLACK,
        format!("{fails} of {} random subset triples", counts.hausdorff),
    );
    rep.settle();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes_and_is_seeded() {
        let counts = PropertyCounts {
            boundary: 20,
            flat_norm: 5,
            push_forward: 10,
            hausdorff: 20,
        };
        let a = check_properties(7, &counts).unwrap();
        assert_eq!(a.verdict, super::super::Verdict::Pass, "{}", a.to_json());
        assert_eq!(a.to_json(), check_properties(7, &counts).unwrap().to_json());
    }
}
