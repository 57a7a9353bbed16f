//! Exhaustive cross-check of the integer filling solver.

use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{exact, ExperimentReport};
use crate::chains::{EmbeddedComplex, IntegralChain};
use crate::error::{Error, Result};
use crate::exact::{common_dyadic_scale, rational_string, scaled_i128, unscale};
use crate::flatnorm::{solve_filling, FillOptions, FillingProblem, Objective, SolverChoice};
use crate::geom::AmbientNorm;

/// Coefficient box `{-B..B}` searched by [`enumerate_filling`].
pub const ORACLE_BOX: i64 = 2;
pub const ORACLE_MAX_CANDIDATES: usize = 12;

/// Minimum of the problem's objective over every `(m+1)`-chain with
/// coefficients in `{-bound..bound}`, in exact arithmetic; `None` when no
/// chain in the box fills the target.
///
/// Depth-first over the candidate simplices; a branch is cut only when
/// the mass already committed (chosen coefficients plus rows no later
/// candidate touches) exceeds the best complete value, so the result is
/// the exact box minimum.
pub fn enumerate_filling(problem: &FillingProblem, bound: i64) -> Result<Option<BigRational>> {
    let k = &problem.ambient;
    let t = &problem.target;
    let m = t.dim();
    let n1 = k.count(m + 1);
    let n0 = k.count(m);
    let flat = problem.objective == Objective::FlatNorm;
    let vols: Vec<f64> = k
        .volumes(m + 1)
        .iter()
        .chain(k.volumes(m))
        .copied()
        .collect();
    let scale = common_dyadic_scale(&vols);
    let int = |v: f64| {
        scaled_i128(v, scale)
            .ok_or_else(|| Error::Solver("volume does not fit the integer scale".into()))
    };
    let w1 = k
        .volumes(m + 1)
        .iter()
        .map(|&v| int(v))
        .collect::<Result<Vec<_>>>()?;
    let w0 = k
        .volumes(m)
        .iter()
        .map(|&v| int(v))
        .collect::<Result<Vec<_>>>()?;
    let cols: Vec<Vec<(usize, i64)>> = (0..n1).map(|s| k.facets(m + 1, s)).collect();
    // Last candidate touching each row; rows with none are closed from the start.
    let mut last = vec![None; n0];
    for (s, col) in cols.iter().enumerate() {
        for &(f, _) in col {
            last[f] = Some(s);
        }
    }
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); n1 + 1];
    for (f, l) in last.iter().enumerate() {
        closes[l.map_or(0, |s| s + 1)].push(f);
    }

    struct Search<'a> {
        cols: &'a [Vec<(usize, i64)>],
        closes: &'a [Vec<usize>],
        w1: &'a [i128],
        w0: &'a [i128],
        flat: bool,
        bound: i64,
        residual: Vec<i64>,
        best: Option<i128>,
    }

    impl Search<'_> {
        /// Cost of the rows closed at `depth`, or `None` when a filling
        /// leaves one of them nonzero.
        fn closed_cost(&self, depth: usize) -> Option<i128> {
            let mut c = 0i128;
            for &f in &self.closes[depth] {
                let r = self.residual[f];
                if r != 0 {
                    if !self.flat {
                        return None;
                    }
                    c += r.unsigned_abs() as i128 * self.w0[f];
                }
            }
            Some(c)
        }

        fn go(&mut self, depth: usize, cost: i128) {
            let Some(closed) = self.closed_cost(depth) else {
                return;
            };
            let cost = cost + closed;
            if self.best.is_some_and(|b| cost > b) {
                return;
            }
            if depth == self.cols.len() {
                self.best = Some(self.best.map_or(cost, |b| b.min(cost)));
                return;
            }
            for v in -self.bound..=self.bound {
                for &(f, sign) in &self.cols[depth] {
                    self.residual[f] -= sign * v;
                }
                self.go(depth + 1, cost + v.unsigned_abs() as i128 * self.w1[depth]);
                for &(f, sign) in &self.cols[depth] {
                    self.residual[f] += sign * v;
                }
            }
        }
    }

    let mut search = Search {
        cols: &cols,
        closes: &closes,
        w1: &w1,
        w0: &w0,
        flat,
        bound,
        residual: (0..n0).map(|f| t.coef(f)).collect(),
        best: None,
    };
    search.go(0, 0);
    Ok(search.best.map(|b| unscale(b, scale)))
}

/// One random instance: up to `max_candidates` triangles on dyadic points
/// of `[0, 2]^3` and a 1-chain target (a boundary for filling volume).
pub fn random_filling_instance(
    rng: &mut ChaCha8Rng,
    max_candidates: usize,
) -> Result<FillingProblem> {
    loop {
        let n = rng.gen_range(5..=8);
        let verts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..3).map(|_| rng.gen_range(0..=8) as f64 / 4.0).collect())
            .collect();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    triples.push(vec![a, b, c]);
                }
            }
        }
        let count = rng.gen_range(2..=max_candidates.min(triples.len()));
        let tris: Vec<Vec<usize>> = triples.choose_multiple(rng, count).cloned().collect();
        let Ok(k) = EmbeddedComplex::from_simplices(verts, AmbientNorm::Euclidean, &tris) else {
            continue;
        };
        let k = Arc::new(k);
        let flat = rng.gen_bool(0.5);
        let target = if flat {
            let edges = k.count(1);
            let terms: Vec<(usize, i64)> = (0..rng.gen_range(1..=4))
                .map(|_| (rng.gen_range(0..edges), rng.gen_range(-2..=2)))
                .collect();
            IntegralChain::from_terms(k.clone(), 1, terms)?
        } else {
            let terms: Vec<(usize, i64)> = (0..count).map(|s| (s, rng.gen_range(-2..=2))).collect();
            IntegralChain::from_terms(k.clone(), 2, terms)?.boundary()?
        };
        if target.is_zero() {
            continue;
        }
        let objective = if flat {
            Objective::FlatNorm
        } else {
            Objective::FillVolume
        };
        return Ok(FillingProblem::new(k, &target, objective)?.with_bound(ORACLE_BOX as u64));
    }
}

/// The branch-and-bound solver against [`enumerate_filling`] on `count`
/// seeded random instances; every value must agree exactly.
pub fn check_ilp_oracle(seed: u64, count: usize) -> Result<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ExperimentReport::new("ilp-oracle");
    rep.input("seed", seed);
    rep.input("instances", count);
    rep.input("box", ORACLE_BOX);
    rep.input("max_candidates", ORACLE_MAX_CANDIDATES);
    let opts = FillOptions {
        solver: SolverChoice::Simplex,
        ..Default::default()
    };
    let mut mismatches = Vec::new();
    let mut values = Vec::new();
    for i in 0..count {
        let p = random_filling_instance(&mut rng, ORACLE_MAX_CANDIDATES)?;
        let brute = enumerate_filling(&p, ORACLE_BOX)?.ok_or(Error::NotNullHomologous)?;
        let solved = solve_filling(&p, &opts)?.value_exact;
        if solved != brute {
            mismatches.push(format!(
                "instance {i}: solver {} vs enumeration {}",
                rational_string(&solved),
                rational_string(&brute)
            ));
        }
        values.push(exact(&brute));
    }
    rep.value("enumerated_values", values.into());
    rep.value("mismatches", mismatches.len().into());
    let detail = if mismatches.is_empty() {
        format!("{count} instances agree exactly")
    } else {
        mismatches.join("; ")
    };
    rep.subcheck("exact_agreement", mismatches.is_empty(), 0.0, detail);
    rep.tolerance("exact", 0.0);
    rep.settle();
    Ok(rep)
}
