//! Gromov-Hausdorff distance as half the minimal distortion of a
//! correspondence.
//!
//! Distortion is monotone under inclusion of relations, so the minimum is
//! attained on relations of the form `graph(f) ∪ {(g(y), y) : y ∉ im f}`
//! with `f: X -> Y` and `g` defined on the points of `Y` that `f` misses.
//! The exact mode searches that family depth-first, pruning branches whose
//! partial distortion already reaches the incumbent.

use super::Metric;
use crate::error::{Error, Result};

/// Default cap on `|X| * |Y|` for exact mode.
pub const DEFAULT_GH_CAP: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhMode {
    Exact,
    LowerBound,
}

pub fn gh_distance<X: Metric + ?Sized, Y: Metric + ?Sized>(
    x: &X,
    y: &Y,
    mode: GhMode,
) -> Result<f64> {
    gh_distance_with_cap(x, y, mode, DEFAULT_GH_CAP)
}

pub fn gh_distance_with_cap<X: Metric + ?Sized, Y: Metric + ?Sized>(
    x: &X,
    y: &Y,
    mode: GhMode,
    cap: usize,
) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    match mode {
        GhMode::LowerBound => Ok((x.diameter() - y.diameter()).abs() / 2.0),
        GhMode::Exact => {
            let size = x.len() * y.len();
            if size > cap {
                return Err(Error::OverCap { size, cap });
            }
            let mut search = Search {
                x,
                y,
                pairs: Vec::new(),
                covered: vec![0; y.len()],
                // The full relation X × Y has distortion max(diam X, diam Y).
                best: x.diameter().max(y.diameter()),
            };
            search.assign_x(0, 0.0);
            Ok(search.best / 2.0)
        }
    }
}

struct Search<'a, X: ?Sized, Y: ?Sized> {
    x: &'a X,
    y: &'a Y,
    pairs: Vec<(usize, usize)>,
    covered: Vec<u32>,
    best: f64,
}

impl<X: Metric + ?Sized, Y: Metric + ?Sized> Search<'_, X, Y> {
    fn added_distortion(&self, a: usize, b: usize) -> f64 {
        self.pairs
            .iter()
            .map(|&(p, q)| (self.x.dist(a, p) - self.y.dist(b, q)).abs())
            .fold(0.0, f64::max)
    }

    fn assign_x(&mut self, i: usize, current: f64) {
        if current >= self.best {
            return;
        }
        if i == self.x.len() {
            self.assign_missing_y(0, current);
            return;
        }
        for b in 0..self.y.len() {
            let d = current.max(self.added_distortion(i, b));
            if d >= self.best {
                continue;
            }
            self.pairs.push((i, b));
            self.covered[b] += 1;
            self.assign_x(i + 1, d);
            self.covered[b] -= 1;
            self.pairs.pop();
        }
    }

    fn assign_missing_y(&mut self, from: usize, current: f64) {
        if current >= self.best {
            return;
        }
        let Some(b) = (from..self.y.len()).find(|&b| self.covered[b] == 0) else {
            self.best = current;
            return;
        };
        for a in 0..self.x.len() {
            let d = current.max(self.added_distortion(a, b));
            if d >= self.best {
                continue;
            }
            self.pairs.push((a, b));
            self.covered[b] += 1;
            self.assign_missing_y(b + 1, d);
            self.covered[b] -= 1;
            self.pairs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::from_upper(2, vec![d], false).unwrap()
    }

    /// Oracle: every relation R ⊆ X × Y with surjective projections.
    fn brute_force(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
        let cells: Vec<(usize, usize)> = (0..x.len())
            .flat_map(|a| (0..y.len()).map(move |b| (a, b)))
            .collect();
        let mut best = f64::INFINITY;
        for mask in 1u64..(1 << cells.len()) {
            let rel: Vec<_> = cells
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, c)| *c)
                .collect();
            let cx = (0..x.len()).all(|a| rel.iter().any(|p| p.0 == a));
            let cy = (0..y.len()).all(|b| rel.iter().any(|p| p.1 == b));
            if !(cx && cy) {
                continue;
            }
            let mut dis: f64 = 0.0;
            for p in &rel {
                for q in &rel {
                    dis = dis.max((x.dist(p.0, q.0) - y.dist(p.1, q.1)).abs());
                }
            }
            best = best.min(dis);
        }
        best / 2.0
    }

    #[test]
    fn reference_examples() {
        let x = two(1.0);
        assert_eq!(gh_distance(&x, &x, GhMode::Exact).unwrap(), 0.0);
        let p = FiniteMetricSpace::from_upper(1, vec![], false).unwrap();
        assert_eq!(gh_distance(&x, &p, GhMode::Exact).unwrap(), 0.5);
        assert_eq!(gh_distance(&x, &two(3.0), GhMode::Exact).unwrap(), 1.0);
    }

    #[test]
    fn matches_relation_enumeration() {
        let x = FiniteMetricSpace::from_upper(3, vec![1.0, 2.0, 1.5], false).unwrap();
        let y = FiniteMetricSpace::from_upper(2, vec![0.7], false).unwrap();
        let z = FiniteMetricSpace::from_upper(3, vec![3.0, 1.0, 2.5], false).unwrap();
        assert_eq!(
            gh_distance(&x, &y, GhMode::Exact).unwrap(),
            brute_force(&x, &y)
        );
        assert_eq!(
            gh_distance(&x, &z, GhMode::Exact).unwrap(),
            brute_force(&x, &z)
        );
        assert_eq!(
            gh_distance(&y, &z, GhMode::Exact).unwrap(),
            brute_force(&y, &z)
        );
    }

    #[test]
    fn over_cap_advises_lower_bound() {
        let x = FiniteMetricSpace::from_points(
            &(0..7).map(|i| vec![i as f64]).collect::<Vec<_>>(),
            Default::default(),
        );
        let err = gh_distance(&x, &x, GhMode::Exact).unwrap_err();
        assert!(err.to_string().contains("lower_bound"));
        assert_eq!(gh_distance(&x, &two(1.0), GhMode::LowerBound).unwrap(), 2.5);
    }
}
