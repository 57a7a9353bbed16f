//! Dense two-phase simplex over exact rationals, with a depth-first
//! branch-and-bound for integer solutions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

/// `min c·x` subject to `A x = b`, `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Q>,
    pub c: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Reduced costs and (negated) objective value.
    cost: Vec<Q>,
    obj: Q,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let nz: Vec<usize> = (0..self.rows[r].len())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let (prow, prhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.rows[i][j] -= d;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.cost[j] -= d;
            }
            self.obj -= &f * &prhs;
        }
        self.basis[r] = col;
    }

    /// Bland's rule: smallest entering index, ratio ties to the smallest
    /// basic index. Returns `false` if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let m = lp.a.len();
    let n = lp.c.len();
    // Phase 1: artificial columns n..n+m on rows with non-negative rhs.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in lp.a.iter().zip(&lp.b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Q> = row
            .iter()
            .map(|v| if flip { -v } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi } else { bi.clone() });
    }
    let mut cost = vec![Q::zero(); n + m];
    let mut obj = Q::zero();
    for i in 0..m {
        for j in 0..n {
            cost[j] -= &rows[i][j];
        }
        obj -= &rhs[i];
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        cost,
        obj,
    };
    t.optimize(n + m);
    if !t.obj.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, col);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    // Phase 2.
    for r in t.rows.iter_mut() {
        r.truncate(n);
    }
    t.cost = lp.c.clone();
    t.obj = Q::zero();
    for i in 0..t.rows.len() {
        let cb = lp.c[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..n {
            let d = &cb * &t.rows[i][j];
            t.cost[j] -= d;
        }
        t.obj -= &cb * &t.rhs[i];
    }
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        x[b] = t.rhs[i].clone();
    }
    LpOutcome::Optimal { x, value: -t.obj }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    /// The root relaxation was already integral.
    LpRelaxation,
    /// Branch-and-bound closed every branch.
    CertifiedIntegral,
    /// Node budget exhausted; best integer point found so far.
    Incumbent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IlpOutcome {
    Optimal {
        x: Vec<BigInt>,
        value: Q,
        optimality: Optimality,
    },
    Infeasible,
    Unbounded,
}

fn floor(q: &Q) -> BigInt {
    q.floor().to_integer()
}

/// Integer minimisation by depth-first branch-and-bound on the first
/// fractional variable. `upper` optionally bounds every variable from
/// above (a coefficient box).
pub fn solve_integer(
    lp: &LinearProgram,
    upper: Option<&[Option<BigInt>]>,
    node_limit: usize,
) -> IlpOutcome {
    let n = lp.c.len();
    let mut bounds: Vec<(BigInt, Option<BigInt>)> = (0..n)
        .map(|j| (BigInt::zero(), upper.and_then(|u| u[j].clone())))
        .collect();
    let mut best: Option<(Vec<BigInt>, Q)> = None;
    let mut nodes = 0usize;
    let mut root_integral = false;
    let mut exhausted = false;
    let mut unbounded = false;
    branch(
        lp,
        &mut bounds,
        &mut best,
        &mut nodes,
        node_limit,
        &mut root_integral,
        &mut exhausted,
        &mut unbounded,
    );
    if unbounded && best.is_none() {
        return IlpOutcome::Unbounded;
    }
    match best {
        None => IlpOutcome::Infeasible,
        Some((x, value)) => {
            let optimality = if exhausted {
                Optimality::Incumbent
            } else if root_integral {
                Optimality::LpRelaxation
            } else {
                Optimality::CertifiedIntegral
            };
            IlpOutcome::Optimal {
                x,
                value,
                optimality,
            }
        }
    }
}

/// LP with shifted lower bounds and extra upper-bound rows.
fn bounded_lp(lp: &LinearProgram, bounds: &[(BigInt, Option<BigInt>)]) -> (LinearProgram, Vec<Q>) {
    let n = lp.c.len();
    let lo: Vec<Q> = bounds
        .iter()
        .map(|(l, _)| Q::from_integer(l.clone()))
        .collect();
    let ups: Vec<usize> = (0..n).filter(|&j| bounds[j].1.is_some()).collect();
    let total = n + ups.len();
    let mut a = Vec::with_capacity(lp.a.len() + ups.len());
    let mut b = Vec::with_capacity(lp.a.len() + ups.len());
    for (row, bi) in lp.a.iter().zip(&lp.b) {
        let shift: Q = row
            .iter()
            .zip(&lo)
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, l)| v * l)
            .sum();
        let mut r = row.clone();
        r.resize(total, Q::zero());
        a.push(r);
        b.push(bi - shift);
    }
    for (k, &j) in ups.iter().enumerate() {
        let mut r = vec![Q::zero(); total];
        r[j] = Q::one();
        r[n + k] = Q::one();
        a.push(r);
        b.push(Q::from_integer(bounds[j].1.clone().unwrap()) - &lo[j]);
    }
    let mut c = lp.c.clone();
    c.resize(total, Q::zero());
    (LinearProgram { a, b, c }, lo)
}

#[allow(clippy::too_many_arguments)]
fn branch(
    lp: &LinearProgram,
    bounds: &mut Vec<(BigInt, Option<BigInt>)>,
    best: &mut Option<(Vec<BigInt>, Q)>,
    nodes: &mut usize,
    node_limit: usize,
    root_integral: &mut bool,
    exhausted: &mut bool,
    unbounded: &mut bool,
) {
    if *nodes >= node_limit {
        *exhausted = true;
        return;
    }
    let is_root = *nodes == 0;
    *nodes += 1;
    if bounds
        .iter()
        .any(|(l, u)| u.as_ref().is_some_and(|u| u < l))
    {
        return;
    }
    let (sub, lo) = bounded_lp(lp, bounds);
    let n = lp.c.len();
    let (x, value) = match solve(&sub) {
        LpOutcome::Infeasible => return,
        LpOutcome::Unbounded => {
            *unbounded = true;
            return;
        }
        LpOutcome::Optimal { x, value } => {
            let x: Vec<Q> = x[..n].iter().zip(&lo).map(|(v, l)| v + l).collect();
            let value = value + lp.c.iter().zip(&lo).map(|(c, l)| c * l).sum::<Q>();
            (x, value)
        }
    };
    if best.as_ref().is_some_and(|(_, v)| value >= *v) {
        return;
    }
    match x.iter().position(|v| !v.is_integer()) {
        None => {
            if is_root {
                *root_integral = true;
            }
            *best = Some((x.iter().map(|v| v.to_integer()).collect(), value));
        }
        Some(j) => {
            let f = floor(&x[j]);
            let saved = bounds[j].clone();
            let down = Some(saved.1.clone().map_or(f.clone(), |u| u.min(f.clone())));
            bounds[j].1 = down;
            branch(
                lp,
                bounds,
                best,
                nodes,
                node_limit,
                root_integral,
                exhausted,
                unbounded,
            );
            bounds[j] = saved.clone();
            bounds[j].0 = saved.0.clone().max(f + 1);
            branch(
                lp,
                bounds,
                best,
                nodes,
                node_limit,
                root_integral,
                exhausted,
                unbounded,
            );
            bounds[j] = saved;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn qi(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
        let lp = LinearProgram {
            a: vec![
                vec![qi(1), qi(2), qi(1), qi(0)],
                vec![qi(3), qi(1), qi(0), qi(1)],
            ],
            b: vec![qi(4), qi(6)],
            c: vec![qi(-1), qi(-1), qi(0), qi(0)],
        };
        match solve(&lp) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x[0], q(8, 5));
                assert_eq!(x[1], q(6, 5));
                assert_eq!(value, q(-14, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            a: vec![vec![qi(1)], vec![qi(1)]],
            b: vec![qi(1), qi(2)],
            c: vec![qi(0)],
        };
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
        let lp = LinearProgram {
            a: vec![vec![qi(1), qi(-1)]],
            b: vec![qi(0)],
            c: vec![qi(-1), qi(0)],
        };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let lp = LinearProgram {
            a: vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]],
            b: vec![qi(1), qi(2)],
            c: vec![qi(1), qi(2)],
        };
        assert!(matches!(solve(&lp), LpOutcome::Optimal { value, .. } if value == qi(1)));
    }

    #[test]
    fn branch_and_bound_knapsack() {
        // min -5a - 4b  s.t. 6a + 4b + s = 9, a, b integer >= 0.
        // Relaxation is fractional; integer optimum a = 0, b = 2.
        let lp = LinearProgram {
            a: vec![vec![qi(6), qi(4), qi(1)]],
            b: vec![qi(9)],
            c: vec![qi(-5), qi(-4), qi(0)],
        };
        match solve_integer(&lp, None, 1000) {
            IlpOutcome::Optimal {
                x,
                value,
                optimality,
            } => {
                assert_eq!(value, qi(-8));
                assert_eq!(x[1], BigInt::from(2));
                assert_eq!(optimality, Optimality::CertifiedIntegral);
            }
            other => panic!("{other:?}"),
        }
    }
}
