use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chains::EmbeddedComplex;
use crate::error::{Error, Result};
use crate::metric::Metric;

pub const DEFAULT_SIMPLEX_CAP: usize = 200_000;

/// Vietoris–Rips complex: every set of at most `max_dim + 1` points with
/// pairwise distances `<= r`, as an abstract complex with unit volumes.
pub fn rips_complex<M: Metric + ?Sized>(
    x: &M,
    r: f64,
    max_dim: usize,
    cap: usize,
) -> Result<EmbeddedComplex> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Rips scale must be non-negative, got {r}"
        )));
    }
    let simplices = cliques(x, r, max_dim, cap)?;
    EmbeddedComplex::abstract_complex(x.len(), &simplices)
}

/// Cliques of size 2..=max_dim+1 in lexicographic order.
fn cliques<M: Metric + ?Sized>(
    x: &M,
    r: f64,
    max_dim: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = x.len();
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| x.dist(i, j) <= r).collect())
        .collect();
    let mut out = Vec::new();
    let mut count = n;
    fn grow(
        simplex: &mut Vec<usize>,
        cand: &[usize],
        nbrs: &[Vec<usize>],
        max_len: usize,
        out: &mut Vec<Vec<usize>>,
        count: &mut usize,
        cap: usize,
    ) -> Result<()> {
        for (k, &v) in cand.iter().enumerate() {
            simplex.push(v);
            *count += 1;
            if *count > cap {
                return Err(Error::TooManySimplices { count: *count, cap });
            }
            out.push(simplex.clone());
            if simplex.len() < max_len {
                let next: Vec<usize> = cand[k + 1..]
                    .iter()
                    .copied()
                    .filter(|w| nbrs[v].binary_search(w).is_ok())
                    .collect();
                grow(simplex, &next, nbrs, max_len, out, count, cap)?;
            }
            simplex.pop();
        }
        Ok(())
    }
    if max_dim >= 1 {
        for i in 0..n {
            let mut s = vec![i];
            grow(
                &mut s,
                &nbrs[i],
                &nbrs,
                max_dim + 1,
                &mut out,
                &mut count,
                cap,
            )?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillRadius {
    /// Smallest grid scale at which the cycle bounds (`inf` if none).
    pub value: f64,
    pub grid: Vec<f64>,
    /// Homology is tested over the rationals.
    pub coefficients: String,
}

type Col = BTreeMap<u32, BigRational>;

/// Smallest `r` in the grid at which `cycle` (vertex tuples with integer
/// coefficients, all of one dimension `m >= 1`) is a boundary in the Rips
/// complex of `x` at scale `r`. The grid defaults to the sorted distinct
/// pairwise distances not below the cycle's largest simplex diameter.
pub fn filling_radius<M: Metric + ?Sized>(
    x: &M,
    cycle: &[(Vec<usize>, i64)],
    grid: Option<&[f64]>,
    cap: usize,
) -> Result<FillRadius> {
    let m = cycle.first().map_or(1, |(s, _)| s.len().saturating_sub(1));
    if m == 0 || cycle.iter().any(|(s, _)| s.len() != m + 1) {
        return Err(Error::InvalidArgument(
            "cycle simplices must share one dimension >= 1".into(),
        ));
    }
    let diam = |s: &[usize]| {
        let mut d: f64 = 0.0;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                d = d.max(x.dist(s[i], s[j]));
            }
        }
        d
    };
    if cycle.iter().flat_map(|(s, _)| s).any(|&v| v >= x.len()) {
        return Err(Error::InvalidArgument("cycle vertex out of range".into()));
    }

    // Signed, sorted target vector on m-simplices.
    let mut target: HashMap<Vec<usize>, i64> = HashMap::new();
    for (s, c) in cycle {
        let mut key = s.clone();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("degenerate cycle simplex".into()));
        }
        *target.entry(key).or_insert(0) += c * crate::chains::parity_of(s);
    }
    target.retain(|_, c| *c != 0);
    // Boundary check.
    let mut bd: HashMap<Vec<usize>, i64> = HashMap::new();
    for (s, c) in &target {
        for i in 0..=m {
            let mut f = s.clone();
            f.remove(i);
            *bd.entry(f).or_insert(0) += if i % 2 == 0 { *c } else { -c };
        }
    }
    if bd.values().any(|&c| c != 0) {
        return Err(Error::NotACycle);
    }
    let cycle_diam = target.keys().map(|s| diam(s)).fold(0.0, f64::max);

    let grid: Vec<f64> = match grid {
        Some(g) => {
            if g.is_empty() || g.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidArgument(
                    "grid must be non-empty and increasing".into(),
                ));
            }
            if cycle_diam > g[0] {
                return Err(Error::NotOnRips);
            }
            g.to_vec()
        }
        None => {
            let mut d: Vec<f64> = Vec::new();
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    let v = x.dist(i, j);
                    if v >= cycle_diam {
                        d.push(v);
                    }
                }
            }
            d.push(cycle_diam);
            d.sort_by(f64::total_cmp);
            d.dedup();
            d
        }
    };
    let result = |value: f64| FillRadius {
        value,
        grid: grid.clone(),
        coefficients: "rational".into(),
    };
    if target.is_empty() {
        return Ok(result(grid[0]));
    }

    // Edges up to the largest scale, in filtration order (length, then
    // lexicographic). A simplex enters with its last edge in this order.
    let n = x.len();
    let rmax = *grid.last().unwrap();
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = x.dist(i, j);
            if d <= rmax {
                edges.push((d, i, j));
            }
        }
    }
    edges.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| (a.1, a.2).cmp(&(b.1, b.2)))
    });
    let mut order = vec![u32::MAX; n * n];
    for (k, &(_, i, j)) in edges.iter().enumerate() {
        order[i * n + j] = k as u32;
        order[j * n + i] = k as u32;
    }

    let mut face_index: HashMap<Vec<usize>, u32> = HashMap::new();
    let mut index_of = |f: Vec<usize>| {
        let next = face_index.len() as u32;
        *face_index.entry(f).or_insert(next)
    };
    let mut tvec: Col = Col::new();
    for (s, &c) in &target {
        tvec.insert(index_of(s.clone()), BigRational::from_integer(c.into()));
    }
    let mut pivots: HashMap<u32, Col> = HashMap::new();
    let mut added = 0usize;
    let mut next_edge = 0;
    for &r in &grid {
        while next_edge < edges.len() && edges[next_edge].0 <= r {
            let (_, u, v) = edges[next_edge];
            let e = next_edge as u32;
            next_edge += 1;
            let cand: Vec<usize> = (0..n)
                .filter(|&w| order[u * n + w] < e && order[v * n + w] < e)
                .collect();
            let mut extra = Vec::new();
            for_each_clique(&cand, m, &order, n, e, &mut Vec::new(), &mut extra);
            for others in extra {
                added += 1;
                if added > cap {
                    return Err(Error::TooManySimplices { count: added, cap });
                }
                let mut s = vec![u, v];
                s.extend(others);
                s.sort_unstable();
                let mut col = Col::new();
                for i in 0..=m + 1 {
                    let mut f = s.clone();
                    f.remove(i);
                    let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                    col.insert(index_of(f), BigRational::from_integer(sign.into()));
                }
                reduce(&mut col, &pivots);
                if let Some((&p, _)) = col.iter().next_back() {
                    pivots.insert(p, col);
                }
            }
        }
        reduce(&mut tvec, &pivots);
        if tvec.is_empty() {
            return Ok(result(r));
        }
    }
    Ok(result(f64::INFINITY))
}

/// All `k`-subsets of `cand` whose pairwise edges precede edge `e`.
fn for_each_clique(
    cand: &[usize],
    k: usize,
    order: &[u32],
    n: usize,
    e: u32,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        out.push(cur.clone());
        return;
    }
    for (i, &w) in cand.iter().enumerate() {
        if cur.iter().all(|&c| order[c * n + w] < e) {
            cur.push(w);
            for_each_clique(&cand[i + 1..], k - 1, order, n, e, cur, out);
            cur.pop();
        }
    }
}

/// Eliminate the lowest entry against stored pivot columns until it is
/// new or the column vanishes. Pivot columns are normalised lazily.
fn reduce(col: &mut Col, pivots: &HashMap<u32, Col>) {
    while let Some((&low, coef)) = col.iter().next_back() {
        let Some(p) = pivots.get(&low) else { return };
        let f = coef / &p[&low];
        for (k, v) in p {
            let e = col.entry(*k).or_insert_with(BigRational::zero);
            *e -= &f * v;
            if e.is_zero() {
                col.remove(k);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AmbientNorm;
    use crate::metric::FiniteMetricSpace;

    #[test]
    fn rips_examples() {
        let eq = FiniteMetricSpace::from_upper(3, vec![1.0, 1.0, 1.0], false).unwrap();
        let k = rips_complex(&eq, 1.0, 2, DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!((k.count(1), k.count(2)), (3, 1));
        let k = rips_complex(&eq, 0.9, 2, DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!((k.count(0), k.count(1)), (3, 0));
        let sq = FiniteMetricSpace::from_points(
            &[
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
            AmbientNorm::Euclidean,
        );
        let k = rips_complex(&sq, 1.0, 2, DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!((k.count(1), k.count(2)), (4, 0));
        assert!(matches!(
            rips_complex(&sq, 2.0, 3, 10),
            Err(Error::TooManySimplices { .. })
        ));
    }

    #[test]
    fn triangle_cycle_bounds_when_the_face_appears() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.5]];
        let x = FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean);
        let cycle = vec![(vec![0, 1], 1), (vec![1, 2], 1), (vec![2, 0], 1)];
        let e_max = 1.25f64.sqrt();
        let fr = filling_radius(&x, &cycle, Some(&[e_max, 2.0]), DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!(fr.value, e_max);
        let zero = filling_radius(&x, &[], Some(&[0.5, 1.0]), DEFAULT_SIMPLEX_CAP).unwrap();
        assert_eq!(zero.value, 0.5);
        assert_eq!(
            filling_radius(&x, &cycle, Some(&[0.5]), DEFAULT_SIMPLEX_CAP),
            Err(Error::NotOnRips)
        );
        assert_eq!(
            filling_radius(&x, &cycle[..2], None, DEFAULT_SIMPLEX_CAP),
            Err(Error::NotACycle)
        );
    }
}
