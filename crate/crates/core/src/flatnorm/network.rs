//! Integer L1 tension problems
//!
//! ```text
//! min  Σ_e w_e |t_e − (p_tail(e) − p_head(e))|   over integer labels p, p_root = 0
//! ```
//!
//! solved through their dual, the max-weight circulation
//! `max Σ t_e g_e` with `|g_e| <= w_e`. Negative-cost arcs are saturated
//! first; the resulting imbalances are routed by a primal-dual min-cost
//! flow (Dijkstra on reduced costs, then blocking flows on the zero-cost
//! arcs). Final node potentials are optimal labels, and the primal and
//! dual objective values are compared exactly.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensionEdge {
    pub tail: usize,
    pub head: usize,
    /// Non-negative weight (scaled to an integer).
    pub weight: i128,
    pub t: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensionSolution {
    pub labels: Vec<i64>,
    pub primal: i128,
    pub dual: i128,
    pub flow: Vec<i128>,
}

struct Graph {
    head: Vec<usize>,
    cap: Vec<i128>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(n: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Arc pair `u -> v` (index returned) and `v -> u`.
    fn add(&mut self, u: usize, v: usize, cap_uv: i128, cap_vu: i128, cost: i64) -> usize {
        let a = self.head.len();
        self.head.extend([v, u]);
        self.cap.extend([cap_uv, cap_vu]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(a);
        self.adj[v].push(a + 1);
        a
    }

    fn tail(&self, a: usize) -> usize {
        self.head[a ^ 1]
    }
}

pub fn solve_tension(nodes: usize, root: usize, edges: &[TensionEdge]) -> Result<TensionSolution> {
    if root >= nodes
        || edges
            .iter()
            .any(|e| e.tail >= nodes || e.head >= nodes || e.weight < 0)
    {
        return Err(Error::Solver("malformed tension problem".into()));
    }
    let (s, t) = (nodes, nodes + 1);
    let mut g = Graph::new(nodes + 2);
    let mut excess = vec![0i128; nodes];
    let mut arcs = Vec::with_capacity(edges.len());
    for e in edges {
        // Residuals start at (w, w) with g = 0; saturate the negative side.
        let (mut fwd, mut bwd) = (e.weight, e.weight);
        if e.t > 0 {
            fwd = 0;
            bwd = 2 * e.weight;
            excess[e.head] += e.weight;
            excess[e.tail] -= e.weight;
        } else if e.t < 0 {
            fwd = 2 * e.weight;
            bwd = 0;
            excess[e.tail] += e.weight;
            excess[e.head] -= e.weight;
        }
        arcs.push(g.add(e.tail, e.head, fwd, bwd, -e.t));
    }
    let mut supply = 0i128;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            g.add(s, v, x, 0, 0);
            supply += x;
        } else if x < 0 {
            g.add(v, t, -x, 0, 0);
        }
    }

    let n = nodes + 2;
    let mut pi = vec![0i64; n];
    let mut routed = 0i128;
    while routed < supply {
        let dist = dijkstra(&g, &pi, s);
        let Some(dt) = dist[t] else {
            return Err(Error::Solver("circulation could not be balanced".into()));
        };
        for v in 0..n {
            pi[v] += dist[v].map_or(dt, |d| d.min(dt));
        }
        loop {
            let pushed = blocking_flow(&mut g, &pi, s, t);
            if pushed == 0 {
                break;
            }
            routed += pushed;
        }
    }

    let labels: Vec<i64> = (0..nodes).map(|v| pi[v] - pi[root]).collect();
    let mut primal = 0i128;
    let mut dual = 0i128;
    let mut flow = Vec::with_capacity(edges.len());
    let mut balance = vec![0i128; nodes];
    for (e, &a) in edges.iter().zip(&arcs) {
        let gf = e.weight - g.cap[a];
        flow.push(gf);
        balance[e.head] += gf;
        balance[e.tail] -= gf;
        let slack = e.t - (labels[e.tail] - labels[e.head]);
        primal += e.weight * slack.unsigned_abs() as i128;
        dual += e.t as i128 * gf;
    }
    if balance.iter().any(|&b| b != 0) {
        return Err(Error::Solver("flow is not a circulation".into()));
    }
    if primal != dual {
        return Err(Error::Solver(format!(
            "duality gap: primal {primal} != dual {dual}"
        )));
    }
    Ok(TensionSolution {
        labels,
        primal,
        dual,
        flow,
    })
}

fn reduced(g: &Graph, pi: &[i64], a: usize) -> i64 {
    g.cost[a] + pi[g.tail(a)] - pi[g.head[a]]
}

fn dijkstra(g: &Graph, pi: &[i64], s: usize) -> Vec<Option<i64>> {
    let mut dist: Vec<Option<i64>> = vec![None; g.adj.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0i64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u] != Some(d) {
            continue;
        }
        for &a in &g.adj[u] {
            if g.cap[a] == 0 {
                continue;
            }
            let v = g.head[a];
            let nd = d + reduced(g, pi, a);
            if dist[v].is_none_or(|old| nd < old) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// One Dinic phase on the admissible (zero reduced cost) residual arcs.
fn blocking_flow(g: &mut Graph, pi: &[i64], s: usize, t: usize) -> i128 {
    let n = g.adj.len();
    let mut level = vec![usize::MAX; n];
    level[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &a in &g.adj[u] {
            let v = g.head[a];
            if g.cap[a] > 0 && level[v] == usize::MAX && reduced(g, pi, a) == 0 {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if level[t] == usize::MAX {
        return 0;
    }
    let mut next = vec![0usize; n];
    let mut total = 0i128;
    loop {
        // Iterative DFS along level-increasing admissible arcs.
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                break;
            }
            let mut advanced = false;
            while next[u] < g.adj[u].len() {
                let a = g.adj[u][next[u]];
                let v = g.head[a];
                if g.cap[a] > 0 && level[v] == level[u] + 1 && reduced(g, pi, a) == 0 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                if u == s {
                    return total;
                }
                // Dead end: retreat and skip the arc that led here.
                level[u] = usize::MAX;
                let a = path.pop().unwrap();
                u = g.tail(a);
                next[u] += 1;
            }
        }
        let push = path.iter().map(|&a| g.cap[a]).min().unwrap();
        for &a in &path {
            g.cap[a] -= push;
            g.cap[a ^ 1] += push;
        }
        total += push;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: enumerate labels in a box.
    fn brute(nodes: usize, root: usize, edges: &[TensionEdge], range: i64) -> i128 {
        let free: Vec<usize> = (0..nodes).filter(|&v| v != root).collect();
        let mut best = i128::MAX;
        let span = (2 * range + 1) as usize;
        for code in 0..span.pow(free.len() as u32) {
            let mut p = vec![0i64; nodes];
            let mut c = code;
            for &v in &free {
                p[v] = (c % span) as i64 - range;
                c /= span;
            }
            let val: i128 = edges
                .iter()
                .map(|e| e.weight * (e.t - (p[e.tail] - p[e.head])).unsigned_abs() as i128)
                .sum();
            best = best.min(val);
        }
        best
    }

    #[test]
    fn matches_label_enumeration() {
        let e = |tail, head, weight, t| TensionEdge {
            tail,
            head,
            weight,
            t,
        };
        let cases = vec![
            vec![
                e(1, 0, 3, 1),
                e(2, 0, 5, 0),
                e(1, 2, 1, 2),
                e(2, 3, 4, -1),
                e(3, 0, 2, 1),
            ],
            vec![
                e(1, 2, 1, 1),
                e(2, 3, 1, 1),
                e(3, 1, 1, 1),
                e(1, 0, 2, 0),
                e(2, 0, 2, 0),
                e(3, 0, 2, 0),
            ],
            vec![
                e(1, 2, 7, 3),
                e(2, 1, 2, -1),
                e(1, 0, 1, 0),
                e(3, 2, 6, 2),
                e(3, 0, 9, 0),
            ],
        ];
        for edges in cases {
            let sol = solve_tension(4, 0, &edges).unwrap();
            assert_eq!(sol.primal, brute(4, 0, &edges, 4), "{edges:?}");
            assert_eq!(sol.labels[0], 0);
        }
    }

    #[test]
    fn zero_problem() {
        let sol = solve_tension(
            2,
            0,
            &[TensionEdge {
                tail: 1,
                head: 0,
                weight: 5,
                t: 0,
            }],
        )
        .unwrap();
        assert_eq!(sol.primal, 0);
        assert_eq!(sol.labels, vec![0, 0]);
    }
}
