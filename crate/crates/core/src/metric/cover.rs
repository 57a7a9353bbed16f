//! Covering numbers, separated nets and Nagata covering certificates.

use serde::{Deserialize, Serialize};

use super::{Covering, Metric};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverOptions {
    /// Largest point count accepted by [`CoverMode::Exact`].
    pub exact_cap: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        Self { exact_cap: 24 }
    }
}

/// Minimal (exact) or greedy number of closed `eps`-balls centred at points
/// of `x` needed to cover `x`.
pub fn covering_number<M: Metric + ?Sized>(x: &M, eps: f64, mode: CoverMode) -> Result<usize> {
    covering_number_with(x, eps, mode, &CoverOptions::default())
}

pub fn covering_number_with<M: Metric + ?Sized>(
    x: &M,
    eps: f64,
    mode: CoverMode,
    opts: &CoverOptions,
) -> Result<usize> {
    covering(x, eps, mode, opts).map(|c| c.len())
}

/// Centres of a covering by closed `eps`-balls.
pub fn covering<M: Metric + ?Sized>(
    x: &M,
    eps: f64,
    mode: CoverMode,
    opts: &CoverOptions,
) -> Result<Vec<usize>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    match mode {
        CoverMode::Greedy => Ok(separated_net(x, eps)),
        CoverMode::Exact => {
            if x.len() > opts.exact_cap {
                return Err(Error::OverCap {
                    size: x.len(),
                    cap: opts.exact_cap,
                });
            }
            Ok(exact_cover(x, eps))
        }
    }
}

/// Greedy `eps`-separated net in index order. Pairwise distances exceed
/// `eps` and every point lies within `eps` of the net.
pub fn separated_net<M: Metric + ?Sized>(x: &M, eps: f64) -> Vec<usize> {
    let mut net: Vec<usize> = Vec::new();
    for p in 0..x.len() {
        if net.iter().all(|&q| x.dist(p, q) > eps) {
            net.push(p);
        }
    }
    net
}

type Bits = Vec<u64>;

fn bits_with(n: usize, members: impl IntoIterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for i in members {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

/// Branch-and-bound set cover over the balls `B̄(c, eps)`.
fn exact_cover<M: Metric + ?Sized>(x: &M, eps: f64) -> Vec<usize> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let balls: Vec<Bits> = (0..n)
        .map(|c| bits_with(n, x.closed_ball(c, eps)))
        .collect();
    // Drop balls contained in another ball (keeping the lowest index among
    // equal balls); any cover can be rewritten to use the dominating one.
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            !(0..n).any(|j| {
                j != i
                    && is_subset(&balls[i], &balls[j])
                    && (!is_subset(&balls[j], &balls[i]) || j < i)
            })
        })
        .collect();
    let max_ball = candidates
        .iter()
        .map(|&c| count(&balls[c]))
        .max()
        .unwrap_or(1)
        .max(1);

    let mut best = separated_net(x, eps);
    let mut chosen = Vec::new();
    let uncovered = bits_with(n, 0..n);
    branch(
        &balls,
        &candidates,
        max_ball,
        &uncovered,
        &mut chosen,
        &mut best,
    );
    best
}

fn branch(
    balls: &[Bits],
    candidates: &[usize],
    max_ball: usize,
    uncovered: &Bits,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    let left = count(uncovered);
    if left == 0 {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    if chosen.len() + left.div_ceil(max_ball) >= best.len() {
        return;
    }
    let first = uncovered
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
        .unwrap();
    for &c in candidates {
        if balls[c][first / 64] >> (first % 64) & 1 == 0 {
            continue;
        }
        let next: Bits = uncovered
            .iter()
            .zip(&balls[c])
            .map(|(u, b)| u & !b)
            .collect();
        chosen.push(c);
        branch(balls, candidates, max_ball, &next, chosen, best);
        chosen.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NagataVerdict {
    pub pass: bool,
    /// `true` when multiplicity was checked over every subset of diameter
    /// at most `s`; `false` for the ball-probe relaxation.
    pub complete: bool,
    pub max_multiplicity: usize,
    /// First member whose diameter exceeds `c * s`, with that diameter.
    pub diameter_violation: Option<(usize, f64)>,
    /// Smallest subset of diameter at most `s` meeting more than `n + 1`
    /// members.
    pub multiplicity_witness: Option<Vec<usize>>,
}

const EXHAUSTIVE_POINT_CAP: usize = 20;

/// Check a caller-supplied `cs`-bounded covering with `s`-multiplicity at
/// most `n + 1`.
pub fn nagata_certificate_check<M: Metric + ?Sized>(
    x: &M,
    cov: &Covering,
    n: usize,
) -> Result<NagataVerdict> {
    let pts = x.len();
    let mut seen = vec![false; pts];
    for (k, m) in cov.members.iter().enumerate() {
        for &i in m {
            if i >= pts {
                return Err(Error::MalformedCovering(format!(
                    "member {k} references point {i}"
                )));
            }
            seen[i] = true;
        }
    }
    if let Some(miss) = seen.iter().position(|s| !s) {
        return Err(Error::MalformedCovering(format!(
            "point {miss} is not covered"
        )));
    }
    let s = cov.scale_s;
    let bound = cov.bound_c * s;

    let diameter_violation = cov.members.iter().enumerate().find_map(|(k, m)| {
        let d = m
            .iter()
            .flat_map(|&a| m.iter().map(move |&b| (a, b)))
            .map(|(a, b)| x.dist(a, b))
            .fold(0.0, f64::max);
        (d > bound).then_some((k, d))
    });

    let member_bits: Vec<Bits> = cov
        .members
        .iter()
        .map(|m| bits_with(pts, m.iter().copied()))
        .collect();
    let hits = |set: &[usize]| {
        member_bits
            .iter()
            .filter(|b| set.iter().any(|&i| b[i / 64] >> (i % 64) & 1 == 1))
            .count()
    };

    let (complete, max_multiplicity, witness) = if pts <= EXHAUSTIVE_POINT_CAP {
        let (max, w) = exhaustive_multiplicity(x, s, n + 1, &hits);
        (true, max, w)
    } else {
        let mut max = 0;
        let mut witness = None;
        for p in 0..pts {
            let ball = x.closed_ball(p, s / 2.0);
            let h = hits(&ball);
            if h > n + 1 && witness.is_none() {
                witness = Some(ball.clone());
            }
            max = max.max(h);
        }
        (false, max, witness)
    };

    Ok(NagataVerdict {
        pass: diameter_violation.is_none() && witness.is_none(),
        complete,
        max_multiplicity,
        diameter_violation,
        multiplicity_witness: witness,
    })
}

/// Enumerate subsets of diameter `<= s` by size, then lexicographically.
/// Returns the maximal multiplicity and the first subset exceeding `limit`.
fn exhaustive_multiplicity<M: Metric + ?Sized>(
    x: &M,
    s: f64,
    limit: usize,
    hits: &dyn Fn(&[usize]) -> usize,
) -> (usize, Option<Vec<usize>>) {
    let n = x.len();
    let close: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| x.dist(i, j) <= s)
                .fold(0u32, |m, j| m | 1 << j)
        })
        .collect();
    let mut max = 0;
    let mut witness = None;
    for size in 1..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u32, |m, &i| m | 1 << i);
            if combo.iter().all(|&i| close[i] & mask == mask) {
                let h = hits(&combo);
                max = max.max(h);
                if h > limit && witness.is_none() {
                    witness = Some(combo.clone());
                }
            }
            // Next combination in lexicographic order.
            let Some(pos) = (0..size).rev().find(|&k| combo[k] < n - size + k) else {
                break;
            };
            combo[pos] += 1;
            for k in pos + 1..size {
                combo[k] = combo[k - 1] + 1;
            }
        }
    }
    (max, witness)
}
