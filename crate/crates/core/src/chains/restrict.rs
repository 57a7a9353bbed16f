//! Restriction of chains to closed balls, and slices by the distance
//! function.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{EmbeddedComplex, IntegralChain};
use crate::error::{Error, Result};
use crate::geom::{euclidean, AmbientNorm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "lowercase")]
pub enum RestrictPolicy {
    /// Keep the simplices whose barycenter lies in the closed ball.
    Barycenter,
    /// Refine `rounds` times by midpoint subdivision, then cut each simplex
    /// at the exact sphere crossings of its edges.
    Subdivide { rounds: u32 },
}

impl Default for RestrictPolicy {
    fn default() -> Self {
        RestrictPolicy::Subdivide { rounds: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Restricted {
    pub chain: IntegralChain,
    pub policy: RestrictPolicy,
    /// Radius actually used (differs from the request after a nudge).
    pub radius: f64,
    pub nudged: bool,
}

/// `T ⌊ B̄(z, r)`.
pub fn restrict_to_ball(
    t: &IntegralChain,
    z: &[f64],
    r: f64,
    policy: RestrictPolicy,
) -> Result<Restricted> {
    check_ball(t, z, r)?;
    match policy {
        RestrictPolicy::Barycenter => {
            let k = t.complex();
            let norm = k.norm();
            let terms = t
                .terms()
                .iter()
                .filter(|(&p, _)| norm.dist(&k.barycenter((t.dim(), p)), z) <= r)
                .map(|(&p, &c)| (p, c));
            let chain = IntegralChain::from_terms(k.clone(), t.dim(), terms)?;
            Ok(Restricted {
                chain,
                policy,
                radius: r,
                nudged: false,
            })
        }
        RestrictPolicy::Subdivide { rounds } => {
            let (mut out, radius, nudged) = cut_chains(&[t], z, r, rounds)?;
            Ok(Restricted {
                chain: out.pop().unwrap(),
                policy,
                radius,
                nudged,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceSample {
    pub r: f64,
    pub chain: IntegralChain,
    pub mass: f64,
    pub nudged: bool,
}

/// Slices `∂(T⌊B̄(z,r)) − (∂T)⌊B̄(z,r)` at each radius, computed on one
/// conforming refinement per radius.
pub fn slice_mass_profile(
    t: &IntegralChain,
    z: &[f64],
    radii: &[f64],
    rounds: u32,
) -> Result<Vec<SliceSample>> {
    if t.dim() == 0 {
        return Err(Error::ZeroChainBoundary);
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "radii must be strictly increasing".into(),
        ));
    }
    let bt = t.boundary()?;
    radii
        .iter()
        .map(|&r| {
            check_ball(t, z, r)?;
            let (c, radius, nudged) = cut_chains(&[t, &bt], z, r, rounds)?;
            let chain = c[0].boundary()?.sub(&c[1])?;
            let mass = chain.mass().total;
            Ok(SliceSample {
                r: radius,
                chain,
                mass,
                nudged,
            })
        })
        .collect()
}

fn check_ball(t: &IntegralChain, z: &[f64], r: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {r}"
        )));
    }
    let k = t.complex();
    if k.is_abstract() {
        return Err(Error::InvalidArgument(
            "restriction needs vertex coordinates".into(),
        ));
    }
    if z.len() != k.ambient_dim() {
        return Err(Error::InvalidArgument(
            "centre dimension differs from ambient dimension".into(),
        ));
    }
    Ok(())
}

type Piece = (Vec<usize>, i64, usize);

struct CutMesh<'a> {
    vertices: Vec<Vec<f64>>,
    dist: Vec<f64>,
    mid: HashMap<(usize, usize), usize>,
    cut: HashMap<(usize, usize), usize>,
    z: &'a [f64],
}

impl CutMesh<'_> {
    fn push_vertex(&mut self, p: Vec<f64>) -> usize {
        self.dist.push(euclidean(&p, self.z));
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    fn midpoint(&mut self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&m) = self.mid.get(&key) {
            return m;
        }
        let p = self.vertices[a]
            .iter()
            .zip(&self.vertices[b])
            .map(|(x, y)| (x + y) / 2.0)
            .collect();
        let m = self.push_vertex(p);
        self.mid.insert(key, m);
        m
    }

    fn refine(&mut self, pieces: Vec<Piece>) -> Vec<Piece> {
        let mut out = Vec::with_capacity(pieces.len() * 4);
        for (s, c, tag) in pieces {
            match s.len() {
                1 => out.push((s, c, tag)),
                2 => {
                    let m = self.midpoint(s[0], s[1]);
                    out.push((vec![s[0], m], c, tag));
                    out.push((vec![m, s[1]], c, tag));
                }
                _ => {
                    let (a, b, cc) = (s[0], s[1], s[2]);
                    let (ab, bc, ca) = (
                        self.midpoint(a, b),
                        self.midpoint(b, cc),
                        self.midpoint(cc, a),
                    );
                    for t in [[a, ab, ca], [ab, b, bc], [ca, bc, cc], [ab, bc, ca]] {
                        out.push((t.to_vec(), c, tag));
                    }
                }
            }
        }
        out
    }

    /// Sphere crossing on the edge from inside vertex `a` to outside `b`.
    fn crossing(&mut self, a: usize, b: usize, r: f64) -> usize {
        if let Some(&v) = self.cut.get(&(a, b)) {
            return v;
        }
        let (p, q) = (&self.vertices[a], &self.vertices[b]);
        let d: Vec<f64> = q.iter().zip(p).map(|(x, y)| x - y).collect();
        let w: Vec<f64> = p.iter().zip(self.z).map(|(x, y)| x - y).collect();
        let qa: f64 = d.iter().map(|x| x * x).sum();
        let qb: f64 = 2.0 * d.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>();
        let qc: f64 = w.iter().map(|x| x * x).sum::<f64>() - r * r;
        let t = ((-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa)).clamp(0.0, 1.0);
        let pt = p.iter().zip(&d).map(|(x, y)| x + t * y).collect();
        let v = self.push_vertex(pt);
        self.cut.insert((a, b), v);
        v
    }

    fn cut_piece(&mut self, (s, c, tag): Piece, r: f64, out: &mut Vec<Piece>) {
        let inside: Vec<bool> = s.iter().map(|&v| self.dist[v] < r).collect();
        let n_in = inside.iter().filter(|&&b| b).count();
        if n_in == s.len() {
            out.push((s, c, tag));
            return;
        }
        if n_in == 0 {
            return;
        }
        match s.len() {
            2 => {
                let (a, b) = (s[0], s[1]);
                if inside[0] {
                    let p = self.crossing(a, b, r);
                    out.push((vec![a, p], c, tag));
                } else {
                    let p = self.crossing(b, a, r);
                    out.push((vec![p, b], c, tag));
                }
            }
            _ => {
                // Rotate cyclically (orientation preserving) into a
                // canonical pattern.
                let rot = |k: usize| [s[k], s[(k + 1) % 3], s[(k + 2) % 3]];
                if n_in == 1 {
                    let k = inside.iter().position(|&b| b).unwrap();
                    let [a, b, cc] = rot(k);
                    let (pab, pac) = (self.crossing(a, b, r), self.crossing(a, cc, r));
                    out.push((vec![a, pab, pac], c, tag));
                } else {
                    let k = (inside.iter().position(|&b| !b).unwrap() + 1) % 3;
                    let [a, b, cc] = rot(k);
                    let (pbc, pac) = (self.crossing(b, cc, r), self.crossing(a, cc, r));
                    out.push((vec![a, b, pbc], c, tag));
                    out.push((vec![a, pbc, pac], c, tag));
                }
            }
        }
    }
}

/// Restrict several chains on one complex to the ball, on a common
/// refined complex.
fn cut_chains(
    chains: &[&IntegralChain],
    z: &[f64],
    r: f64,
    rounds: u32,
) -> Result<(Vec<IntegralChain>, f64, bool)> {
    let k = chains[0].complex().clone();
    if k.norm() != AmbientNorm::Euclidean {
        return Err(Error::InvalidArgument(
            "subdivide policy requires a Euclidean ambient".into(),
        ));
    }
    if chains.iter().any(|c| c.dim() > 2) {
        return Err(Error::InvalidArgument(
            "subdivide policy supports chains of dimension <= 2".into(),
        ));
    }
    let vdist: Vec<f64> = k.vertices().iter().map(|v| euclidean(v, z)).collect();

    let mut all_inside = true;
    let mut pieces: Vec<Piece> = Vec::new();
    for (tag, c) in chains.iter().enumerate() {
        for (&p, &coef) in c.terms() {
            let s = k.simplex((c.dim(), p));
            let near = s.iter().map(|&v| vdist[v]).fold(f64::INFINITY, f64::min);
            let far = s.iter().map(|&v| vdist[v]).fold(0.0, f64::max);
            all_inside &= far <= r;
            let mut edge: f64 = 0.0;
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    edge = edge.max(euclidean(&k.vertices()[s[i]], &k.vertices()[s[j]]));
                }
            }
            if near - edge <= r {
                pieces.push((s.to_vec(), coef, tag));
            }
        }
    }
    if all_inside {
        return Ok((chains.iter().map(|c| (*c).clone()).collect(), r, false));
    }
    if pieces.is_empty() {
        return Ok((
            chains
                .iter()
                .map(|c| IntegralChain::zero(k.clone(), c.dim()))
                .collect(),
            r,
            false,
        ));
    }

    let mut mesh = CutMesh {
        vertices: k.vertices().to_vec(),
        dist: vdist,
        mid: HashMap::new(),
        cut: HashMap::new(),
        z,
    };
    for _ in 0..rounds {
        pieces = mesh.refine(pieces);
    }
    // Vertices exactly on the sphere make the cut ambiguous; move the
    // radius off them.
    let mut radius = r;
    let mut nudged = false;
    let used = |pieces: &[Piece]| {
        let mut u: Vec<usize> = pieces.iter().flat_map(|p| p.0.iter().copied()).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    let used = used(&pieces);
    while used.iter().any(|&v| mesh.dist[v] == radius) {
        radius += 1e-9 * radius;
        nudged = true;
    }

    let mut cut = Vec::with_capacity(pieces.len());
    for p in pieces {
        mesh.cut_piece(p, radius, &mut cut);
    }
    let simplices: Vec<Vec<usize>> = cut.iter().map(|p| p.0.clone()).collect();
    let refined = Arc::new(EmbeddedComplex::from_simplices(
        mesh.vertices,
        AmbientNorm::Euclidean,
        &simplices,
    )?);
    let mut out: Vec<IntegralChain> = chains
        .iter()
        .map(|c| IntegralChain::zero(refined.clone(), c.dim()))
        .collect();
    for (s, coef, tag) in cut {
        let (pos, sign) = refined.find(&s).expect("piece is listed");
        out[tag].add_term(pos, sign * coef);
    }
    Ok((out, radius, nudged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_square() -> IntegralChain {
        let k = Arc::new(
            EmbeddedComplex::from_simplices(
                vec![
                    vec![0.0, 0.0],
                    vec![1.0, 0.0],
                    vec![1.0, 1.0],
                    vec![0.0, 1.0],
                ],
                AmbientNorm::Euclidean,
                &[vec![0, 1, 2], vec![0, 2, 3]],
            )
            .unwrap(),
        );
        IntegralChain::from_terms(k, 2, [(0, 1), (1, 1)]).unwrap()
    }

    /// Oracle: quarter-disc area by midpoint-rule Monte Carlo on a grid.
    fn quarter_disc_grid(r: f64) -> f64 {
        let n = 2000;
        let h = 1.0 / n as f64;
        let mut inside = 0usize;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                if x * x + y * y <= r * r {
                    inside += 1;
                }
            }
        }
        inside as f64 * h * h
    }

    #[test]
    fn whole_and_disjoint_balls() {
        let t = unit_square();
        for policy in [
            RestrictPolicy::Barycenter,
            RestrictPolicy::Subdivide { rounds: 2 },
        ] {
            let all = restrict_to_ball(&t, &[0.5, 0.5], 1.0, policy).unwrap();
            assert_eq!(all.chain, t);
            let none = restrict_to_ball(&t, &[5.0, 5.0], 1.0, policy).unwrap();
            assert!(none.chain.is_zero());
        }
    }

    #[test]
    fn quarter_disc() {
        let t = unit_square();
        let target = quarter_disc_grid(0.5);
        assert!((target - PI / 16.0).abs() < 1e-3);
        let one = restrict_to_ball(
            &t,
            &[0.0, 0.0],
            0.5,
            RestrictPolicy::Subdivide { rounds: 1 },
        )
        .unwrap();
        let three = restrict_to_ball(
            &t,
            &[0.0, 0.0],
            0.5,
            RestrictPolicy::Subdivide { rounds: 3 },
        )
        .unwrap();
        let e1 = (one.chain.mass().total - target).abs() / target;
        let e3 = (three.chain.mass().total - target).abs() / target;
        // Edge midpoints at distance exactly 0.5 trigger the nudge.
        assert!(one.nudged && one.radius > 0.5);
        assert!(e3 < 0.02, "three rounds: relative error {e3}");
        assert!(e3 < e1);
    }

    #[test]
    fn disc_slices_are_circles() {
        // Fan disc of radius 1 with 256 rim vertices.
        let n = 256;
        let mut v = vec![vec![0.0, 0.0]];
        v.extend((0..n).map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            vec![a.cos(), a.sin()]
        }));
        let tris: Vec<Vec<usize>> = (0..n).map(|i| vec![0, 1 + i, 1 + (i + 1) % n]).collect();
        let k =
            Arc::new(EmbeddedComplex::from_simplices(v, AmbientNorm::Euclidean, &tris).unwrap());
        let t = IntegralChain::from_terms(
            k.clone(),
            2,
            (0..n).map(|i| (k.find(&tris[i]).unwrap().0, k.find(&tris[i]).unwrap().1)),
        )
        .unwrap();
        let prof = slice_mass_profile(&t, &[0.0, 0.0], &[0.25, 0.5, 0.75], 0).unwrap();
        for s in prof {
            let rel = (s.mass - 2.0 * PI * s.r).abs() / (2.0 * PI * s.r);
            assert!(rel < 0.05, "r = {}: {} vs {}", s.r, s.mass, 2.0 * PI * s.r);
            assert!(s.chain.boundary().unwrap().is_zero());
        }
        let far = slice_mass_profile(&t, &[10.0, 0.0], &[1.0, 2.0], 1).unwrap();
        assert!(far.iter().all(|s| s.chain.is_zero()));
    }
}
