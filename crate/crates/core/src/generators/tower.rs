use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::metric::FiniteMetricSpace;

/// Largest construction stage accepted by [`gen_tower`].
pub const MAX_STAGE: u32 = 4;
/// Largest refined 1-skeleton accepted by [`gen_tower`].
pub const MAX_NODES: usize = 3_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TowerParams {
    pub m: u32,
    pub l: u32,
    pub alpha: f64,
    /// Construction stage.
    pub n: u32,
    /// Graph refinement level: each halves the lattice spacing.
    pub mesh: u32,
}

impl TowerParams {
    pub fn new(m: u32, l: u32, alpha: f64, n: u32, mesh: u32) -> Result<Self> {
        let p = Self {
            m,
            l,
            alpha,
            n,
            mesh,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.l < 2 {
            return Err(Error::Parameter(format!(
                "need m >= 2 and L >= 2, got m = {}, L = {}",
                self.m, self.l
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "alpha = {} outside (0, 1)",
                self.alpha
            )));
        }
        if !(self.mu() < 1.0) {
            return Err(Error::Parameter(format!(
                "mu = a N lambda^(m-1) = {} must be < 1",
                self.mu()
            )));
        }
        Ok(())
    }

    pub fn a(&self) -> f64 {
        1.0 / self.l as f64
    }

    pub fn big_n(&self) -> u64 {
        (self.l as u64).pow(self.m)
    }

    /// `lambda` with `alpha log(lambda) = log(a)`.
    pub fn lambda(&self) -> f64 {
        self.a().powf(1.0 / self.alpha)
    }

    pub fn mu(&self) -> f64 {
        self.a() * self.big_n() as f64 * self.lambda().powi(self.m as i32 - 1)
    }

    /// `q = 1/alpha` when it is an integer, so that `lambda = a^q`.
    fn integer_q(&self) -> Option<u32> {
        let q = (1.0 / self.alpha).round();
        ((1.0 / self.alpha - q).abs() < 1e-12 && q >= 1.0).then_some(q as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerFormulas {
    /// `(L lambda)^m + 2m sum_{k=1..n} mu^k`.
    pub area_closed_form: f64,
    /// `C = 2^alpha (m + 2 - a) (1 - a)^{-1} L`.
    pub contractibility_c: f64,
    pub alpha: f64,
    /// `rho` is defined on `[0, lambda / 2)`.
    pub domain_end: f64,
}

impl TowerFormulas {
    pub fn rho_at(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0 && s < self.domain_end) {
            return Err(Error::InvalidArgument(format!(
                "s = {s} outside [0, {})",
                self.domain_end
            )));
        }
        Ok(self.contractibility_c * s.powf(self.alpha))
    }
}

pub fn tower_formulas(p: &TowerParams) -> Result<TowerFormulas> {
    p.validate()?;
    let (m, a, l) = (p.m as f64, p.a(), p.l as f64);
    let area = (l * p.lambda()).powi(p.m as i32)
        + 2.0 * m * (1..=p.n).map(|k| p.mu().powi(k as i32)).sum::<f64>();
    Ok(TowerFormulas {
        area_closed_form: area,
        contractibility_c: 2f64.powf(p.alpha) * (m + 2.0 - a) / (1.0 - a) * l,
        alpha: p.alpha,
        domain_end: p.lambda() / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceKind {
    Base,
    Wall,
    Roof,
}

/// A 2-cell of the polyhedral complex; roofs below the top stage are
/// annuli (the centred square is replaced by the next towers).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerFace {
    pub tower: Option<usize>,
    pub kind: FaceKind,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerInfo {
    pub stage: u32,
    pub parent: Option<usize>,
}

/// Marker vertex sets of one tower in the refined 1-skeleton.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerMarkers {
    pub tower: usize,
    pub stage: u32,
    pub base: Vec<usize>,
    pub roof: Vec<usize>,
}

/// Graph vertex: the sheet it lives on (0 is the stage-0 square, `t + 1`
/// is tower `t`) and lattice coordinates in the stacked frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeKey {
    pub component: u32,
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub params: TowerParams,
    pub towers: Vec<TowerInfo>,
    pub faces: Vec<TowerFace>,
    area_exact: BigRational,
    /// Lattice spacing of the refined 1-skeleton.
    pub spacing: f64,
    nodes: Vec<NodeKey>,
    adj: Vec<Vec<(u32, f64)>>,
    pub markers: Vec<TowerMarkers>,
}

impl Tower {
    pub fn facet_area_sum(&self) -> f64 {
        to_f64(&self.area_exact)
    }

    pub fn facet_area_exact(&self) -> &BigRational {
        &self.area_exact
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn node(&self, i: usize) -> NodeKey {
        self.nodes[i]
    }

    /// Whether node `i` lies on the unrefined (mesh 0) lattice.
    pub fn is_coarse(&self, i: usize) -> bool {
        let step = 1i64 << self.params.mesh;
        let k = self.nodes[i];
        k.x % step == 0 && k.y % step == 0 && k.z % step == 0
    }

    /// Shortest-path distances from the nearest of `sources`.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Reverse((0u64, s as u32)));
        }
        while let Some(Reverse((bits, u))) = heap.pop() {
            let d = f64::from_bits(bits);
            if d > dist[u as usize] {
                continue;
            }
            for &(v, w) in &self.adj[u as usize] {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    heap.push(Reverse((nd.to_bits(), v)));
                }
            }
        }
        dist
    }

    /// Graph metric restricted to the listed nodes.
    pub fn metric_on(&self, nodes: &[usize]) -> FiniteMetricSpace {
        let k = nodes.len();
        let mut upper = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for (i, &u) in nodes.iter().enumerate() {
            let d = self.distances_from(&[u]);
            upper.extend(nodes[i + 1..].iter().map(|&v| d[v]));
        }
        FiniteMetricSpace::from_upper_unchecked(k, upper, false)
    }
}

/// Lattice sizes in units of the spacing `lambda^n / 2^(mesh+1)`.
struct Lattice {
    l: i64,
    q: u32,
    n: u32,
    unit: i64,
}

impl Lattice {
    /// Cell edge `lambda^k`.
    fn edge(&self, k: u32) -> i64 {
        self.unit * self.l.pow(self.q * (self.n - k))
    }

    /// Wall height `a^k`.
    fn height(&self, k: u32) -> i64 {
        self.unit * self.l.pow(self.q * self.n - k)
    }
}

struct Builder {
    index: HashMap<NodeKey, usize>,
    nodes: Vec<NodeKey>,
    adj: Vec<Vec<(u32, f64)>>,
    spacing: f64,
}

impl Builder {
    fn node(&mut self, key: NodeKey) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        self.nodes.push(key);
        self.adj.push(Vec::new());
        self.index.insert(key, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn edge(&mut self, u: usize, v: usize, diagonal: bool) {
        let w = if diagonal {
            self.spacing * std::f64::consts::SQRT_2
        } else {
            self.spacing
        };
        self.adj[u].push((v as u32, w));
        self.adj[v].push((u as u32, w));
    }

    /// 8-neighbour grid on a planar rectangle `[0, w] x [0, h]` mapped into
    /// the frame by `key`; points and edges whose midpoint is strictly
    /// inside a hole (in doubled plane coordinates) are left out.
    fn sheet(
        &mut self,
        w: i64,
        h: i64,
        holes: &[(i64, i64, i64)],
        key: impl Fn(i64, i64) -> NodeKey,
    ) -> Vec<usize> {
        let inside = |x2: i64, y2: i64| {
            holes.iter().any(|&(hx, hy, e)| {
                2 * hx < x2 && x2 < 2 * (hx + e) && 2 * hy < y2 && y2 < 2 * (hy + e)
            })
        };
        let mut ids = vec![usize::MAX; ((w + 1) * (h + 1)) as usize];
        let at = |i: i64, j: i64| (i * (h + 1) + j) as usize;
        for i in 0..=w {
            for j in 0..=h {
                if !inside(2 * i, 2 * j) {
                    ids[at(i, j)] = self.node(key(i, j));
                }
            }
        }
        for i in 0..=w {
            for j in 0..=h {
                let u = ids[at(i, j)];
                if u == usize::MAX {
                    continue;
                }
                for (di, dj) in [(1, 0), (0, 1), (1, 1), (1, -1)] {
                    let (i2, j2) = (i + di, j + dj);
                    if i2 > w || j2 < 0 || j2 > h {
                        continue;
                    }
                    let v = ids[at(i2, j2)];
                    if v != usize::MAX && !inside(i + i2, j + j2) {
                        self.edge(u, v, di != 0 && dj != 0);
                    }
                }
            }
        }
        ids.into_iter().filter(|&u| u != usize::MAX).collect()
    }
}

/// Tower space `X_n`: the stage-0 square `[0, L lambda]^2` carrying `N`
/// cells, each with a tower `P_1` glued along its base; every roof below
/// stage `n` carries a centred square of `N` cells with the next towers.
/// The metric is the shortest-path metric of the refined 1-skeleton.
///
/// Supports `m = 2` with integer `1/alpha`, so that every length is a
/// multiple of the lattice spacing.
pub fn gen_tower(p: &TowerParams) -> Result<Tower> {
    p.validate()?;
    if p.m != 2 {
        return Err(Error::Parameter(format!(
            "tower graphs are built for m = 2 only, got m = {}",
            p.m
        )));
    }
    let q = p.integer_q().ok_or_else(|| {
        Error::Parameter(format!("1/alpha = {} must be an integer", 1.0 / p.alpha))
    })?;
    if p.n > MAX_STAGE {
        return Err(Error::Parameter(format!(
            "stage {} exceeds the cap {MAX_STAGE}",
            p.n
        )));
    }
    if p.mesh > 6 {
        return Err(Error::Parameter(format!(
            "mesh {} exceeds the cap 6",
            p.mesh
        )));
    }
    let l = p.l as i64;
    let lat = Lattice {
        l,
        q,
        n: p.n.max(1),
        unit: 1i64 << (p.mesh + 1),
    };
    let cells = (p.l as usize).pow(2);
    let mut estimate = ((l * lat.edge(1) + 1) as usize).pow(2);
    for k in 1..=p.n {
        let per = 4 * (lat.edge(k) as usize + 1) * (lat.height(k) as usize + 1)
            + (lat.edge(k) as usize + 1).pow(2);
        estimate = estimate.saturating_add(per.saturating_mul(cells.pow(k)));
    }
    if estimate > MAX_NODES {
        return Err(Error::Parameter(format!(
            "about {estimate} graph nodes exceed the cap {MAX_NODES}"
        )));
    }

    let big_l = BigInt::from(p.l);
    let lambda = |k: u32| BigRational::new(BigInt::one(), big_l.clone().pow(q * k));
    let a_pow = |k: u32| BigRational::new(BigInt::one(), big_l.clone().pow(k));
    let spacing = to_f64(&(lambda(lat.n) / BigRational::from_integer(BigInt::from(lat.unit))));
    let mut b = Builder {
        index: HashMap::new(),
        nodes: Vec::new(),
        adj: Vec::new(),
        spacing,
    };
    let mut towers = Vec::new();
    let mut faces = Vec::new();
    let mut markers = Vec::new();
    let mut area = BigRational::zero();

    // Cells of the L x L subdivision of a square of edge L * e at (x, y).
    let grid = |x: i64, y: i64, e: i64| -> Vec<(i64, i64, i64)> {
        (0..l)
            .flat_map(|i| (0..l).map(move |j| (x + i * e, y + j * e, e)))
            .collect()
    };

    let e1 = lat.edge(1);
    let stage0 = grid(0, 0, e1);
    let holes0 = if p.n >= 1 { stage0.clone() } else { Vec::new() };
    b.sheet(l * e1, l * e1, &holes0, |i, j| NodeKey {
        component: 0,
        x: i,
        y: j,
        z: 0,
    });
    if p.n == 0 {
        let side = BigRational::from_integer(big_l.clone()) * lambda(1);
        let a0 = &side * &side;
        faces.push(TowerFace {
            tower: None,
            kind: FaceKind::Base,
            area: to_f64(&a0),
        });
        area += a0;
    }

    // (stage, parent component, cell origin x, y, base height z).
    let mut pending: Vec<(u32, u32, i64, i64, i64)> = if p.n >= 1 {
        stage0.iter().map(|&(x, y, _)| (1, 0, x, y, 0)).collect()
    } else {
        Vec::new()
    };
    while let Some((k, parent, x0, y0, z0)) = pending.pop() {
        let t = towers.len();
        let comp = t as u32 + 1;
        towers.push(TowerInfo {
            stage: k,
            parent: (parent > 0).then(|| parent as usize - 1),
        });
        let (e, h) = (lat.edge(k), lat.height(k));
        let key = move |x: i64, y: i64, z: i64| NodeKey {
            component: if z == z0 { parent } else { comp },
            x,
            y,
            z,
        };
        let mut base = Vec::new();
        let walls: [(i64, i64, i64, i64); 4] = [
            (x0, y0, 1, 0),
            (x0, y0 + e, 1, 0),
            (x0, y0, 0, 1),
            (x0 + e, y0, 0, 1),
        ];
        for (wx, wy, dx, dy) in walls {
            let ids = b.sheet(e, h, &[], |i, j| key(wx + dx * i, wy + dy * i, z0 + j));
            base.extend(ids.into_iter().filter(|&u| b.nodes[u].z == z0));
            let wall = lambda(k) * a_pow(k);
            faces.push(TowerFace {
                tower: Some(t),
                kind: FaceKind::Wall,
                area: to_f64(&wall),
            });
            area += wall;
        }
        base.sort_unstable();
        base.dedup();
        let zr = z0 + h;
        let mut roof_area = lambda(k) * lambda(k);
        let holes = if k < p.n {
            let inner = l * lat.edge(k + 1);
            let off = (e - inner) / 2;
            let cells = grid(x0 + off, y0 + off, lat.edge(k + 1));
            let side = BigRational::from_integer(big_l.clone()) * lambda(k + 1);
            roof_area -= &side * &side;
            pending.extend(
                cells
                    .iter()
                    .rev()
                    .map(|&(cx, cy, _)| (k + 1, comp, cx, cy, zr)),
            );
            cells
                .iter()
                .map(|&(cx, cy, ce)| (cx - x0, cy - y0, ce))
                .collect()
        } else {
            Vec::new()
        };
        let roof = b.sheet(e, e, &holes, |i, j| NodeKey {
            component: comp,
            x: x0 + i,
            y: y0 + j,
            z: zr,
        });
        faces.push(TowerFace {
            tower: Some(t),
            kind: FaceKind::Roof,
            area: to_f64(&roof_area),
        });
        area += roof_area;
        markers.push(TowerMarkers {
            tower: t,
            stage: k,
            base,
            roof,
        });
    }

    Ok(Tower {
        params: *p,
        towers,
        faces,
        area_exact: area,
        spacing,
        nodes: b.nodes,
        adj: b.adj,
        markers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(n: u32, mesh: u32) -> TowerParams {
        TowerParams::new(2, 2, 0.5, n, mesh).unwrap()
    }

    #[test]
    fn parameters_and_formulas() {
        let p = reference(2, 0);
        assert_eq!((p.a(), p.lambda(), p.big_n(), p.mu()), (0.5, 0.25, 4, 0.5));
        let f = tower_formulas(&p).unwrap();
        assert!((f.area_closed_form - 3.25).abs() < 1e-12);
        assert!((f.contractibility_c - 14.0 * 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(f.rho_at(0.0).unwrap(), 0.0);
        assert!(f.rho_at(0.125).is_err());
        assert!(matches!(
            TowerParams::new(2, 2, 1.0, 1, 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn stage_two_areas_and_counts() {
        let t = gen_tower(&reference(2, 0)).unwrap();
        assert_eq!(t.towers.len(), 4 + 16);
        assert_eq!(t.facet_area_exact(), &BigRational::new(13.into(), 4.into()));
        assert_eq!(t.markers.iter().filter(|m| m.stage == 2).count(), 16);
        // Base rings sit on the parent sheet, roofs on the tower's own.
        for m in &t.markers {
            assert!(m
                .base
                .iter()
                .all(|&u| t.node(u).component != m.tower as u32 + 1));
            assert!(m
                .roof
                .iter()
                .all(|&u| t.node(u).component == m.tower as u32 + 1));
        }
    }

    #[test]
    fn stage_zero_is_the_flat_square() {
        let t = gen_tower(&reference(0, 0)).unwrap();
        assert!((t.facet_area_sum() - 0.25).abs() < 1e-15);
        assert!(t.towers.is_empty());
        let d = t.distances_from(&[0]);
        let far = d.iter().cloned().fold(0.0, f64::max);
        assert!((far - 0.5 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn climbing_a_wall_costs_its_height() {
        let t = gen_tower(&reference(1, 0)).unwrap();
        for m in &t.markers {
            let d = t.distances_from(&m.base);
            let lo = m.roof.iter().map(|&r| d[r]).fold(f64::INFINITY, f64::min);
            assert!((lo - 0.5).abs() < 1e-12);
        }
    }
}
