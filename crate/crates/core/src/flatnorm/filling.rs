use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{solve_integer, IlpOutcome, LinearProgram, LpOutcome, Optimality};
use super::network::{solve_tension, TensionEdge};
use crate::chains::{coherent_orientation, ChainJson, EmbeddedComplex, IntegralChain};
use crate::error::{Error, Result};
use crate::exact::{common_dyadic_scale, rational, rational_string, scaled_i128, to_f64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    FillVolume,
    FlatNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    /// Network method when the ambient allows it, otherwise simplex.
    #[default]
    Auto,
    Simplex,
    Network,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillMethod {
    Trivial,
    Simplex,
    Network,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillOptions {
    pub solver: SolverChoice,
    pub node_limit: usize,
}

impl Default for FillOptions {
    fn default() -> Self {
        Self {
            solver: SolverChoice::Auto,
            node_limit: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FillingProblem {
    pub ambient: Arc<EmbeddedComplex>,
    pub target: IntegralChain,
    pub objective: Objective,
    /// Optional box `|s_σ| <= bound` for branch-and-bound.
    pub coefficient_bound: Option<u64>,
}

impl FillingProblem {
    /// Moves `target` onto `ambient` (matching simplices by vertex index)
    /// when it lives on a different complex.
    pub fn new(
        ambient: Arc<EmbeddedComplex>,
        target: &IntegralChain,
        objective: Objective,
    ) -> Result<Self> {
        let target = if Arc::ptr_eq(target.complex(), &ambient) {
            target.clone()
        } else {
            target.transfer(ambient.clone())?
        };
        Ok(Self {
            ambient,
            target,
            objective,
            coefficient_bound: None,
        })
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.coefficient_bound = Some(bound);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FillingWitness {
    /// The `(m+1)`-chain.
    pub s: IntegralChain,
    /// The `m`-chain remainder (zero for filling volume).
    pub x: IntegralChain,
    pub value: f64,
    pub value_exact: BigRational,
    pub optimality: Optimality,
    pub method: FillMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub s: ChainJson,
    pub x: ChainJson,
    pub value: f64,
    pub value_exact: String,
    pub optimality: Optimality,
    pub method: FillMethod,
}

impl FillingWitness {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            s: self.s.to_json(),
            x: self.x.to_json(),
            value: self.value,
            value_exact: rational_string(&self.value_exact),
            optimality: self.optimality,
            method: self.method,
        }
    }

    /// Re-check `target = X + ∂S` exactly and the stated value.
    pub fn verify(&self, target: &IntegralChain) -> Result<()> {
        let rebuilt = if self.s.dim() == 0 {
            self.x.clone()
        } else {
            self.x.add(&self.s.boundary()?)?
        };
        if rebuilt != *target {
            return Err(Error::Solver(
                "witness does not reproduce the target".into(),
            ));
        }
        if exact_mass(&self.x) + exact_mass(&self.s) != self.value_exact {
            return Err(Error::Solver("witness value differs from its mass".into()));
        }
        let m = self.x.mass().total + self.s.mass().total;
        if (m - self.value).abs() > 1e-12 * m.abs().max(1.0) {
            return Err(Error::Solver(
                "floating mass differs from exact value".into(),
            ));
        }
        Ok(())
    }
}

fn exact_mass(c: &IntegralChain) -> BigRational {
    c.terms()
        .iter()
        .map(|(&p, &k)| {
            rational(c.complex().volume((c.dim(), p))) * BigRational::from_integer(k.abs().into())
        })
        .sum()
}

/// Minimal mass of an integer `(m+1)`-chain bounding the target.
pub fn filling_volume(problem: &FillingProblem) -> Result<FillingWitness> {
    let mut p = problem.clone();
    p.objective = Objective::FillVolume;
    solve_filling(&p, &FillOptions::default())
}

/// `min M(X) + M(S)` over `T = X + ∂S`.
pub fn flat_norm(t: &IntegralChain, ambient: &Arc<EmbeddedComplex>) -> Result<FillingWitness> {
    solve_filling(
        &FillingProblem::new(ambient.clone(), t, Objective::FlatNorm)?,
        &FillOptions::default(),
    )
}

/// Flat norm of `a − b`.
pub fn flat_distance(
    a: &IntegralChain,
    b: &IntegralChain,
    ambient: &Arc<EmbeddedComplex>,
) -> Result<FillingWitness> {
    let a = a.transfer(ambient.clone())?;
    let b = b.transfer(ambient.clone())?;
    flat_norm(&a.sub(&b)?, ambient)
}

pub fn solve_filling(problem: &FillingProblem, opts: &FillOptions) -> Result<FillingWitness> {
    let t = &problem.target;
    let k = &problem.ambient;
    let m = t.dim();
    if problem.objective == Objective::FillVolume && m > 0 && !t.boundary()?.is_zero() {
        return Err(Error::NotACycle);
    }
    let witness = if t.is_zero() {
        finish(
            IntegralChain::zero(k.clone(), m + 1),
            t.clone(),
            Optimality::CertifiedIntegral,
            FillMethod::Trivial,
        )
    } else if k.dim() < m + 1 {
        if problem.objective == Objective::FillVolume {
            return Err(Error::NotNullHomologous);
        }
        finish(
            IntegralChain::zero(k.clone(), m + 1),
            t.clone(),
            Optimality::CertifiedIntegral,
            FillMethod::Trivial,
        )
    } else {
        let network = match opts.solver {
            SolverChoice::Simplex => None,
            _ if problem.coefficient_bound.is_some() => None,
            _ => network_solve(problem)?,
        };
        match (network, opts.solver) {
            (Some(w), _) => w,
            (None, SolverChoice::Network) => {
                return Err(Error::Solver(
                    "network method does not apply to this ambient".into(),
                ));
            }
            (None, _) => simplex_solve(problem, opts)?,
        }
    };
    witness.verify(t)?;
    Ok(witness)
}

fn finish(
    s: IntegralChain,
    x: IntegralChain,
    optimality: Optimality,
    method: FillMethod,
) -> FillingWitness {
    let value_exact = exact_mass(&x) + exact_mass(&s);
    FillingWitness {
        value: to_f64(&value_exact),
        s,
        x,
        value_exact,
        optimality,
        method,
    }
}

fn simplex_solve(problem: &FillingProblem, opts: &FillOptions) -> Result<FillingWitness> {
    let t = &problem.target;
    let k = &problem.ambient;
    let m = t.dim();
    let n1 = k.count(m + 1);
    let n0 = k.count(m);
    let flat = problem.objective == Objective::FlatNorm;
    let nvars = 2 * n1 + if flat { 2 * n0 } else { 0 };
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let mut a = vec![vec![zero.clone(); nvars]; n0];
    for s in 0..n1 {
        for (f, sign) in k.facets(m + 1, s) {
            let v = BigRational::from_integer(sign.into());
            a[f][s] = v.clone();
            a[f][n1 + s] = -v;
        }
    }
    if flat {
        for f in 0..n0 {
            a[f][2 * n1 + f] = one.clone();
            a[f][2 * n1 + n0 + f] = -one.clone();
        }
    }
    let b: Vec<BigRational> = (0..n0)
        .map(|f| BigRational::from_integer(t.coef(f).into()))
        .collect();
    let mut c = Vec::with_capacity(nvars);
    let vol1: Vec<BigRational> = k.volumes(m + 1).iter().map(|&v| rational(v)).collect();
    c.extend(vol1.iter().cloned());
    c.extend(vol1.iter().cloned());
    if flat {
        let vol0: Vec<BigRational> = k.volumes(m).iter().map(|&v| rational(v)).collect();
        c.extend(vol0.iter().cloned());
        c.extend(vol0);
    }
    let lp = LinearProgram { a, b, c };
    if !flat && matches!(super::lp::solve(&lp), LpOutcome::Infeasible) {
        return Err(Error::NotNullHomologous);
    }
    let upper: Option<Vec<Option<BigInt>>> = problem.coefficient_bound.map(|bnd| {
        (0..nvars)
            .map(|j| (j < 2 * n1).then(|| BigInt::from(bnd)))
            .collect()
    });
    match solve_integer(&lp, upper.as_deref(), opts.node_limit) {
        IlpOutcome::Optimal {
            x,
            value,
            optimality,
        } => {
            let to_i64 = |v: &BigInt| {
                v.to_i64()
                    .ok_or_else(|| Error::Solver("coefficient overflow".into()))
            };
            let mut s_terms = Vec::new();
            for j in 0..n1 {
                s_terms.push((j, to_i64(&x[j])? - to_i64(&x[n1 + j])?));
            }
            let s = IntegralChain::from_terms(k.clone(), m + 1, s_terms)?;
            let xc = if flat {
                let mut terms = Vec::new();
                for f in 0..n0 {
                    terms.push((f, to_i64(&x[2 * n1 + f])? - to_i64(&x[2 * n1 + n0 + f])?));
                }
                IntegralChain::from_terms(k.clone(), m, terms)?
            } else {
                IntegralChain::zero(k.clone(), m)
            };
            let w = finish(s, xc, optimality, FillMethod::Simplex);
            if w.value_exact != value {
                return Err(Error::Solver(
                    "integer optimum differs from witness mass".into(),
                ));
            }
            Ok(w)
        }
        IlpOutcome::Infeasible => Err(Error::NotNullHomologous),
        IlpOutcome::Unbounded => Err(Error::Solver("unbounded relaxation".into())),
    }
}

/// Network method for codimension-one targets in a coherently orientable
/// pseudomanifold ambient; `None` when it does not apply.
///
/// With `p_σ = o_σ s_σ`, every face with two cofaces contributes
/// `(∂S)_f = η (p_1 − p_2)` and a face with one coface `η p_1`, so both
/// objectives become label problems on the dual graph plus a root node.
fn network_solve(problem: &FillingProblem) -> Result<Option<FillingWitness>> {
    let t = &problem.target;
    let k = &problem.ambient;
    let m = t.dim();
    if k.dim() != m + 1 {
        return Ok(None);
    }
    let Some(orient) = coherent_orientation(k) else {
        return Ok(None);
    };
    let n1 = k.count(m + 1);
    let root = n1;
    let cofaces = k.cofaces(m + 1);

    let scale = common_dyadic_scale(k.volumes(m).iter().chain(k.volumes(m + 1)));
    let sc = |v: f64| scaled_i128(v, scale);
    let mut vol0 = Vec::with_capacity(k.count(m));
    for &v in k.volumes(m) {
        match sc(v) {
            Some(x) => vol0.push(x),
            None => return Ok(None),
        }
    }
    let mut vol1 = Vec::with_capacity(n1);
    for &v in k.volumes(m + 1) {
        match sc(v) {
            Some(x) => vol1.push(x),
            None => return Ok(None),
        }
    }

    // Face edges: (tail, head, t') meaning the face term |t' − (p_tail − p_head)|.
    let mut face_edges: Vec<(usize, usize, i64, usize)> = Vec::new();
    for (f, c) in cofaces.iter().enumerate() {
        let tf = t.coef(f);
        match c[..] {
            [] => {
                if tf != 0 && problem.objective == Objective::FillVolume {
                    return Err(Error::NotNullHomologous);
                }
            }
            [(a, sa)] => face_edges.push((a, root, sa * orient[a] * tf, f)),
            [(a, sa), (b, _)] => face_edges.push((a, b, sa * orient[a] * tf, f)),
            _ => return Ok(None),
        }
    }

    let labels: Vec<i64> = match problem.objective {
        Objective::FillVolume => match forced_labels(n1, root, &face_edges, &vol1) {
            Some(l) => l,
            None => return Err(Error::NotNullHomologous),
        },
        Objective::FlatNorm => {
            let mut edges: Vec<TensionEdge> = face_edges
                .iter()
                .map(|&(tail, head, tt, f)| TensionEdge {
                    tail,
                    head,
                    weight: vol0[f],
                    t: tt,
                })
                .collect();
            edges.extend((0..n1).map(|s| TensionEdge {
                tail: s,
                head: root,
                weight: vol1[s],
                t: 0,
            }));
            solve_tension(n1 + 1, root, &edges)?.labels
        }
    };

    let s = IntegralChain::from_terms(
        k.clone(),
        m + 1,
        (0..n1).map(|i| (i, orient[i] * labels[i])),
    )?;
    let x = t.sub(&s.boundary()?)?;
    if problem.objective == Objective::FillVolume && !x.is_zero() {
        return Err(Error::NotNullHomologous);
    }
    Ok(Some(finish(
        s,
        x,
        Optimality::CertifiedIntegral,
        FillMethod::Network,
    )))
}

/// Labels forced by `p_tail − p_head = t` on every face edge. Components
/// not reaching the root are shifted by the weighted median minimising
/// `Σ vol |p|`. `None` if the constraints are inconsistent.
fn forced_labels(
    n1: usize,
    root: usize,
    edges: &[(usize, usize, i64, usize)],
    vol: &[i128],
) -> Option<Vec<i64>> {
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n1 + 1];
    for &(a, b, t, _) in edges {
        adj[a].push((b, -t));
        adj[b].push((a, t));
    }
    let mut label: Vec<Option<i64>> = vec![None; n1 + 1];
    for start in std::iter::once(root).chain(0..n1) {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(0);
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let lu = label[u].unwrap();
            for &(v, d) in &adj[u] {
                // p_v = p_u + d.
                match label[v] {
                    None => {
                        label[v] = Some(lu + d);
                        comp.push(v);
                        queue.push_back(v);
                    }
                    Some(lv) if lv != lu + d => return None,
                    _ => {}
                }
            }
        }
        if start != root {
            let mut vals: Vec<(i64, i128)> =
                comp.iter().map(|&v| (-label[v].unwrap(), vol[v])).collect();
            vals.sort();
            let total: i128 = vals.iter().map(|v| v.1).sum();
            let mut acc = 0;
            let mut shift = vals[0].0;
            for (v, w) in vals {
                acc += w;
                if 2 * acc >= total {
                    shift = v;
                    break;
                }
            }
            for &v in &comp {
                label[v] = Some(label[v].unwrap() + shift);
            }
        }
    }
    Some(label.into_iter().take(n1).map(|l| l.unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AmbientNorm;

    fn right_triangle() -> Arc<EmbeddedComplex> {
        Arc::new(
            EmbeddedComplex::from_simplices(
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                AmbientNorm::Euclidean,
                &[vec![0, 1, 2]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn triangle_fill_and_flat() {
        let k = right_triangle();
        let tri = IntegralChain::simplex(k.clone(), (2, 0), 1).unwrap();
        let b = tri.boundary().unwrap();
        for solver in [SolverChoice::Simplex, SolverChoice::Network] {
            let opts = FillOptions {
                solver,
                ..Default::default()
            };
            let fill = solve_filling(
                &FillingProblem::new(k.clone(), &b, Objective::FillVolume).unwrap(),
                &opts,
            )
            .unwrap();
            assert_eq!(fill.value, 0.5);
            assert_eq!(fill.s, tri);
            let flat = solve_filling(
                &FillingProblem::new(k.clone(), &b, Objective::FlatNorm).unwrap(),
                &opts,
            )
            .unwrap();
            assert_eq!(flat.value, 0.5);
        }
        let z = IntegralChain::zero(k.clone(), 1);
        assert_eq!(flat_norm(&z, &k).unwrap().value, 0.0);
    }

    #[test]
    fn non_bounding_cycle() {
        // Hollow triangle: the edge cycle has no filling.
        let k = Arc::new(
            EmbeddedComplex::from_simplices(
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                AmbientNorm::Euclidean,
                &[vec![0, 1], vec![1, 2], vec![0, 2]],
            )
            .unwrap(),
        );
        let terms = [
            (k.find(&[0, 1]).unwrap().0, 1),
            (k.find(&[1, 2]).unwrap().0, 1),
            (k.find(&[0, 2]).unwrap().0, -1),
        ];
        let c = IntegralChain::from_terms(k.clone(), 1, terms).unwrap();
        assert!(c.boundary().unwrap().is_zero());
        let p = FillingProblem::new(k.clone(), &c, Objective::FillVolume).unwrap();
        assert_eq!(filling_volume(&p), Err(Error::NotNullHomologous));
        assert!((flat_norm(&c, &k).unwrap().value - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
