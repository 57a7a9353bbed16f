use std::collections::VecDeque;
use std::sync::Arc;

use super::{EmbeddedComplex, IntegralChain};
use crate::error::{Error, Result};

/// `Σ o_σ σ` over the top simplices of a pseudomanifold.
///
/// Every codimension-1 face must have at most two cofaces. Faces with two
/// cofaces must cancel in the boundary; otherwise the orientation is
/// incoherent and the face is reported.
pub fn fundamental_chain(k: &Arc<EmbeddedComplex>, orientation: &[i64]) -> Result<IntegralChain> {
    let m = k.dim();
    if orientation.len() != k.count(m) {
        return Err(Error::InvalidArgument(format!(
            "{} orientation signs for {} top simplices",
            orientation.len(),
            k.count(m)
        )));
    }
    if orientation.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidArgument(
            "orientation signs must be +1 or -1".into(),
        ));
    }
    let chain = IntegralChain::from_terms(k.clone(), m, orientation.iter().copied().enumerate())?;
    if m == 0 {
        return Ok(chain);
    }
    let cofaces = k.cofaces(m);
    if let Some((facet, c)) = cofaces.iter().enumerate().find(|(_, c)| c.len() >= 3) {
        return Err(Error::NonManifold {
            facet,
            cofaces: c.len(),
        });
    }
    let b = chain.boundary()?;
    if let Some((&facet, _)) = b.terms().iter().find(|(&f, _)| cofaces[f].len() == 2) {
        return Err(Error::Incoherent { facet });
    }
    Ok(chain)
}

/// Orientation signs making every interior facet cancel, found by
/// breadth-first propagation; `None` if the complex is non-orientable or
/// not a pseudomanifold. Each component starts from `+1` on its lowest
/// top simplex.
pub fn coherent_orientation(k: &EmbeddedComplex) -> Option<Vec<i64>> {
    let m = k.dim();
    if m == 0 {
        return Some(vec![1; k.count(0)]);
    }
    let cofaces = k.cofaces(m);
    if cofaces.iter().any(|c| c.len() > 2) {
        return None;
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); k.count(m)];
    for c in &cofaces {
        if let [(a, sa), (b, sb)] = c[..] {
            // o_a sa + o_b sb = 0  =>  o_b = -o_a sa sb.
            adj[a].push((b, -sa * sb));
            adj[b].push((a, -sa * sb));
        }
    }
    let mut o = vec![0i64; k.count(m)];
    for start in 0..o.len() {
        if o[start] != 0 {
            continue;
        }
        o[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adj[a] {
                let want = o[a] * rel;
                if o[b] == 0 {
                    o[b] = want;
                    queue.push_back(b);
                } else if o[b] != want {
                    return None;
                }
            }
        }
    }
    Some(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AmbientNorm;

    pub(crate) fn octahedron() -> Arc<EmbeddedComplex> {
        let v = vec![
            vec![1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0],
        ];
        let mut faces = Vec::new();
        for x in [0, 1] {
            for y in [2, 3] {
                for z in [4, 5] {
                    faces.push(vec![x, y, z]);
                }
            }
        }
        Arc::new(EmbeddedComplex::from_simplices(v, AmbientNorm::Euclidean, &faces).unwrap())
    }

    #[test]
    fn octahedron_cycle() {
        let k = octahedron();
        let o = coherent_orientation(&k).unwrap();
        let t = fundamental_chain(&k, &o).unwrap();
        assert!(t.boundary().unwrap().is_zero());
        // Oracle: eight equilateral faces of side sqrt(2).
        assert!((t.mass().total - 4.0 * 3f64.sqrt()).abs() < 1e-12);
        let mut bad = o.clone();
        bad[3] = -bad[3];
        match fundamental_chain(&k, &bad) {
            Err(Error::Incoherent { facet }) => {
                let e = k.simplex((1, facet));
                let f = k.simplex((2, 3));
                assert!(e.iter().all(|v| f.contains(v)));
            }
            other => panic!("expected incoherence, got {other:?}"),
        }
    }

    #[test]
    fn square_boundary_and_non_manifold() {
        let sq = Arc::new(
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
        let t = fundamental_chain(&sq, &coherent_orientation(&sq).unwrap()).unwrap();
        assert!((t.boundary().unwrap().mass().total - 4.0).abs() < 1e-15);

        let book = Arc::new(
            EmbeddedComplex::from_simplices(
                vec![
                    vec![0.0, 0.0, 0.0],
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, -1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                ],
                AmbientNorm::Euclidean,
                &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]],
            )
            .unwrap(),
        );
        assert!(matches!(
            fundamental_chain(&book, &[1, 1, 1]),
            Err(Error::NonManifold { cofaces: 3, .. })
        ));
        assert!(coherent_orientation(&book).is_none());
    }
}
