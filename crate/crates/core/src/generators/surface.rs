use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::chains::{coherent_orientation, fundamental_chain, EmbeddedComplex, IntegralChain};
use crate::error::{Error, Result};
use crate::geom::{determinant, AmbientNorm};

/// A closed oriented surface mesh together with a solid ambient that
/// contains it. The surface vertices are the first vertices of the
/// ambient, so chains move between the two with
/// [`IntegralChain::transfer`].
#[derive(Debug, Clone)]
pub struct Surface {
    pub complex: Arc<EmbeddedComplex>,
    pub chain: IntegralChain,
    pub ambient: Arc<EmbeddedComplex>,
}

impl Surface {
    /// The fundamental cycle as a chain on the ambient complex.
    pub fn ambient_chain(&self) -> Result<IntegralChain> {
        self.chain.transfer(self.ambient.clone())
    }
}

/// Unit sphere: `mesh` rounds of midpoint subdivision of the octahedron,
/// projected radially. The ambient is the cone over the mesh from the
/// origin.
pub fn gen_sphere(mesh: u32) -> Result<Surface> {
    if mesh > 7 {
        return Err(Error::Parameter(format!(
            "sphere mesh {mesh} exceeds the cap 7"
        )));
    }
    let mut verts: Vec<Vec<f64>> = vec![
        vec![1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
    ];
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for &x in &[0, 1] {
        for &y in &[2, 3] {
            for &z in &[4, 5] {
                faces.push([x, y, z]);
            }
        }
    }
    for _ in 0..mesh {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec<f64>>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let p: Vec<f64> = verts[a].iter().zip(&verts[b]).map(|(x, y)| x + y).collect();
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                verts.push(p.iter().map(|x| x / norm).collect());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        faces = next;
    }
    star_shaped(verts, &faces, Vec::new())
}

/// Flat torus `S^1 x S^1_{1/n}` in R^4 with an `mesh x mesh` product grid.
/// The ambient is the solid torus `S^1 x D_{1/n}` (fan-triangulated
/// disc), and the surface chain is the boundary of its fundamental chain.
pub fn gen_torus(n: u32, mesh: u32) -> Result<Surface> {
    if n == 0 {
        return Err(Error::Parameter("torus index n must be >= 1".into()));
    }
    if !(8..=512).contains(&mesh) {
        return Err(Error::Parameter(format!(
            "torus mesh {mesh} outside 8..=512"
        )));
    }
    let m = mesh as usize;
    let rho = 1.0 / n as f64;
    let angle = |k: usize| 2.0 * PI * k as f64 / m as f64;
    let mut verts = Vec::with_capacity(m * m + m);
    for i in 0..m {
        let (s, c) = angle(i).sin_cos();
        for j in 0..m {
            let (sp, cp) = angle(j).sin_cos();
            verts.push(vec![c, s, rho * cp, rho * sp]);
        }
    }
    for i in 0..m {
        let (s, c) = angle(i).sin_cos();
        verts.push(vec![c, s, 0.0, 0.0]);
    }
    // Disc vertex j < m is on the rim, j = m is the centre.
    let at = |i: usize, j: usize| {
        if j == m {
            m * m + i % m
        } else {
            (i % m) * m + j
        }
    };
    let mut tets = Vec::with_capacity(3 * m * m);
    for i in 0..m {
        for j in 0..m {
            let mut tri = [j, (j + 1) % m, m];
            tri.sort_unstable();
            let bottom = tri.map(|d| at(i, d));
            let top = tri.map(|d| at(i + 1, d));
            tets.extend(split_prism(bottom, top));
        }
    }
    let ambient = Arc::new(EmbeddedComplex::from_simplices(
        verts.clone(),
        AmbientNorm::Euclidean,
        &tets,
    )?);
    let orient = coherent_orientation(&ambient)
        .ok_or_else(|| Error::InvalidComplex("solid torus not orientable".into()))?;
    let solid = fundamental_chain(&ambient, &orient)?;
    let boundary = solid.boundary()?;
    let triangles: Vec<Vec<usize>> = boundary
        .terms()
        .keys()
        .map(|&p| ambient.simplices(2)[p].clone())
        .collect();
    verts.truncate(m * m);
    let complex = Arc::new(EmbeddedComplex::from_simplices(
        verts,
        AmbientNorm::Euclidean,
        &triangles,
    )?);
    let chain = boundary.transfer(complex.clone())?;
    Ok(Surface {
        complex,
        chain,
        ambient,
    })
}

/// Ellipsoid `x^2 + y^2 + n z^2 = 1` on a latitude-longitude grid with
/// `mesh` longitudes and `mesh / 2` latitude bands. The ambient fills the
/// interior by a cone from the origin and adds one radial prism layer out
/// to the boundary of the box `[-1.2, 1.2]^3`.
pub fn gen_ellipsoid(n: u32, mesh: u32) -> Result<Surface> {
    if n == 0 {
        return Err(Error::Parameter("ellipsoid index n must be >= 1".into()));
    }
    if !(8..=512).contains(&mesh) || mesh % 2 != 0 {
        return Err(Error::Parameter(format!(
            "ellipsoid mesh {mesh} must be even and in 8..=512"
        )));
    }
    let m = mesh as usize;
    let bands = m / 2;
    let h = 1.0 / (n as f64).sqrt();
    let mut verts = vec![vec![0.0, 0.0, h]];
    for b in 1..bands {
        let (sb, cb) = (PI * b as f64 / bands as f64).sin_cos();
        for j in 0..m {
            let (sp, cp) = (2.0 * PI * j as f64 / m as f64).sin_cos();
            verts.push(vec![sb * cp, sb * sp, cb * h]);
        }
    }
    verts.push(vec![0.0, 0.0, -h]);
    let south = verts.len() - 1;
    let ring = |b: usize, j: usize| 1 + (b - 1) * m + j % m;
    let mut faces = Vec::new();
    for j in 0..m {
        faces.push([0, ring(1, j), ring(1, j + 1)]);
        faces.push([south, ring(bands - 1, j + 1), ring(bands - 1, j)]);
        for b in 1..bands - 1 {
            faces.push([ring(b, j), ring(b + 1, j), ring(b + 1, j + 1)]);
            faces.push([ring(b, j), ring(b + 1, j + 1), ring(b, j + 1)]);
        }
    }
    let outer: Vec<Vec<f64>> = verts
        .iter()
        .map(|p| {
            let sup = p.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            p.iter().map(|x| 1.2 * x / sup).collect()
        })
        .collect();
    star_shaped(verts, &faces, outer)
}

/// Orient the faces of a surface that is star-shaped about the origin
/// outward, and build the ambient: the cone to the origin, plus radial
/// prisms to `outer` (one outer point per surface vertex) if given.
fn star_shaped(
    verts: Vec<Vec<f64>>,
    faces: &[[usize; 3]],
    outer: Vec<Vec<f64>>,
) -> Result<Surface> {
    let nv = verts.len();
    let oriented: Vec<[usize; 3]> = faces
        .iter()
        .map(|&[a, b, c]| {
            let det = determinant(vec![verts[a].clone(), verts[b].clone(), verts[c].clone()]);
            if det > 0.0 {
                [a, b, c]
            } else {
                [a, c, b]
            }
        })
        .collect();
    let triangles: Vec<Vec<usize>> = oriented.iter().map(|t| t.to_vec()).collect();
    let complex = Arc::new(EmbeddedComplex::from_simplices(
        verts.clone(),
        AmbientNorm::Euclidean,
        &triangles,
    )?);
    let terms = oriented
        .iter()
        .map(|t| complex.find(t).expect("listed face"));
    let chain = IntegralChain::from_terms(complex.clone(), 2, terms)?;

    let with_prisms = !outer.is_empty();
    let mut all = verts;
    all.extend(outer);
    all.push(vec![0.0; 3]);
    let origin = all.len() - 1;
    let mut tets: Vec<Vec<usize>> = faces
        .iter()
        .map(|&[a, b, c]| vec![origin, a, b, c])
        .collect();
    if with_prisms {
        for f in faces {
            let mut bottom = *f;
            bottom.sort_unstable();
            tets.extend(split_prism(bottom, bottom.map(|v| v + nv)));
        }
    }
    let ambient = Arc::new(EmbeddedComplex::from_simplices(
        all,
        AmbientNorm::Euclidean,
        &tets,
    )?);
    Ok(Surface {
        complex,
        chain,
        ambient,
    })
}

/// Three tetrahedra filling the prism over a triangle whose bottom
/// vertices are listed in a fixed global order. Lateral quads are cut
/// from the lower bottom vertex to the higher top vertex, so adjacent
/// prisms agree on their shared faces.
fn split_prism(b: [usize; 3], t: [usize; 3]) -> [Vec<usize>; 3] {
    [
        vec![b[0], b[1], b[2], t[2]],
        vec![b[0], b[1], t[1], t[2]],
        vec![b[0], t[0], t[1], t[2]],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_and_refined_sphere() {
        let s = gen_sphere(0).unwrap();
        assert!((s.chain.mass().total - 4.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!(s.chain.boundary().unwrap().is_zero());
        let s = gen_sphere(4).unwrap();
        assert!((s.chain.mass().total / (4.0 * PI) - 1.0).abs() < 0.01);
        assert!(s.chain.boundary().unwrap().is_zero());
        assert!(s.ambient_chain().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn torus_mass_is_the_product_of_polygon_perimeters() {
        for n in [1u32, 3] {
            let t = gen_torus(n, 16).unwrap();
            let side = 16.0 * 2.0 * (PI / 16.0).sin();
            assert!((t.chain.mass().total - side * side / n as f64).abs() < 1e-9);
            assert!(t.chain.boundary().unwrap().is_zero());
            assert_eq!(t.complex.count(2), 2 * 16 * 16);
        }
    }

    #[test]
    fn ellipsoid_is_a_cycle_inside_its_box() {
        let e = gen_ellipsoid(4, 16).unwrap();
        assert!(e.chain.boundary().unwrap().is_zero());
        let sup = e
            .ambient
            .vertices()
            .iter()
            .flatten()
            .fold(0.0f64, |a, x| a.max(x.abs()));
        assert!((sup - 1.2).abs() < 1e-12);
        assert!(gen_ellipsoid(1, 9).is_err());
    }
}
