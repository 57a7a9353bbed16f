use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{simplex_volume, AmbientNorm};

/// `(dimension, position)` of a simplex inside its complex.
pub type SimplexId = (usize, usize);

/// How simplex volumes are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VolumeMetric {
    /// Gram-determinant volume of the Euclidean coordinates (also used for
    /// sup-norm complexes).
    Euclidean,
    /// Abstract complexes: every simplex has unit volume.
    Unit,
}

/// A finite oriented simplicial complex, optionally embedded in `R^d`.
///
/// Vertices are the 0-simplices in index order. Each stored simplex fixes
/// an orientation by its vertex order; lookups by vertex set return the
/// position together with the parity relative to that order.
#[derive(Debug, Clone)]
pub struct EmbeddedComplex {
    ambient_dim: usize,
    norm: AmbientNorm,
    volume_metric: VolumeMetric,
    vertices: Vec<Vec<f64>>,
    simplices: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    volumes: Vec<Vec<f64>>,
}

impl PartialEq for EmbeddedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.norm == other.norm
            && self.volume_metric == other.volume_metric
            && self.vertices == other.vertices
            && self.simplices == other.simplices
    }
}

/// Sign of the permutation sorting `v` (`v` has distinct entries).
pub(crate) fn parity(v: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

impl EmbeddedComplex {
    /// Build from explicit per-dimension simplex lists, validating closure
    /// under faces, distinct vertices and positive volumes.
    pub fn new(
        vertices: Vec<Vec<f64>>,
        norm: AmbientNorm,
        simplices: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let ambient_dim = vertices.first().map_or(0, Vec::len);
        if vertices
            .iter()
            .any(|v| v.len() != ambient_dim || v.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::InvalidComplex(
                "vertices must be finite and of equal dimension".into(),
            ));
        }
        let k = Self::assemble(
            ambient_dim,
            norm,
            VolumeMetric::Euclidean,
            vertices,
            simplices,
        )?;
        k.validate_closure()?;
        for (d, vols) in k.volumes.iter().enumerate() {
            if let Some(p) = vols.iter().position(|v| !(*v > 0.0)) {
                return Err(Error::InvalidComplex(format!(
                    "simplex {:?} has zero volume",
                    k.simplices[d][p]
                )));
            }
        }
        Ok(k)
    }

    /// Build the closure of the given simplices (any dimensions). Faces not
    /// listed are added in sorted vertex order; listed simplices keep their
    /// orientation. Degenerate simplices are accepted (used for cut meshes).
    pub fn from_simplices(
        vertices: Vec<Vec<f64>>,
        norm: AmbientNorm,
        simplices: &[Vec<usize>],
    ) -> Result<Self> {
        let ambient_dim = vertices.first().map_or(0, Vec::len);
        let lists = closure(vertices.len(), simplices)?;
        Self::assemble(ambient_dim, norm, VolumeMetric::Euclidean, vertices, lists)
    }

    /// Abstract complex on `n` vertices with unit simplex volumes.
    pub fn abstract_complex(n: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        let lists = closure(n, simplices)?;
        Self::assemble(
            0,
            AmbientNorm::Euclidean,
            VolumeMetric::Unit,
            vec![Vec::new(); n],
            lists,
        )
    }

    fn assemble(
        ambient_dim: usize,
        norm: AmbientNorm,
        volume_metric: VolumeMetric,
        vertices: Vec<Vec<f64>>,
        mut simplices: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = vertices.len();
        if simplices.is_empty() {
            simplices.push(Vec::new());
        }
        if simplices[0].len() != n
            || simplices[0]
                .iter()
                .enumerate()
                .any(|(i, s)| s.as_slice() != [i])
        {
            return Err(Error::InvalidComplex(
                "0-simplices must be the vertices in index order".into(),
            ));
        }
        while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        let mut lookup = Vec::with_capacity(simplices.len());
        for (d, list) in simplices.iter().enumerate() {
            let mut map = HashMap::with_capacity(list.len());
            for (p, s) in list.iter().enumerate() {
                if s.len() != d + 1 {
                    return Err(Error::InvalidComplex(format!(
                        "simplex {s:?} listed in dimension {d}"
                    )));
                }
                if let Some(v) = s.iter().find(|&&v| v >= n) {
                    return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
                }
                let key = sorted(s);
                if key.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidComplex(format!(
                        "simplex {s:?} repeats a vertex"
                    )));
                }
                if map.insert(key, p).is_some() {
                    return Err(Error::InvalidComplex(format!("simplex {s:?} listed twice")));
                }
            }
            lookup.push(map);
        }
        let volumes = simplices
            .iter()
            .map(|list| {
                list.iter()
                    .map(|s| match volume_metric {
                        VolumeMetric::Unit => 1.0,
                        VolumeMetric::Euclidean => {
                            let pts: Vec<&[f64]> =
                                s.iter().map(|&v| vertices[v].as_slice()).collect();
                            simplex_volume(&pts)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            ambient_dim,
            norm,
            volume_metric,
            vertices,
            simplices,
            lookup,
            volumes,
        })
    }

    fn validate_closure(&self) -> Result<()> {
        for d in 1..self.simplices.len() {
            for s in &self.simplices[d] {
                for i in 0..=d {
                    let mut f = s.clone();
                    f.remove(i);
                    if self.find(&f).is_none() {
                        return Err(Error::InvalidComplex(format!(
                            "face {f:?} of {s:?} is not listed"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn norm(&self) -> AmbientNorm {
        self.norm
    }

    pub fn volume_metric(&self) -> VolumeMetric {
        self.volume_metric
    }

    pub fn is_abstract(&self) -> bool {
        self.volume_metric == VolumeMetric::Unit
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Top dimension (0 for a complex of vertices only).
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Number of `k`-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, id: SimplexId) -> &[usize] {
        &self.simplices[id.0][id.1]
    }

    pub fn volume(&self, id: SimplexId) -> f64 {
        self.volumes[id.0][id.1]
    }

    pub fn volumes(&self, k: usize) -> &[f64] {
        self.volumes.get(k).map_or(&[], Vec::as_slice)
    }

    /// Position of the simplex with these vertices and the sign of the
    /// given vertex order relative to the stored orientation.
    pub fn find(&self, verts: &[usize]) -> Option<(usize, i64)> {
        let d = verts.len().checked_sub(1)?;
        let p = *self.lookup.get(d)?.get(&sorted(verts))?;
        Some((p, parity(verts) * parity(&self.simplices[d][p])))
    }

    /// Signed facets `(position, sign)` of the `k`-simplex at `pos`.
    pub fn facets(&self, k: usize, pos: usize) -> Vec<(usize, i64)> {
        let s = &self.simplices[k][pos];
        (0..=k)
            .map(|i| {
                let mut f = s.clone();
                f.remove(i);
                let (p, sign) = self.find(&f).expect("complex is closed under faces");
                (p, if i % 2 == 0 { sign } else { -sign })
            })
            .collect()
    }

    /// For every `(k-1)`-simplex, its signed cofaces `(position, sign)`.
    pub fn cofaces(&self, k: usize) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.count(k - 1)];
        for pos in 0..self.count(k) {
            for (f, sign) in self.facets(k, pos) {
                out[f].push((pos, sign));
            }
        }
        out
    }

    /// Barycenter of a simplex (requires coordinates).
    pub fn barycenter(&self, id: SimplexId) -> Vec<f64> {
        let pts: Vec<&[f64]> = self
            .simplex(id)
            .iter()
            .map(|&v| self.vertices[v].as_slice())
            .collect();
        crate::geom::barycenter(&pts)
    }
}

/// Per-dimension lists containing every face of `simplices` (and every
/// vertex `0..n`).
fn closure(n: usize, simplices: &[Vec<usize>]) -> Result<Vec<Vec<Vec<usize>>>> {
    let top = simplices.iter().map(|s| s.len()).max().unwrap_or(1).max(1) - 1;
    let mut lists: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    let mut seen: Vec<HashMap<Vec<usize>, ()>> = vec![HashMap::new(); top + 1];
    lists[0] = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        seen[0].insert(vec![i], ());
    }
    // Listed simplices first so that they keep their own orientation.
    let mut ordered: Vec<&Vec<usize>> = simplices.iter().collect();
    ordered.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let mut push = |s: Vec<usize>, lists: &mut Vec<Vec<Vec<usize>>>| -> Result<bool> {
        if s.is_empty() {
            return Err(Error::InvalidComplex("empty simplex".into()));
        }
        if let Some(v) = s.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
        }
        let key = sorted(&s);
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidComplex(format!(
                "simplex {s:?} repeats a vertex"
            )));
        }
        let d = s.len() - 1;
        if seen[d].insert(key, ()).is_none() {
            lists[d].push(s);
            return Ok(true);
        }
        Ok(false)
    };
    for s in &ordered {
        push((*s).clone(), &mut lists)?;
    }
    for d in (1..=top).rev() {
        let mut faces = Vec::new();
        for s in &lists[d] {
            let key = sorted(s);
            for i in 0..=d {
                let mut f = key.clone();
                f.remove(i);
                faces.push(f);
            }
        }
        for f in faces {
            push(f, &mut lists)?;
        }
    }
    Ok(lists)
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    ambient_dim: usize,
    norm: AmbientNorm,
    #[serde(default, skip_serializing_if = "is_euclidean_volume")]
    volume_metric: Option<VolumeMetric>,
    vertices: Vec<Vec<f64>>,
    simplices: BTreeMap<String, Vec<Vec<usize>>>,
}

fn is_euclidean_volume(v: &Option<VolumeMetric>) -> bool {
    matches!(v, None | Some(VolumeMetric::Euclidean))
}

impl Serialize for EmbeddedComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            ambient_dim: self.ambient_dim,
            norm: self.norm,
            volume_metric: Some(self.volume_metric),
            vertices: self.vertices.clone(),
            simplices: self
                .simplices
                .iter()
                .enumerate()
                .map(|(d, l)| (d.to_string(), l.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmbeddedComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ComplexJson::deserialize(d)?;
        let mut lists = Vec::new();
        for (k, v) in raw.simplices {
            let dim: usize = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad dimension key {k:?}")))?;
            if lists.len() <= dim {
                lists.resize(dim + 1, Vec::new());
            }
            lists[dim] = v;
        }
        if raw.volume_metric == Some(VolumeMetric::Unit) {
            let n = raw.vertices.len();
            let k = EmbeddedComplex::assemble(
                0,
                raw.norm,
                VolumeMetric::Unit,
                vec![Vec::new(); n],
                lists,
            )
            .map_err(D::Error::custom)?;
            k.validate_closure().map_err(D::Error::custom)?;
            return Ok(k);
        }
        if raw.vertices.iter().any(|v| v.len() != raw.ambient_dim) {
            return Err(D::Error::custom("vertex length differs from ambient_dim"));
        }
        let k = EmbeddedComplex::assemble(
            raw.ambient_dim,
            raw.norm,
            VolumeMetric::Euclidean,
            raw.vertices,
            lists,
        )
        .map_err(D::Error::custom)?;
        k.validate_closure().map_err(D::Error::custom)?;
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> EmbeddedComplex {
        EmbeddedComplex::from_simplices(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            AmbientNorm::Euclidean,
            &[vec![0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn closure_and_lookup() {
        let k = triangle();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.count(1), 3);
        assert_eq!(k.find(&[0, 1, 2]), Some((0, 1)));
        assert_eq!(k.find(&[1, 0, 2]), Some((0, -1)));
        assert_eq!(k.find(&[2, 0, 1]), Some((0, 1)));
        assert!((k.volume((2, 0)) - 0.5).abs() < 1e-15);
        assert_eq!(k.volume((0, 1)), 1.0);
    }

    #[test]
    fn facet_signs_cancel() {
        let k = triangle();
        let mut acc = vec![0i64; k.count(0)];
        for (e, s) in k.facets(2, 0) {
            for (v, t) in k.facets(1, e) {
                acc[v] += s * t;
            }
        }
        assert!(acc.iter().all(|&c| c == 0));
    }

    #[test]
    fn validation() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        let lists = vec![
            vec![vec![0], vec![1], vec![2]],
            vec![vec![0, 1]],
            vec![vec![0, 1, 2]],
        ];
        assert!(matches!(
            EmbeddedComplex::new(v.clone(), AmbientNorm::Euclidean, lists),
            Err(Error::InvalidComplex(_))
        ));
        let rep = vec![vec![vec![0], vec![1], vec![2]], vec![vec![1, 1]]];
        assert!(EmbeddedComplex::new(v, AmbientNorm::Euclidean, rep).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k = triangle();
        let s = serde_json::to_string(&k).unwrap();
        assert!(s.starts_with(r#"{"ambient_dim":2,"norm":"euclidean","vertices""#));
        let back: EmbeddedComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        let a = EmbeddedComplex::abstract_complex(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let back: EmbeddedComplex =
            serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.volume((1, 0)), 1.0);
    }
}
