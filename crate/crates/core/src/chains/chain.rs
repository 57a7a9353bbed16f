use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::complex::{EmbeddedComplex, SimplexId};
use crate::error::{Error, Result};

/// Integer-coefficient simplicial chain of a fixed dimension.
#[derive(Debug, Clone)]
pub struct IntegralChain {
    complex: Arc<EmbeddedComplex>,
    dim: usize,
    terms: BTreeMap<usize, i64>,
}

impl PartialEq for IntegralChain {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.terms == other.terms
            && same_complex(&self.complex, &other.complex)
    }
}

pub(crate) fn same_complex(a: &Arc<EmbeddedComplex>, b: &Arc<EmbeddedComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassBreakdown {
    pub total: f64,
    pub per_simplex: BTreeMap<usize, f64>,
}

impl IntegralChain {
    pub fn zero(complex: Arc<EmbeddedComplex>, dim: usize) -> Self {
        Self {
            complex,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Chain from `(position, coefficient)` pairs; repeated positions add up.
    pub fn from_terms(
        complex: Arc<EmbeddedComplex>,
        dim: usize,
        terms: impl IntoIterator<Item = (usize, i64)>,
    ) -> Result<Self> {
        let mut c = Self::zero(complex, dim);
        let count = c.complex.count(dim);
        for (p, k) in terms {
            if p >= count {
                return Err(Error::InvalidChain(format!(
                    "no {dim}-simplex at position {p}"
                )));
            }
            c.add_term(p, k);
        }
        Ok(c)
    }

    /// Elementary chain `coef · σ`.
    pub fn simplex(complex: Arc<EmbeddedComplex>, id: SimplexId, coef: i64) -> Result<Self> {
        Self::from_terms(complex, id.0, [(id.1, coef)])
    }

    pub(crate) fn add_term(&mut self, pos: usize, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.terms.entry(pos).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&pos);
        }
    }

    pub fn complex(&self) -> &Arc<EmbeddedComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<usize, i64> {
        &self.terms
    }

    pub fn coef(&self, pos: usize) -> i64 {
        self.terms.get(&pos).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || !same_complex(&self.complex, &other.complex) {
            return Err(Error::ComplexMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&p, &k) in &other.terms {
            out.add_term(p, k);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.complex.clone(), self.dim);
        if k != 0 {
            out.terms = self.terms.iter().map(|(&p, &c)| (p, c * k)).collect();
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// Alternating face sum.
    pub fn boundary(&self) -> Result<Self> {
        if self.dim == 0 {
            return Err(Error::ZeroChainBoundary);
        }
        let mut out = Self::zero(self.complex.clone(), self.dim - 1);
        for (&p, &k) in &self.terms {
            for (f, s) in self.complex.facets(self.dim, p) {
                out.add_term(f, s * k);
            }
        }
        Ok(out)
    }

    /// `Σ |coef| · vol`.
    pub fn mass(&self) -> MassBreakdown {
        let per_simplex: BTreeMap<usize, f64> = self
            .terms
            .iter()
            .map(|(&p, &k)| {
                (
                    p,
                    k.unsigned_abs() as f64 * self.complex.volume((self.dim, p)),
                )
            })
            .collect();
        MassBreakdown {
            total: per_simplex.values().sum(),
            per_simplex,
        }
    }

    /// Vertices of simplices with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|&p| self.complex.simplex((self.dim, p)).iter().copied())
            .collect()
    }

    /// Points of the support on the barycentric lattice with denominator
    /// `k >= 1`: every point `Σ c_v v / k` with non-negative integers
    /// `c_v` summing to `k` over a support simplex, without duplicates.
    /// Ordered by simplex, then lattice position.
    pub fn support_sample(&self, k: usize) -> Vec<Vec<f64>> {
        let k = k.max(1);
        let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        let mut out = Vec::new();
        for &p in self.terms.keys() {
            let verts = self.complex.simplex((self.dim, p));
            let mut counts = vec![0usize; verts.len()];
            lattice(&mut counts, 0, k, &mut |c| {
                let mut key: Vec<(usize, usize)> = verts
                    .iter()
                    .zip(c)
                    .filter(|(_, &c)| c > 0)
                    .map(|(&v, &c)| (v, c))
                    .collect();
                key.sort_unstable();
                if seen.insert(key.clone()) {
                    let d = self.complex.ambient_dim();
                    let mut x = vec![0.0; d];
                    for (v, c) in key {
                        for (xi, vi) in x.iter_mut().zip(&self.complex.vertices()[v]) {
                            *xi += c as f64 * vi;
                        }
                    }
                    out.push(x.into_iter().map(|xi| xi / k as f64).collect());
                }
            });
        }
        out
    }

    /// Re-express on another complex containing the same simplices (by
    /// vertex index), tracking orientation.
    pub fn transfer(&self, target: Arc<EmbeddedComplex>) -> Result<Self> {
        let mut out = Self::zero(target, self.dim);
        for (&p, &k) in &self.terms {
            let verts = self.complex.simplex((self.dim, p));
            let (q, s) = out
                .complex
                .find(verts)
                .ok_or_else(|| Error::MissingImage(verts.to_vec()))?;
            out.add_term(q, s * k);
        }
        Ok(out)
    }

    /// Chain JSON: `{"dim": m, "terms": [[[dim, pos], coef], ...]}`.
    pub fn to_json(&self) -> ChainJson {
        ChainJson {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(&p, &k)| ((self.dim, p), k))
                .collect(),
        }
    }

    pub fn from_json(complex: Arc<EmbeddedComplex>, json: &ChainJson) -> Result<Self> {
        if let Some(((d, _), _)) = json.terms.iter().find(|((d, _), _)| *d != json.dim) {
            return Err(Error::InvalidChain(format!(
                "term of dimension {d} in a {}-chain",
                json.dim
            )));
        }
        if json.terms.iter().any(|(_, k)| *k == 0) {
            return Err(Error::InvalidChain(
                "zero coefficients are not stored".into(),
            ));
        }
        Self::from_terms(
            complex,
            json.dim,
            json.terms.iter().map(|((_, p), k)| (*p, *k)),
        )
    }
}

/// Visit every way of splitting `left` among `c[i..]`.
fn lattice(c: &mut [usize], i: usize, left: usize, visit: &mut impl FnMut(&[usize])) {
    if i + 1 == c.len() {
        c[i] = left;
        visit(c);
        return;
    }
    for take in (0..=left).rev() {
        c[i] = take;
        lattice(c, i + 1, left - take, visit);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub dim: usize,
    pub terms: Vec<(SimplexId, i64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AmbientNorm;

    fn tri() -> Arc<EmbeddedComplex> {
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
    fn triangle_boundary_and_mass() {
        let k = tri();
        let t = IntegralChain::simplex(k.clone(), (2, 0), 1).unwrap();
        let b = t.boundary().unwrap();
        assert_eq!(b.terms().len(), 3);
        // Induced orientation: [1,2] - [0,2] + [0,1].
        for (verts, sign) in [([1, 2], 1), ([0, 2], -1), ([0, 1], 1)] {
            let (p, s) = k.find(&verts).unwrap();
            assert_eq!(b.coef(p), sign * s);
        }
        assert!(b.boundary().unwrap().is_zero());
        assert!((t.mass().total - 0.5).abs() < 1e-15);
        assert!((t.scale(-3).mass().total - 1.5).abs() < 1e-15);
        assert!((b.mass().total - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn support_and_cancellation() {
        let k = tri();
        let t = IntegralChain::simplex(k.clone(), (2, 0), 1).unwrap();
        assert!(IntegralChain::zero(k.clone(), 2).support().is_empty());
        assert_eq!(t.support().into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(t.sub(&t).unwrap().support().is_empty());
        assert_eq!(
            IntegralChain::zero(k, 0).boundary(),
            Err(Error::ZeroChainBoundary)
        );
    }

    #[test]
    fn json_round_trip() {
        let k = tri();
        let t = IntegralChain::from_terms(k.clone(), 1, [(0, 2), (2, -1)]).unwrap();
        let s = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(s, r#"{"dim":1,"terms":[[[1,0],2],[[1,2],-1]]}"#);
        let back = IntegralChain::from_json(k, &serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
