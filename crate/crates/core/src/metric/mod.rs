//! Finite metric spaces and the set-level metrics, coverings and measure
//! estimators built on them.
//!
//! Operations are generic over the [`Metric`] trait so they run both on
//! explicit distance matrices ([`FiniteMetricSpace`]) and on large
//! Euclidean samples ([`PointCloud`]) whose distances are computed lazily.

mod cover;
mod gromov;
mod hausdorff;
mod measure;

pub use cover::{
    covering, covering_number, covering_number_with, nagata_certificate_check, separated_net,
    CoverMode, CoverOptions, NagataVerdict,
};
pub use gromov::{gh_distance, gh_distance_with_cap, GhMode, DEFAULT_GH_CAP};
pub use hausdorff::{directed_hausdorff_points, hausdorff_distance, hausdorff_distance_points};
pub use measure::{
    ball_measure, hausdorff_measure_bounds, lower_density, rectifiability_witness_check,
    DensityEstimate, MeasureBounds, WitnessVerdict,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::real_strings;
use crate::geom::AmbientNorm;

/// Read access to pairwise distances of a finite point set.
pub trait Metric {
    fn len(&self) -> usize;
    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn diameter(&self) -> f64 {
        let n = self.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                d = d.max(self.dist(i, j));
            }
        }
        d
    }

    /// Indices in the closed ball of radius `r` around `center`.
    fn closed_ball(&self, center: usize, r: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.dist(center, j) <= r)
            .collect()
    }
}

/// Explicit symmetric distance matrix, stored as its strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    upper: Vec<f64>,
    ultrametric: bool,
    labels: Option<Vec<String>>,
}

#[inline]
fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// `a + b` was computed without rounding.
fn sum_is_exact(a: f64, b: f64) -> bool {
    let s = a + b;
    s - a == b && s - b == a
}

impl FiniteMetricSpace {
    /// Build from a full matrix, validating symmetry, the zero diagonal and
    /// the triangle inequality (zero tolerance where the comparison sum is
    /// exact, `1e-12` relative otherwise).
    pub fn from_matrix(rows: &[Vec<f64>], ultrametric: bool) -> Result<Self> {
        let n = rows.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if row[i] != 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "dist({i},{i}) = {} != 0",
                    row[i]
                )));
            }
            for j in i + 1..n {
                if row[j] != rows[j][i] {
                    return Err(Error::InvalidMetric(format!(
                        "dist({i},{j}) is not symmetric"
                    )));
                }
                upper.push(row[j]);
            }
        }
        Self::from_upper(n, upper, ultrametric)
    }

    /// Build from the flat row-major strict upper triangle.
    pub fn from_upper(n: usize, upper: Vec<f64>, ultrametric: bool) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidMetric(format!(
                "upper triangle of {n} points needs {} entries, got {}",
                n * n.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        if let Some(bad) = upper.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(Error::InvalidMetric(format!(
                "distance {bad} is not a finite non-negative real"
            )));
        }
        let space = Self {
            n,
            upper,
            ultrametric,
            labels: None,
        };
        space.validate_triangle()?;
        Ok(space)
    }

    /// Trusted constructor for generators whose output is a metric by
    /// construction; skips the cubic triangle check.
    pub(crate) fn from_upper_unchecked(n: usize, upper: Vec<f64>, ultrametric: bool) -> Self {
        debug_assert_eq!(upper.len(), n * n.saturating_sub(1) / 2);
        Self {
            n,
            upper,
            ultrametric,
            labels: None,
        }
    }

    /// Distances between coordinate points under `norm` (a metric by
    /// construction, so not re-validated).
    pub fn from_points(points: &[Vec<f64>], norm: AmbientNorm) -> Self {
        let n = points.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(norm.dist(&points[i], &points[j]));
            }
        }
        Self::from_upper_unchecked(n, upper, false)
    }

    fn validate_triangle(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let dij = self.dist(i, j);
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let djk = self.dist(j, k);
                    let dik = self.dist(i, k);
                    let bound = dij + djk;
                    let tol = if sum_is_exact(dij, djk) {
                        0.0
                    } else {
                        1e-12 * bound
                    };
                    if dik > bound + tol {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails: d({i},{k}) = {dik} > d({i},{j}) + d({j},{k}) = {bound}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidMetric(
                "label count differs from point count".into(),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Whether the space carries the (unverified) ultrametric assertion.
    pub fn is_ultrametric(&self) -> bool {
        self.ultrametric
    }

    pub fn set_ultrametric(&mut self, flag: bool) {
        self.ultrametric = flag;
    }

    pub fn upper_triangle(&self) -> &[f64] {
        &self.upper
    }

    /// Subspace on the listed indices (in the given order).
    pub fn subspace(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut upper = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for a in 0..k {
            for b in a + 1..k {
                upper.push(self.dist(idx[a], idx[b]));
            }
        }
        Self::from_upper_unchecked(k, upper, self.ultrametric)
    }

    /// Copy with one distance replaced (symmetrically), re-validated.
    pub fn with_distance(&self, i: usize, j: usize, d: f64) -> Result<Self> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidArgument(format!("bad pair ({i},{j})")));
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let mut upper = self.upper.clone();
        upper[upper_index(self.n, a, b)] = d;
        Self::from_upper(self.n, upper, self.ultrametric)
    }
}

impl Metric for FiniteMetricSpace {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => 0.0,
            Less => self.upper[upper_index(self.n, i, j)],
            Greater => self.upper[upper_index(self.n, j, i)],
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MetricSpaceJson {
    n: usize,
    #[serde(with = "real_strings")]
    dist_upper: Vec<f64>,
    ultrametric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Serialize for FiniteMetricSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MetricSpaceJson {
            n: self.n,
            dist_upper: self.upper.clone(),
            ultrametric: self.ultrametric,
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MetricSpaceJson::deserialize(d)?;
        let mut space =
            Self::from_upper(raw.n, raw.dist_upper, raw.ultrametric).map_err(D::Error::custom)?;
        if let Some(labels) = raw.labels {
            space = space.with_labels(labels).map_err(D::Error::custom)?;
        }
        Ok(space)
    }
}

/// Coordinate sample with distances computed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub norm: AmbientNorm,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Self {
        Self {
            points,
            norm: AmbientNorm::Euclidean,
        }
    }
}

impl Metric for PointCloud {
    fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.norm.dist(&self.points[i], &self.points[j])
    }
}

/// Non-negative weights on the points of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasure {
    weights: Vec<f64>,
    total: f64,
}

impl WeightedMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weight {w} is not a finite non-negative real"
            )));
        }
        // Exact accumulation: the total is the correctly rounded sum.
        let exact = weights.iter().fold(
            num_rational::BigRational::from_integer(0.into()),
            |acc, w| acc + crate::exact::rational(*w),
        );
        let total = crate::exact::to_f64(&exact);
        Ok(Self { weights, total })
    }

    pub fn uniform(n: usize, total: f64) -> Result<Self> {
        Self::new(vec![total / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    #[serde(with = "real_strings")]
    weights: Vec<f64>,
}

impl Serialize for WeightedMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureJson {
            weights: self.weights.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MeasureJson::deserialize(d)?;
        Self::new(raw.weights).map_err(D::Error::custom)
    }
}

/// A family of point-index subsets claimed to cover a space, with the
/// scale `s` and boundedness constant `c` it is certified against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub members: Vec<Vec<usize>>,
    pub scale_s: f64,
    pub bound_c: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_points(
            &xs.iter().map(|x| vec![*x]).collect::<Vec<_>>(),
            AmbientNorm::Euclidean,
        )
    }

    #[test]
    fn rejects_bad_matrices() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(FiniteMetricSpace::from_matrix(&asym, false).is_err());
        let diag = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        assert!(FiniteMetricSpace::from_matrix(&diag, false).is_err());
        let tri = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&tri, false),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn dyadic_triangle_equality_is_accepted() {
        let m = vec![
            vec![0.0, 0.25, 0.5],
            vec![0.25, 0.0, 0.25],
            vec![0.5, 0.25, 0.0],
        ];
        assert!(FiniteMetricSpace::from_matrix(&m, false).is_ok());
    }

    #[test]
    fn condensed_indexing() {
        let x = line(&[0.0, 1.0, 3.0, 7.0]);
        assert_eq!(x.dist(0, 3), 7.0);
        assert_eq!(x.dist(3, 1), 6.0);
        assert_eq!(x.dist(2, 2), 0.0);
        assert_eq!(x.diameter(), 7.0);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let x = line(&[0.0, 0.25, 1.0]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"n":3,"dist_upper":["0.25","1.0","0.75"],"ultrametric":false}"#
        );
        let back: FiniteMetricSpace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn measure_total() {
        let mu = WeightedMeasure::new(vec![0.25; 4]).unwrap();
        assert_eq!(mu.total(), 1.0);
        assert!(WeightedMeasure::new(vec![-1.0]).is_err());
        let s = serde_json::to_string(&mu).unwrap();
        assert_eq!(s, r#"{"weights":["0.25","0.25","0.25","0.25"]}"#);
    }
}
