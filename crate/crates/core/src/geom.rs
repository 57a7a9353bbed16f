//! Small coordinate-geometry kernel: norms and simplex volumes.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AmbientNorm {
    #[default]
    Euclidean,
    Sup,
}

impl AmbientNorm {
    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            AmbientNorm::Euclidean => euclidean(a, b),
            AmbientNorm::Sup => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn barycenter(points: &[&[f64]]) -> Vec<f64> {
    let d = points[0].len();
    let mut c = vec![0.0; d];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p.iter()) {
            *ci += pi;
        }
    }
    let k = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= k);
    c
}

/// Euclidean k-volume of the simplex spanned by `points` (k + 1 of them),
/// from the Gram determinant of the edge vectors at the first vertex.
pub fn simplex_volume(points: &[&[f64]]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let base = points[0];
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    if k == 1 {
        return edges[0].iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let g: f64 = edges[i].iter().zip(&edges[j]).map(|(a, b)| a * b).sum();
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let det = determinant(gram);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    det.max(0.0).sqrt() / fact
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    det
}

/// Signed volume of a full-dimensional simplex (d + 1 points in R^d).
pub fn signed_volume(points: &[&[f64]]) -> f64 {
    let d = points.len() - 1;
    let rows: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(x, y)| x - y).collect())
        .collect();
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    determinant(rows) / fact
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        let t = [&[0.0, 0.0][..], &[1.0, 0.0], &[0.0, 1.0]];
        assert!((simplex_volume(&t) - 0.5).abs() < 1e-15);
        let e = [&[0.0, 0.0, 0.0][..], &[3.0, 4.0, 0.0]];
        assert_eq!(simplex_volume(&e), 5.0);
        let tet = [
            &[0.0, 0.0, 0.0][..],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ];
        assert!((simplex_volume(&tet) - 1.0 / 6.0).abs() < 1e-15);
        assert!((signed_volume(&tet) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn sup_norm() {
        assert_eq!(AmbientNorm::Sup.dist(&[0.0, 0.0], &[1.0, -3.0]), 3.0);
    }
}
