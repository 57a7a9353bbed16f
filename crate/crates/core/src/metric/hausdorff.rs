use super::Metric;
use crate::error::{Error, Result};
use crate::geom::euclidean;

fn directed<M: Metric + ?Sized>(from: &[usize], to: &[usize], x: &M) -> f64 {
    from.iter()
        .map(|&a| {
            to.iter()
                .map(|&b| x.dist(a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two index sets of `x`: the larger of the two
/// directed sup-inf distances.
pub fn hausdorff_distance<M: Metric + ?Sized>(a: &[usize], b: &[usize], x: &M) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(bad) = a.iter().chain(b).find(|&&i| i >= x.len()) {
        return Err(Error::InvalidArgument(format!("index {bad} out of range")));
    }
    Ok(directed(a, b, x).max(directed(b, a, x)))
}

/// `sup_{p in from} inf_{q in to} |p - q|` for Euclidean point samples.
pub fn directed_hausdorff_points(from: &[Vec<f64>], to: &[Vec<f64>]) -> f64 {
    from.iter()
        .map(|p| {
            let mut best = f64::INFINITY;
            for q in to {
                // Cheap coordinate reject before the full distance.
                let mut acc = 0.0;
                let mut pruned = false;
                for (x, y) in p.iter().zip(q) {
                    acc += (x - y) * (x - y);
                    if acc >= best * best {
                        pruned = true;
                        break;
                    }
                }
                if !pruned {
                    best = best.min(euclidean(p, q));
                }
            }
            best
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two Euclidean point samples.
pub fn hausdorff_distance_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed_hausdorff_points(a, b).max(directed_hausdorff_points(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AmbientNorm;
    use crate::metric::{FiniteMetricSpace, PointCloud};

    #[test]
    fn identical_and_singletons() {
        let x = PointCloud::new(vec![vec![0.0], vec![1.0]]);
        assert_eq!(hausdorff_distance(&[0], &[0], &x).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&[0], &[1], &x).unwrap(), 1.0);
    }

    #[test]
    fn square_corners_to_center() {
        // Oracle: brute force over all pairs gives sqrt(2)/2.
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.5],
        ];
        let x = FiniteMetricSpace::from_points(&pts, AmbientNorm::Euclidean);
        let d = hausdorff_distance(&[0, 1, 2, 3], &[4], &x).unwrap();
        assert!((d - 0.70711).abs() < 1e-5);
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn empty_set_errors() {
        let x = PointCloud::new(vec![vec![0.0]]);
        assert_eq!(hausdorff_distance(&[], &[0], &x), Err(Error::EmptySet));
    }

    #[test]
    fn point_samples() {
        let a = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        let b = vec![vec![0.0, 1.0]];
        assert!((hausdorff_distance_points(&a, &b).unwrap() - 5f64.sqrt()).abs() < 1e-15);
    }
}
