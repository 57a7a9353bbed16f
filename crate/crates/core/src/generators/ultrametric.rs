use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Metric, WeightedMeasure};

pub const DEFAULT_POINT_CAP: usize = 4096;

/// The scale `a = N^{-1/m}`, kept symbolically so that its powers can be
/// evaluated exactly whenever `N` is a perfect `m`-th power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scale {
    pub symbols: u64,
    pub m: u32,
}

impl Scale {
    /// Integer `L` with `L^m = N`, if there is one.
    pub fn integer_root(&self) -> Option<u64> {
        let guess = (self.symbols as f64).powf(1.0 / self.m as f64).round() as u64;
        (guess.saturating_sub(1)..=guess + 1).find(|&l| l.checked_pow(self.m) == Some(self.symbols))
    }

    /// `a^j` as an exact rational when `N` is a perfect power.
    pub fn pow_exact(&self, j: u32) -> Option<BigRational> {
        self.integer_root()
            .map(|l| BigRational::new(BigInt::one(), BigInt::from(l).pow(j)))
    }

    /// `a^j`; correctly rounded in the perfect-power case.
    pub fn pow(&self, j: u32) -> f64 {
        match self.pow_exact(j) {
            Some(q) => crate::exact::to_f64(&q),
            None => (self.symbols as f64).powf(-(j as f64) / self.m as f64),
        }
    }

    pub fn value(&self) -> f64 {
        self.pow(1)
    }
}

/// All words of length `depth` over `N` symbols, in lexicographic order,
/// with `d(x, y) = a^j` for the first disagreeing position `j` (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltrametricSpace {
    pub scale: Scale,
    pub depth: u32,
    pub space: FiniteMetricSpace,
}

impl UltrametricSpace {
    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Symbols of word `i`, each in `1..=N`.
    pub fn word(&self, i: usize) -> Vec<u64> {
        word(self.scale.symbols, self.depth, i)
    }

    /// Index of a word given by its symbols in `1..=N`.
    pub fn index_of(&self, w: &[u64]) -> Option<usize> {
        if w.len() != self.depth as usize || w.iter().any(|&s| s == 0 || s > self.scale.symbols) {
            return None;
        }
        Some(w.iter().fold(0usize, |acc, &s| {
            acc * self.scale.symbols as usize + (s - 1) as usize
        }))
    }

    /// First disagreement index `j` (so `d = a^j`), `None` for equal words.
    pub fn exponent(&self, i: usize, k: usize) -> Option<u32> {
        first_disagreement(self.scale.symbols, self.depth, i, k)
    }
}

fn word(n: u64, depth: u32, mut i: usize) -> Vec<u64> {
    let mut w = vec![0; depth as usize];
    for slot in w.iter_mut().rev() {
        *slot = (i as u64 % n) + 1;
        i /= n as usize;
    }
    w
}

fn first_disagreement(n: u64, depth: u32, i: usize, k: usize) -> Option<u32> {
    if i == k {
        return None;
    }
    // Words agree on a prefix of length p iff i / N^(depth-p) == k / N^(depth-p).
    let n = n as usize;
    let mut block = n.pow(depth);
    for j in 1..=depth {
        block /= n;
        if i / block != k / block {
            return Some(j);
        }
    }
    None
}

pub fn gen_ultrametric(symbols: u64, m: u32, depth: u32) -> Result<UltrametricSpace> {
    gen_ultrametric_with_cap(symbols, m, depth, DEFAULT_POINT_CAP)
}

pub fn gen_ultrametric_with_cap(
    symbols: u64,
    m: u32,
    depth: u32,
    cap: usize,
) -> Result<UltrametricSpace> {
    if symbols < 2 || m < 2 || depth < 1 {
        return Err(Error::Parameter(
            "ultrametric space needs N >= 2, m >= 2, depth >= 1".into(),
        ));
    }
    let size = (symbols as usize)
        .checked_pow(depth)
        .filter(|&s| s <= cap)
        .ok_or(Error::OverCap {
            size: (symbols as f64).powi(depth as i32) as usize,
            cap,
        })?;
    let scale = Scale { symbols, m };
    let powers: Vec<f64> = (0..=depth).map(|j| scale.pow(j)).collect();
    let mut upper = Vec::with_capacity(size * (size - 1) / 2);
    for i in 0..size {
        for k in i + 1..size {
            let j = first_disagreement(symbols, depth, i, k).expect("distinct words");
            upper.push(powers[j as usize]);
        }
    }
    let labels = (0..size)
        .map(|i| {
            word(symbols, depth, i)
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let space = FiniteMetricSpace::from_upper_unchecked(size, upper, true).with_labels(labels)?;
    Ok(UltrametricSpace {
        scale,
        depth,
        space,
    })
}

/// Uniform cylinder measure: weight `N^{-depth}` on every word.
pub fn frostman_weights<M: Metric + ?Sized>(
    symbols: u64,
    depth: u32,
    x: &M,
) -> Result<WeightedMeasure> {
    let size = (symbols as usize).checked_pow(depth).unwrap_or(usize::MAX);
    if size != x.len() {
        return Err(Error::InvalidArgument(format!(
            "N^depth = {symbols}^{depth} does not match a space of {} points",
            x.len()
        )));
    }
    WeightedMeasure::new(vec![(symbols as f64).powi(-(depth as i32)); size])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_disagreement_distances() {
        let u = gen_ultrametric(4, 2, 3).unwrap();
        assert_eq!(u.scale.value(), 0.5);
        let x = u.index_of(&[1, 1, 1]).unwrap();
        let y = u.index_of(&[1, 2, 3]).unwrap();
        assert_eq!(u.space.dist(x, y), 0.25);
        assert_eq!(u.space.dist(x, x), 0.0);
        assert_eq!(u.word(y), vec![1, 2, 3]);
        assert_eq!(u.space.labels().unwrap()[y], "1,2,3");
        assert!(u.space.is_ultrametric());
    }

    #[test]
    fn cap_and_parameters() {
        assert!(matches!(
            gen_ultrametric(4, 2, 7),
            Err(Error::OverCap { .. })
        ));
        assert!(gen_ultrametric(1, 2, 2).is_err());
        let irrational = Scale { symbols: 3, m: 2 };
        assert!(irrational.pow_exact(1).is_none());
        assert!((irrational.pow(2) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn frostman_total_is_one() {
        let u = gen_ultrametric(3, 2, 4).unwrap();
        let mu = frostman_weights(3, 4, &u.space).unwrap();
        assert_eq!(mu.weights()[0], 1.0 / 81.0);
        assert!((mu.total() - 1.0).abs() < 1e-15);
        assert!(frostman_weights(3, 3, &u.space).is_err());
    }
}
