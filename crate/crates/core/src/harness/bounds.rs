//! Exact constant expressions of the quantitative bounds, evaluated in
//! rational arithmetic from (dyadic-exact) float inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::exact::rational;

fn two_pow(k: i32) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(2).pow(k.unsigned_abs()));
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

fn rpow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Largest admissible radius `2^{-(m+6)} lambda^{-(m+1)} r`.
pub fn radius_window(m: u32, lambda: f64, r: f64) -> BigRational {
    two_pow(-(m as i32 + 6)) * rational(r) / rpow(&rational(lambda), m + 1)
}

/// Lower bound `r / (8 (2 lambda)^{m+1})` for the filling radius of slices.
pub fn fillrad_lower_bound(m: u32, lambda: f64, r: f64) -> BigRational {
    rational(r)
        / (BigRational::from_integer(8.into()) * rpow(&(rational(lambda) * two_pow(1)), m + 1))
}

/// `lambda^{m(m+1)}`, the covering-number growth factor.
pub fn covering_factor(m: u32, lambda: f64) -> BigRational {
    rpow(&rational(lambda), m * (m + 1))
}

/// `lambda^{-m(m+1)}`, the density lower-bound factor.
pub fn density_factor(m: u32, lambda: f64) -> BigRational {
    covering_factor(m, lambda).recip()
}
