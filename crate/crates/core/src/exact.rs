//! Exact-arithmetic helpers shared by the solvers and the checks.
//!
//! Every finite `f64` is a dyadic rational, so converting to
//! [`BigRational`] loses nothing. Mass and volume comparisons that are
//! claimed to be exact go through these conversions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational value of a finite float.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Nearest float to an exact rational.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    // Shift so that numerator / denominator is in a comfortable range
    // before dividing in floating point.
    let num = q.numer();
    let den = q.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(num.clone(), den.clone() << (shift as usize))
    } else {
        BigRational::new(num.clone() << ((-shift) as usize), den.clone())
    };
    let mant = scaled.to_f64().unwrap_or(f64::NAN);
    mant * 2f64.powi(shift as i32)
}

/// `p/q` (or `p` for integers); the canonical exact string form.
pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Decompose a finite float into `mantissa * 2^exponent` with an odd
/// (or zero) integer mantissa.
pub fn dyadic_parts(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut exp) = if exp_bits == 0 {
        (frac as i64, -1074)
    } else {
        ((frac | (1u64 << 52)) as i64, exp_bits - 1075)
    };
    while mant & 1 == 0 {
        mant >>= 1;
        exp += 1;
    }
    (sign * mant, exp)
}

/// Common power-of-two scale turning a set of non-negative floats into
/// integers: returns `k` with every `x * 2^k` integral.
pub fn common_dyadic_scale<'a>(xs: impl IntoIterator<Item = &'a f64>) -> i32 {
    xs.into_iter()
        .filter(|x| **x != 0.0)
        .map(|x| -dyadic_parts(*x).1)
        .max()
        .unwrap_or(0)
        .max(0)
}

/// `x * 2^scale` as an exact integer, or `None` when it does not fit.
pub fn scaled_i128(x: f64, scale: i32) -> Option<i128> {
    let (mant, exp) = dyadic_parts(x);
    let shift = exp + scale;
    if mant == 0 {
        return Some(0);
    }
    if shift < 0 {
        return None;
    }
    let bits = 64 - mant.unsigned_abs().leading_zeros() as i32;
    if bits + shift > 125 {
        return None;
    }
    Some((mant as i128) << shift)
}

/// Exact rational value of `n * 2^-scale`.
pub fn unscale(n: i128, scale: i32) -> BigRational {
    let num = BigInt::from(n);
    if scale >= 0 {
        BigRational::new(num, BigInt::one() << (scale as usize))
    } else {
        BigRational::from_integer(num << ((-scale) as usize))
    }
}

/// Lebesgue measure of the unit ball in `R^m`.
pub fn unit_ball_volume(m: u32) -> f64 {
    match m {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(m - 2) * 2.0 * std::f64::consts::PI / m as f64,
    }
}

pub fn abs(q: &BigRational) -> BigRational {
    q.abs()
}

/// Round to `sig` significant decimal digits.
pub fn round_sig(x: f64, sig: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let s = format!("{:.*e}", sig.saturating_sub(1), x);
    s.parse().unwrap_or(x)
}

/// Serde adapters writing reals as decimal strings (shortest round-trip
/// representation, so dyadic values stay exact).
pub mod real_strings {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| super::real_to_string(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| {
                super::parse_real(s).ok_or_else(|| D::Error::custom(format!("bad real `{s}`")))
            })
            .collect()
    }
}

pub fn real_to_string(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

pub fn parse_real(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => {
            if let Some(q) = t.contains('/').then(|| parse_rational(t)).flatten() {
                Some(to_f64(&q))
            } else {
                t.parse().ok()
            }
        }
    }
}
