//! Checks on the word ultrametric space and the tower spaces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::report::{exact, real, ExperimentReport, Series};
use crate::error::Result;
use crate::exact::unit_ball_volume;
use crate::generators::{
    gen_tower, gen_ultrametric, tower_formulas, TowerParams, UltrametricSpace,
};
use crate::metric::{
    covering_number, rectifiability_witness_check, separated_net, CoverMode, Metric,
};

pub fn check_ultrametric_lemma(symbols: u64, m: u32, depth: u32) -> Result<ExperimentReport> {
    check_ultrametric_space(&gen_ultrametric(symbols, m, depth)?)
}

/// The four quantities of the non-rectifiability argument on a depth-`D`
/// truncation, all compared in exact arithmetic (`a^m = 1/N`, weights
/// `N^{-D}`):
///
/// * (a) `N^k` balls of radius `a^{k+1}` cover, so `Σ ω_m r^m <= ω_m a^m`;
/// * (b) `μ(B̄(z, r)) <= a^{-2m} r^m` at every point for `r` in
///   `[a^{D+1}, a)`, the scales resolved by the truncation;
/// * (c) the growth constant `K` certified by (b) gives the lower bound
///   `2^{-m} ω_m μ(Z) / K >= 2^{-m} a^{2m} ω_m`;
/// * (d) no rectifiability witness (strong triangle inequality holds).
///
/// Distances are read from the space itself, so a perturbed copy is
/// checked as given.
pub fn check_ultrametric_space(u: &UltrametricSpace) -> Result<ExperimentReport> {
    let (n, m, depth) = (u.scale.symbols, u.scale.m, u.depth);
    let x = &u.space;
    let big = |e: u32| BigRational::from_integer(BigInt::from(n).pow(e));
    let omega = unit_ball_volume(m);
    let mut rep = ExperimentReport::new("ultrametric-lemma");
    rep.input("N", n);
    rep.input("m", m);
    rep.input("depth", depth);
    rep.value("a", real(u.scale.value()));
    rep.value("omega_m", real(omega));

    // (a) Covering by balls of radius a^{k+1}.
    let mut cover = Series::new("covering_number", "k");
    let mut ok_a = true;
    for k in 0..=depth {
        let count = covering_number(x, u.scale.pow(k + 1), CoverMode::Greedy)?;
        // count * ω_m a^{(k+1)m} <= ω_m a^m  <=>  count / N^{k+1} <= 1 / N.
        let lhs = BigRational::from_integer(count.into()) / big(k + 1);
        let ok = lhs <= big(1).recip();
        ok_a &= ok;
        cover.push(k as f64, count as f64, Some(n.pow(k) as f64), Some(ok));
    }
    rep.series.push(cover);
    rep.subcheck(
        "covering_upper_bound",
        ok_a,
        0.0,
        "N^k balls of radius a^(k+1) give H^m_delta <= omega_m a^m",
    );

    // (b) Frostman growth at radii a^j, j = 2..=D+1 (left ends of the
    // intervals on which the closed-ball measure is constant).
    let weight = big(depth).recip();
    let mut growth = BigRational::from_integer(0.into());
    let mut ok_b = true;
    let mut frost = Series::new("max_ball_measure", "j");
    for j in 2..=depth + 1 {
        let r = u.scale.pow(j);
        let worst = (0..x.len())
            .map(|z| x.closed_ball(z, r).len())
            .max()
            .unwrap_or(0);
        let mu = BigRational::from_integer(worst.into()) * &weight;
        // a^{-2m} r^m = N^2 / N^j; r^m = N^{-j}.
        let bound = big(2) / big(j);
        let ok = mu <= bound;
        ok_b &= ok;
        let ratio = &mu * big(j);
        if ratio > growth {
            growth = ratio;
        }
        frost.push(
            j as f64,
            crate::exact::to_f64(&mu),
            Some(crate::exact::to_f64(&bound)),
            Some(ok),
        );
    }
    rep.series.push(frost);
    rep.subcheck(
        "frostman_bound",
        ok_b,
        0.0,
        "mu(B(z, r)) <= a^(-2m) r^m for r in [a^(D+1), a)",
    );

    // (c) Mass-distribution lower bound.
    let half_m = BigRational::new(BigInt::one(), BigInt::from(2).pow(m));
    let target = &half_m / big(2); // 2^{-m} a^{2m}
    let ok_c = growth <= big(2);
    let lower = &half_m / &growth;
    rep.value("growth_constant", exact(&growth));
    rep.value("lower_bound_coefficient", exact(&lower));
    rep.value("lower_bound", real(crate::exact::to_f64(&lower) * omega));
    rep.value(
        "lower_bound_constant",
        real(crate::exact::to_f64(&target) * omega),
    );
    rep.subcheck(
        "lower_bound",
        ok_c,
        0.0,
        format!(
            "2^-m omega_m / K = {} omega_m >= 2^-m a^2m omega_m",
            crate::exact::rational_string(&lower)
        ),
    );

    // (d) Rectifiability witness.
    let w = rectifiability_witness_check(x)?;
    rep.subcheck(
        "no_rectifiability_witness",
        w.pass && x.is_ultrametric(),
        0.0,
        match w.witness {
            Some((p, q, r)) => {
                format!("witness ({p}, {q}, {r}) breaks the strong triangle inequality")
            }
            None => "strong triangle inequality holds on all triples".into(),
        },
    );
    rep.tolerance("exact", 0.0);
    rep.note("depth-D truncation: radii below a^(D+1) are unresolved and excluded");
    rep.settle();
    Ok(rep)
}

/// Relative tolerance of the base-to-roof distance sandwich.
pub const SANDWICH_TOLERANCE: f64 = 0.10;
pub const AREA_TOLERANCE: f64 = 1e-9;

/// Extreme graph distances from coarse base-ring markers to roof markers,
/// per stage.
pub fn sandwich_extremes(t: &crate::generators::Tower) -> Vec<(u32, f64, f64)> {
    (1..=t.params.n)
        .map(|k| {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for mk in t.markers.iter().filter(|mk| mk.stage == k) {
                let roof: Vec<usize> = mk
                    .roof
                    .iter()
                    .copied()
                    .filter(|&r| t.is_coarse(r))
                    .collect();
                for &b in mk.base.iter().filter(|&&b| t.is_coarse(b)) {
                    let d = t.distances_from(&[b]);
                    for &r in &roof {
                        lo = lo.min(d[r]);
                        hi = hi.max(d[r]);
                    }
                }
            }
            (k, lo, hi)
        })
        .collect()
}

pub fn check_tower_geometry(p: &TowerParams) -> Result<ExperimentReport> {
    let f = tower_formulas(p)?;
    let t = gen_tower(p)?;
    let mut rep = ExperimentReport::new("tower-geometry");
    rep.input("params", p);
    rep.value("nodes", t.n_nodes().into());
    rep.value("edges", t.n_edges().into());
    rep.value("spacing", real(t.spacing));
    rep.tolerance("area", AREA_TOLERANCE);
    rep.tolerance("sandwich", SANDWICH_TOLERANCE);

    // (a) Areas.
    let area = t.facet_area_sum();
    rep.value("facet_area_sum", real(area));
    rep.value("facet_area_exact", exact(t.facet_area_exact()));
    rep.value("area_closed_form", real(f.area_closed_form));
    rep.subcheck(
        "area",
        (area - f.area_closed_form).abs() <= AREA_TOLERANCE,
        AREA_TOLERANCE,
        format!("facet sum {area} vs closed form {}", f.area_closed_form),
    );

    // (b) Sandwich a^k <= d <= (m + 1) a^k.
    let m = p.m as f64;
    let mut lower = Series::new("base_roof_min", "k");
    let mut upper = Series::new("base_roof_max", "k");
    let mut ok_b = true;
    for (k, lo, hi) in sandwich_extremes(&t) {
        let ak = p.a().powi(k as i32);
        let ok_lo = lo >= ak * (1.0 - SANDWICH_TOLERANCE);
        let ok_hi = hi <= (m + 1.0) * ak * (1.0 + SANDWICH_TOLERANCE);
        ok_b &= ok_lo && ok_hi;
        lower.push(k as f64, lo, Some(ak), Some(ok_lo));
        upper.push(k as f64, hi, Some((m + 1.0) * ak), Some(ok_hi));
    }
    rep.series.push(lower);
    rep.series.push(upper);
    rep.subcheck(
        "sandwich",
        ok_b,
        SANDWICH_TOLERANCE,
        "a^k <= d(base, roof) <= (m+1) a^k per stage",
    );

    // (c) Diameter: eccentricity e of the origin gives e <= diam <= 2e.
    let ecc = t.distances_from(&[0]).into_iter().fold(0.0, f64::max);
    let diam0 = p.l as f64 * p.lambda() * m.sqrt();
    let bound = diam0 + 2.0 * (m + 1.0) * p.a() / (1.0 - p.a());
    rep.value("diameter_lower", real(ecc));
    rep.value("diameter_upper", real(2.0 * ecc));
    rep.value("diameter_bound", real(bound));
    rep.subcheck(
        "diameter",
        2.0 * ecc <= bound * (1.0 + SANDWICH_TOLERANCE),
        SANDWICH_TOLERANCE,
        format!(
            "diam <= {:.6} <= diam(X_0) + 2(m+1)a/(1-a) = {bound:.6}",
            2.0 * ecc
        ),
    );

    // (d) rho on its domain.
    let end = f.domain_end;
    let ok_d = f.rho_at(0.0)? == 0.0
        && f.rho_at(end / 2.0).is_ok()
        && f.rho_at(end).is_err()
        && f.rho_at(-end).is_err();
    rep.value("contractibility_c", real(f.contractibility_c));
    rep.value("rho_domain_end", real(end));
    rep.subcheck(
        "rho_domain",
        ok_d,
        0.0,
        "rho(0) = 0, defined on [0, lambda/2) only",
    );
    rep.note("contractibility of balls is not tested; only its metric consequences are");
    rep.settle();
    Ok(rep)
}

/// Covering numbers of the word space at radius `a^(k+1)`: the greedy
/// cover gives an upper bound and a maximal `a^(k+1)`-separated set a
/// lower one (in an ultrametric space a closed ball of radius `r` holds no
/// two points further apart than `r`), so agreement certifies the exact
/// value, compared against `N^k`.
pub fn check_ultrametric_covering(
    symbols: u64,
    m: u32,
    depth: u32,
    ks: &[u32],
) -> Result<ExperimentReport> {
    let u = gen_ultrametric(symbols, m, depth)?;
    let x = &u.space;
    let mut rep = ExperimentReport::new("ultrametric-covering");
    rep.input("N", symbols);
    rep.input("m", m);
    rep.input("depth", depth);
    rep.input("k", ks);
    let mut series = Series::new("covering_number", "k");
    let mut ok = true;
    for &k in ks {
        let r = u.scale.pow(k + 1);
        let upper = covering_number(x, r, CoverMode::Greedy)?;
        let lower = separated_net(x, r).len();
        let expected = symbols.pow(k) as usize;
        let this = upper == lower && upper == expected;
        ok &= this;
        series.push(k as f64, upper as f64, Some(expected as f64), Some(this));
        rep.value(&format!("packing_lower_k{k}"), lower.into());
    }
    rep.series.push(series);
    rep.subcheck(
        "covering_equals_n_pow_k",
        ok,
        0.0,
        "greedy cover = separated-set bound = N^k",
    );
    rep.tolerance("exact", 0.0);
    rep.settle();
    Ok(rep)
}
