//! Executable checks with self-contained, byte-stable reports.
//!
//! Every check returns an [`ExperimentReport`] carrying its inputs, the
//! measured and bound series, the tolerances used and a verdict. Constants
//! of the bounds are evaluated exactly ([`bounds`]); only measured
//! quantities carry tolerances.

mod constructions;
pub mod bounds;
pub mod calibration;
mod cancellation;
mod oracle;
mod properties;
mod report;
mod theorems;

pub use constructions::{
    check_tower_geometry, check_ultrametric_covering, check_ultrametric_lemma,
    check_ultrametric_space, sandwich_extremes, AREA_TOLERANCE, SANDWICH_TOLERANCE,
};
pub use cancellation::{
    cancellation_diagnostics, check_family, check_family_with, circle_sample, disc_sample, CancellationOptions,
    FamilyMember, TrendClass, DISC_TOLERANCE, ELLIPSOID_MASS_FLOOR, FLAT_TOLERANCE, MASS_TOLERANCE,
};
pub use oracle::{
    check_ilp_oracle, enumerate_filling, random_filling_instance, ORACLE_BOX, ORACLE_MAX_CANDIDATES,
};
pub use properties::{check_properties, grid_disc, PropertyCounts, HAUSDORFF_SLACK};
pub use report::{
    exact, real, ExperimentReport, Point, Real, Series, SubCheck, Verdict, SIGNIFICANT_DIGITS,
};
pub use theorems::{
    check_covering_bound, check_density_bound, check_density_points, check_fillrad_bound,
    loglog_slope, CMode, CoveringParams, DensityBoundParams, FillradParams, EXPONENT_TOLERANCE,
};
