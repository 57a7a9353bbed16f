//! Filling volume, flat norm and filling radius as exact integer
//! optimisation problems.
//!
//! Two solvers back [`solve_filling`]:
//!
//! * an exact rational simplex method with branch-and-bound, which applies
//!   to every ambient complex;
//! * for codimension-one targets in a coherently orientable pseudomanifold
//!   ambient, a min-cost circulation on the dual graph. The problem is
//!   totally unimodular there, and the solver certifies optimality by
//!   exact equality of primal and dual objective values.
//!
//! Every returned witness re-checks `T = X + ∂S` by integer arithmetic.

mod filling;
pub mod lp;
pub mod network;
mod rips;

pub use filling::{
    filling_volume, flat_distance, flat_norm, solve_filling, FillMethod, FillOptions,
    FillingProblem, FillingWitness, Objective, SolverChoice, WitnessJson,
};
pub use lp::Optimality;
pub use rips::{filling_radius, rips_complex, FillRadius, DEFAULT_SIMPLEX_CAP};
