//! Oriented simplicial complexes and integer chains on them.

mod chain;
mod complex;
mod fundamental;
mod map;
mod restrict;

pub use chain::{ChainJson, IntegralChain, MassBreakdown};
pub(crate) use complex::parity as parity_of;
pub use complex::{EmbeddedComplex, SimplexId, VolumeMetric};
pub use fundamental::{coherent_orientation, fundamental_chain};
pub use map::push_forward;
pub use restrict::{restrict_to_ball, slice_mass_profile, RestrictPolicy, Restricted, SliceSample};
