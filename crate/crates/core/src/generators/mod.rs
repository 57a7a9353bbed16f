//! Deterministic instance families: round spheres, collapsing flat tori,
//! flattening ellipsoids, word ultrametric spaces and tower spaces.

mod descriptor;
mod surface;
mod tower;
mod ultrametric;

pub use descriptor::{generate, Family, FamilyDescriptor, Generated};
pub use surface::{gen_ellipsoid, gen_sphere, gen_torus, Surface};
pub use tower::{
    gen_tower, tower_formulas, FaceKind, NodeKey, Tower, TowerFace, TowerFormulas, TowerInfo,
    TowerMarkers, TowerParams, MAX_NODES, MAX_STAGE,
};
pub use ultrametric::{
    frostman_weights, gen_ultrametric, gen_ultrametric_with_cap, Scale, UltrametricSpace,
    DEFAULT_POINT_CAP,
};
