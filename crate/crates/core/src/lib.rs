//! Computational toolkit for geometric measure theory on finite models:
//! metric spaces, integral chains on embedded complexes, exact flat norms
//! and filling invariants, instance generators and a reproducible
//! experiment harness.

pub mod chains;
pub mod error;
pub mod exact;
pub mod flatnorm;
pub mod generators;
pub mod geom;
pub mod harness;
pub mod metric;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/metric.md")]
    mod metric {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/flatnorm.md")]
    mod flatnorm {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
