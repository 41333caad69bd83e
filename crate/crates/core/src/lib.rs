//! Homologically persistent skeletons of planar point clouds.
//!
//! The pipeline runs cloud -> filtration -> persistence -> skeleton. A
//! [`SkeletonGraph`](hopes::SkeletonGraph) is the common output format of the
//! HoPeS family and of the Mapper and alpha-Reeb baselines, which lets the
//! [`eval`] module score all of them on the same synthetic clouds.

pub mod baselines;
pub mod error;
pub mod eval;
pub mod filtration;
pub mod geometry;
pub mod hopes;
pub mod persistence;
pub mod synth;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/clouds.md")]
    mod clouds {}
    #[doc = include_str!("../../../book/src/filtrations.md")]
    mod filtrations {}
    #[doc = include_str!("../../../book/src/persistence.md")]
    mod persistence {}
    #[doc = include_str!("../../../book/src/gaps.md")]
    mod gaps {}
    #[doc = include_str!("../../../book/src/skeletons.md")]
    mod skeletons {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
