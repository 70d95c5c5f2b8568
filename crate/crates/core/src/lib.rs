//! Exact cut-generating functions for Gomory's group relaxations.
//!
//! The crate works with two groups:
//!
//! * the finite cyclic group ℤ/qℤ, where functions are vectors of exact
//!   rationals ([`finite`]), scored by [`criteria`] and optimized over the
//!   polytope of minimal functions ([`polytope`]);
//! * the circle 𝕋¹ = ℝ/ℤ, where functions are piecewise linear with rational
//!   data ([`torus`]).
//!
//! [`experiments`] ties both together (limit arguments, cut emission, batch
//! verification reports) and backs the `groupcut` command-line tool.
//!
//! ```
//! use groupcut::{criteria, finite, polytope};
//! use groupcut::rational::rat;
//!
//! let best = polytope::minimize_volume(5, 2).unwrap();
//! assert_eq!(best.value, rat(3, 32));
//! assert!(best.unique);
//! assert_eq!(criteria::volume_product(&finite::gom(5, 4).unwrap()), rat(3, 32));
//! ```

pub mod criteria;
pub mod error;
pub mod experiments;
pub mod finite;
pub mod group;
pub mod polytope;
pub mod rational;
pub mod sampling;
pub mod torus;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::Rational;

// The guide under `book/` is compiled as doc-tests so its snippets cannot
// drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cyclic-groups.md")]
    mod cyclic_groups {}
    #[doc = include_str!("../../../book/src/finite-functions.md")]
    mod finite_functions {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/volume-optimum.md")]
    mod volume_optimum {}
    #[doc = include_str!("../../../book/src/torus-functions.md")]
    mod torus_functions {}
    #[doc = include_str!("../../../book/src/rearrangement.md")]
    mod rearrangement {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
