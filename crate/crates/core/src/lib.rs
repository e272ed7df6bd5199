//! Recursive constraint-based structure learning over maximal ancestral graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the mixed-graph representation together with
//!   m-separation, latent projection, Markov boundaries and chordality.
//! * [`removability`] gives the definitional and graphical tests for removable
//!   vertices, used as oracles by the learner's tests.
//! * [`citest`] is the conditional-independence layer: an exact m-separation
//!   oracle and a Fisher-Z partial-correlation test, both behind a caching,
//!   counting [`citest::CiTester`].
//! * [`mbound`], [`lmarvel`] and [`orient`] implement the learner itself:
//!   total-conditioning Markov boundaries, the recursive removal loop and the
//!   final PAG orientation.
//! * [`sem`] and [`bench`] generate ground truth, sample data and run
//!   experiment grids.
//!
//! Numeric code (datasets, Fisher-Z, linear SEMs) is generic over the
//! [`Scalar`] trait; the aliases below fix the common `f64` and `f32`
//! instantiations.

pub mod bench;
pub mod citest;
pub mod dataset;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lmarvel;
pub mod mbound;
pub mod orient;
pub mod removability;
pub mod scalar;
pub mod seed;
pub mod sem;

pub use error::{Error, Result};
pub use graph::{Dag, Mag, Mark, MixedGraph, Pag, VertexId, VertexSet};
pub use scalar::Scalar;

/// Double-precision dataset.
pub type Dataset = dataset::Dataset<f64>;
/// Single-precision dataset.
pub type Dataset32 = dataset::Dataset<f32>;

/// Fisher-Z backend over `f64` data.
pub type FisherZ = citest::FisherZ<f64>;
/// Fisher-Z backend over `f32` data.
pub type FisherZ32 = citest::FisherZ<f32>;

/// Linear-Gaussian SEM with `f64` parameters.
pub type LinearSem = sem::LinearSem<f64>;
/// Linear-Gaussian SEM with `f32` parameters.
pub type LinearSem32 = sem::LinearSem<f32>;
