//! Node embeddings from bidirectional group random walks.
//!
//! The pipeline: a weighted [`graph::Graph`] provides one-step transition
//! distributions; [`walk`] samples walks whose length `l <= k` is drawn with
//! probability proportional to `alpha^l`, so the endpoint of a walk from `u`
//! is distributed like row `u` of the hop-weighted transition mix computed
//! exactly by [`kwat`]; [`train`] fits source vectors `S` against separate
//! forward and backward target vectors with skip-gram negative sampling; and
//! [`eval`] scores the result with the usual classification and clustering
//! metrics.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm` instead. IO, file formats, and the command-line
//! driver live in the companion `biwalk-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("biwalk-core needs either the `std` feature or the `libm` feature");

extern crate alloc;

pub mod error;
pub mod eval;
pub mod graph;
pub mod kwat;
mod math;
pub mod matrix;
pub mod train;
pub mod walk;

pub use error::{CoreError, Result};
pub use matrix::DenseMatrix;

/// Which of the two asymmetric proximities an operation refers to.
///
/// `Forward` is about the nodes a walk reaches *from* a vertex, `Backward`
/// about the nodes a walk reaches the vertex *from*. The two coincide only
/// in special cases (e.g. regular undirected graphs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    Forward,
    Backward,
}
