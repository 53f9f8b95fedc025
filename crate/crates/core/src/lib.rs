//! A computational laboratory for Kakeya sets whose segment midpoints are
//! restricted to a fixed set `A`.
//!
//! Two halves live here:
//!
//! * [`bounds`] is an exact-rational exponent calculus. It encodes
//!   Kakeya maximal-function estimates as exponent triples, interpolates
//!   them, lifts an estimate from dimension `n - 1` to a restricted weak-type
//!   estimate in dimension `n`, and assembles the resulting piecewise-affine
//!   lower bounds for the Hausdorff dimension of restricted Kakeya sets.
//! * [`geometry`], [`maximal`], [`bush`] and [`fractals`] form a discrete
//!   δ-tube engine: spherical nets, tubes, voxelized unions, restricted
//!   maximal functions, the bush extraction/decomposition loop, and midpoint
//!   sets of prescribed box dimension.
//!
//! [`suites`] packages the finite-δ verification experiments that the CLI
//! and the acceptance tests drive.

pub mod bounds;
pub mod bush;
pub mod error;
pub mod fractals;
pub mod geometry;
pub mod maximal;
pub mod rng;
pub mod stats;
pub mod suites;

pub use error::{Error, Result};
