//! Midpoint sets of prescribed box dimension, covering numbers and
//! box-counting fits, and voxelized A-restricted Kakeya unions.

mod covering;
mod kakeya;
mod generator;

pub use covering::{box_dimension_fit, covering_number, covering_surrogate_factor, geometric_scales, DimensionFit};
pub use kakeya::{
    build_restricted_kakeya, write_midpoints_csv, AssignmentRule, RestrictedKakeya,
    ADVERSARIAL_CANDIDATES,
};
pub use generator::{cantor_centres, generate, FractalSpec, MAX_POINTS, REFERENCE_HALF_WIDTH};
