//! δ-tube geometry in `R^n` for `n = 2, 3, 4`.
//!
//! Points are plain `[f64; N]` arrays. Every solid the engine handles is
//! convex, which lets [`voxel`] rasterize by scanning rows.

pub mod annulus;
pub mod direction;
pub mod intersect;
pub mod net;
pub mod region;
pub mod slab;
pub mod tube;
pub mod vector;
pub mod voxel;

pub use annulus::{annulus_slices, annulus_slices_with, shell_count, AnnulusReport, Shell};
pub use direction::Direction;
pub use intersect::{
    exact_planar_intersection, intersection_stats, random_crossing_pair, IntersectionStats, DEFAULT_SAMPLES,
    MIN_SAMPLES, PLANAR_CAP_ERROR_FACTOR,
};
pub use net::{greedy_net, projective_net, SphericalNet};
pub use region::{Ball, BoundingBox, ConvexRegion};
pub use slab::{slab_membership, ParallelogramSlab};
pub use tube::{sphere_area, tube_volume, unit_ball_volume, write_tubes_csv, Tube};
pub use vector::Point;
pub use voxel::{CountField, VoxelGrid, VoxelSet};
