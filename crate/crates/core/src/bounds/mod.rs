//! Exact exponent calculus for restricted Kakeya maximal estimates.
//!
//! Everything here is exact rational arithmetic; no floating point is used
//! so that breakpoints and continuity can be checked with equality.

mod curve;
mod estimate;
mod library;
pub mod rational;

pub use curve::{
    best_lower_bound, best_lower_bound_detail, piecewise_curve, transferred_line,
    write_components_csv, Affine, LowerBound, Piece, PiecewiseBound, P_SAMPLES,
};
pub use estimate::{
    box_dimension_estimate, dimension_bound_from_estimate, dual_exponent, g_function,
    interpolate, transfer_to_restricted, validate_necessary_condition, w_exponent, Flavor,
    MaximalEstimate,
};
pub use library::{cordoba, hrz, wolff, BaseEstimateLibrary};
pub use rational::{format_exact, int, parse_rational, rat, terminating_decimal, to_f64, Rational};
