//! Bushes with known ground truth for tests and verification suites.

use crate::error::Result;
use crate::geometry::{Point, SphericalNet, Tube};

/// Tubes through `anchor` along a maximal `factor·δ/λ`-separated (folded)
/// subset of `net`, chosen greedily in net order.
pub fn separated_bush<const N: usize>(
    net: &SphericalNet<N>,
    anchor: &Point<N>,
    delta: f64,
    lambda: f64,
    factor: f64,
) -> Result<Vec<Tube<N>>> {
    let sep = factor * delta / lambda;
    let mut dirs = Vec::new();
    for d in &net.dirs {
        if dirs.iter().all(|k: &crate::geometry::Direction<N>| k.folded_chord(d) > sep) {
            dirs.push(*d);
        }
    }
    dirs.into_iter().map(|d| Tube::new(d, *anchor, delta)).collect()
}
