use std::collections::{BTreeMap, HashSet};

use crate::error::{precondition, Result};
use crate::geometry::vector::dist_sq;
use crate::geometry::Point;
use crate::maximal::MidpointSet;

/// Outcome of the pigeonhole step.
#[derive(Debug, Clone, PartialEq)]
pub struct Pigeonhole<const N: usize> {
    /// Centre of the winning ball of radius `δ/3`.
    pub center: Point<N>,
    /// Indices of the candidates inside the winning ball.
    pub members: Vec<usize>,
    /// Number of covering balls that contain at least one candidate.
    pub balls_hit: usize,
    /// Number of covering balls needed for all of `A`.
    pub covering_balls: usize,
}

/// Side of the grid cells: a cube of this side has diameter `2δ/3`, so it
/// sits inside the ball of radius `δ/3` about its centre.
pub fn cell_side(n: usize, delta: f64) -> f64 {
    2.0 * (delta / 3.0) / (n as f64).sqrt()
}

fn cell_key<const N: usize>(x: &Point<N>, side: f64) -> [i64; N] {
    std::array::from_fn(|i| (x[i] / side).floor() as i64)
}

/// Covers `A` by balls of radius `δ/3` centred on a cubical grid and
/// returns the ball holding the most candidate midpoints. Ties go to the
/// lexicographically smallest grid index. The member count is at least
/// `⌈#candidates / balls_hit⌉`.
pub fn pigeonhole_ball<const N: usize>(
    a: &MidpointSet<N>,
    candidates: &[Point<N>],
    delta: f64,
) -> Result<Pigeonhole<N>> {
    if candidates.is_empty() {
        return precondition("no candidate midpoints".to_string());
    }
    let in_a: HashSet<[u64; N]> = a.points.iter().map(|p| p.map(f64::to_bits)).collect();
    if let Some(i) = candidates.iter().position(|p| !in_a.contains(&p.map(f64::to_bits))) {
        return precondition(format!("candidate {i} is not a point of A"));
    }
    let side = cell_side(N, delta);
    let covering_balls = a.points.iter().map(|p| cell_key(p, side)).collect::<HashSet<_>>().len();
    let mut cells: BTreeMap<[i64; N], Vec<usize>> = BTreeMap::new();
    for (i, p) in candidates.iter().enumerate() {
        cells.entry(cell_key(p, side)).or_default().push(i);
    }
    let balls_hit = cells.len();
    // BTreeMap iterates in lexicographic key order; keep the first maximum.
    let (key, own) = cells
        .iter()
        .fold(None::<(&[i64; N], &Vec<usize>)>, |best, (k, v)| match best {
            Some((_, c)) if c.len() >= v.len() => best,
            _ => Some((k, v)),
        })
        .expect("at least one cell");
    let center: Point<N> = std::array::from_fn(|i| (key[i] as f64 + 0.5) * side);
    let r_sq = (delta / 3.0).powi(2);
    // The cell's own candidates lie in the ball exactly, even where a
    // corner point rounds to just outside it.
    let mut members: Vec<usize> = candidates
        .iter()
        .enumerate()
        .filter(|(i, p)| own.binary_search(i).is_ok() || dist_sq(p, &center) <= r_sq)
        .map(|(i, _)| i)
        .collect();
    members.dedup();
    Ok(Pigeonhole { center, members, balls_hit, covering_balls })
}
