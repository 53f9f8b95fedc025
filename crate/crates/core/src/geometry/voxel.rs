use std::io::{BufRead, Write};
use std::ops::Range;

use bitvec::prelude::*;
use rayon::prelude::*;

use super::region::{BoundingBox, ConvexRegion};
use super::tube::Tube;
use super::vector::Point;
use crate::error::{domain, precondition, Error, Result};

/// Regular lattice of cubical cells of side `h` covering `[lo, lo + dims·h]`.
///
/// Cells are stored row-major with the last axis fastest; cell `i` has
/// centre `lo + (i + 1/2)·h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelGrid<const N: usize> {
    pub lo: Point<N>,
    pub h: f64,
    pub dims: [usize; N],
}

impl<const N: usize> VoxelGrid<N> {
    /// Smallest grid of side `h` anchored at `bbox.lo` that covers `bbox`.
    pub fn new(bbox: &BoundingBox<N>, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("cell size {h} must be positive"));
        }
        let mut dims = [0usize; N];
        for i in 0..N {
            let cells = (bbox.hi[i] - bbox.lo[i]) / h;
            // Absorb rounding when the extent is a whole number of cells.
            let whole = cells.round();
            let cells = if (cells - whole).abs() < 1e-9 * whole.max(1.0) { whole } else { cells.ceil() };
            dims[i] = cells.max(1.0) as usize;
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        match total {
            Some(t) if t <= 1 << 34 => Ok(Self { lo: bbox.lo, h, dims }),
            _ => domain(format!("grid {dims:?} is too large")),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(N as i32)
    }

    pub fn bbox(&self) -> BoundingBox<N> {
        BoundingBox {
            lo: self.lo,
            hi: std::array::from_fn(|i| self.lo[i] + self.dims[i] as f64 * self.h),
        }
    }

    pub fn linear(&self, idx: &[usize; N]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn unlinear(&self, mut k: usize) -> [usize; N] {
        let mut idx = [0; N];
        for i in (0..N).rev() {
            idx[i] = k % self.dims[i];
            k /= self.dims[i];
        }
        idx
    }

    pub fn center(&self, idx: &[usize; N]) -> Point<N> {
        std::array::from_fn(|i| self.lo[i] + (idx[i] as f64 + 0.5) * self.h)
    }

    /// Index of the cell containing `x`, if inside the grid.
    pub fn cell_of(&self, x: &Point<N>) -> Option<[usize; N]> {
        let mut idx = [0; N];
        for i in 0..N {
            let f = ((x[i] - self.lo[i]) / self.h).floor();
            if !(f >= 0.0 && f < self.dims[i] as f64) {
                return None;
            }
            idx[i] = f as usize;
        }
        Some(idx)
    }

    /// Cell indices along `axis` whose centres lie in `[a, b]`, clamped.
    fn axis_range(&self, axis: usize, a: f64, b: f64) -> Option<(usize, usize)> {
        let top = self.dims[axis] as f64 - 1.0;
        let i0 = ((a - self.lo[axis]) / self.h - 0.5).ceil().max(0.0);
        let i1 = ((b - self.lo[axis]) / self.h - 0.5).floor().min(top);
        (i0 <= i1).then(|| (i0 as usize, i1 as usize))
    }

    /// Linear index ranges of the cells whose centres lie in `region`, one
    /// per row along the last axis, plus whether the region pokes out of
    /// the grid.
    pub fn spans(&self, region: &(impl ConvexRegion<N> + ?Sized)) -> (Vec<Range<usize>>, bool) {
        let (alo, ahi) = region.aabb();
        let bb = self.bbox();
        let clipped = (0..N).any(|i| alo[i] < bb.lo[i] || ahi[i] > bb.hi[i]);
        let last = N - 1;
        let mut ranges = [(0usize, 0usize); N];
        for (i, r) in ranges.iter_mut().enumerate().take(last) {
            match self.axis_range(i, alo[i], ahi[i]) {
                Some(v) => *r = v,
                None => return (Vec::new(), clipped),
            }
        }
        let row_len = self.dims[last];
        let mut out = Vec::new();
        let mut idx: [usize; N] = std::array::from_fn(|i| ranges[i].0);
        idx[last] = 0;
        loop {
            let mut base = self.center(&idx);
            base[last] = self.lo[last];
            if let Some((u0, u1)) = region.line_interval(&base, last) {
                if let Some((j0, j1)) = self.axis_range(last, self.lo[last] + u0, self.lo[last] + u1) {
                    // Widen by one cell, then let the predicate decide the ends.
                    let mut j0 = j0.saturating_sub(1);
                    let mut j1 = (j1 + 1).min(row_len - 1);
                    let inside = |j: usize| {
                        let mut c = base;
                        c[last] = self.lo[last] + (j as f64 + 0.5) * self.h;
                        region.contains(&c)
                    };
                    while j0 <= j1 && !inside(j0) {
                        j0 += 1;
                    }
                    while j1 >= j0 && !inside(j1) {
                        if j1 == 0 {
                            break;
                        }
                        j1 -= 1;
                    }
                    if j0 <= j1 && inside(j1) {
                        let start = self.linear(&idx);
                        out.push(start + j0..start + j1 + 1);
                    }
                }
            }
            // Odometer over the leading axes.
            let mut axis = last;
            loop {
                if axis == 0 {
                    return (out, clipped);
                }
                axis -= 1;
                if idx[axis] < ranges[axis].1 {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = ranges[axis].0;
            }
        }
    }
}

impl<const N: usize> VoxelGrid<N> {
    /// Number of cells of this grid's lattice, extended to all of `R^N`,
    /// whose centres lie in `region`. Unlike [`VoxelGrid::spans`] this is
    /// unaffected by the box boundary.
    pub fn lattice_count(&self, region: &(impl ConvexRegion<N> + ?Sized)) -> usize {
        let (alo, ahi) = region.aabb();
        let h = self.h;
        let lo: Point<N> = std::array::from_fn(|i| self.lo[i] + (((alo[i] - self.lo[i]) / h).floor() - 1.0) * h);
        let dims: [usize; N] = std::array::from_fn(|i| ((ahi[i] - lo[i]) / h).ceil() as usize + 2);
        let cover = VoxelGrid { lo, h, dims };
        cover.spans(region).0.iter().map(|r| r.len()).sum()
    }
}

fn warn_clip(clipped: bool) {
    if clipped {
        log::warn!("region extends beyond the voxel box and was clipped");
    }
}

/// Occupancy grid: a finite union of cells standing in for a set `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelSet<const N: usize> {
    grid: VoxelGrid<N>,
    bits: BitVec<u64, Lsb0>,
}

impl<const N: usize> VoxelSet<N> {
    pub fn new(bbox: &BoundingBox<N>, h: f64) -> Result<Self> {
        Ok(Self::empty(VoxelGrid::new(bbox, h)?))
    }

    pub fn empty(grid: VoxelGrid<N>) -> Self {
        Self { bits: bitvec![u64, Lsb0; 0; grid.len()], grid }
    }

    pub fn grid(&self) -> &VoxelGrid<N> {
        &self.grid
    }

    pub fn h(&self) -> f64 {
        self.grid.h
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.grid.cell_volume()
    }

    pub fn is_occupied(&self, idx: &[usize; N]) -> bool {
        self.bits[self.grid.linear(idx)]
    }

    pub fn set(&mut self, idx: &[usize; N], value: bool) {
        let k = self.grid.linear(idx);
        self.bits.set(k, value);
    }

    /// Marks the cells whose centres lie in `region`. Returns whether the
    /// region was clipped by the box (a warning is logged).
    pub fn rasterize(&mut self, region: &(impl ConvexRegion<N> + ?Sized)) -> bool {
        let (spans, clipped) = self.grid.spans(region);
        warn_clip(clipped);
        for r in spans {
            self.bits[r].fill(true);
        }
        clipped
    }

    /// [`VoxelSet::rasterize`] for a tube, enforcing the fidelity condition
    /// `h ≤ δ/2`.
    pub fn rasterize_tube(&mut self, tube: &Tube<N>) -> Result<bool> {
        self.check_fidelity(tube.radius)?;
        Ok(self.rasterize(tube))
    }

    pub fn check_fidelity(&self, delta: f64) -> Result<()> {
        if self.grid.h > delta / 2.0 {
            return precondition(format!(
                "cell size {} exceeds half the tube radius {delta}",
                self.grid.h
            ));
        }
        Ok(())
    }

    /// Rasterizes many regions. Spans are computed in parallel and merged
    /// by union, so the result does not depend on scheduling.
    pub fn rasterize_all<R: ConvexRegion<N>>(&mut self, regions: &[R]) -> usize {
        let grid = self.grid;
        let all: Vec<(Vec<Range<usize>>, bool)> = regions.par_iter().map(|r| grid.spans(r)).collect();
        let mut clipped = 0;
        for (spans, c) in all {
            clipped += c as usize;
            for r in spans {
                self.bits[r].fill(true);
            }
        }
        if clipped > 0 {
            log::warn!("{clipped} of {} regions extend beyond the voxel box and were clipped", regions.len());
        }
        clipped
    }

    pub fn rasterize_tubes(&mut self, tubes: &[Tube<N>]) -> Result<usize> {
        if let Some(t) = tubes.iter().min_by(|a, b| a.radius.total_cmp(&b.radius)) {
            self.check_fidelity(t.radius)?;
        }
        Ok(self.rasterize_all(tubes))
    }

    /// Number of occupied cells whose centres lie in `region`.
    /// Occupied cells among the linear indices `range`.
    pub fn count_range(&self, range: Range<usize>) -> usize {
        self.bits[range].count_ones()
    }

    pub fn count_in(&self, region: &(impl ConvexRegion<N> + ?Sized)) -> usize {
        let (spans, _) = self.grid.spans(region);
        spans.into_iter().map(|r| self.bits[r].count_ones()).sum()
    }

    pub fn measure_in(&self, region: &(impl ConvexRegion<N> + ?Sized)) -> f64 {
        self.count_in(region) as f64 * self.grid.cell_volume()
    }

    /// `self ∩ region` as a new set.
    pub fn restrict_to(&self, region: &(impl ConvexRegion<N> + ?Sized)) -> Self {
        let mut out = Self::empty(self.grid);
        let (spans, _) = self.grid.spans(region);
        for r in spans {
            out.bits[r.clone()] |= &self.bits[r];
        }
        out
    }

    /// Clears every cell whose centre lies in `region`.
    pub fn remove_region(&mut self, region: &(impl ConvexRegion<N> + ?Sized)) {
        let (spans, _) = self.grid.spans(region);
        for r in spans {
            self.bits[r].fill(false);
        }
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return precondition("voxel sets live on different grids".to_string());
        }
        Ok(())
    }

    pub fn union_with(&mut self, other: &Self) -> Result<()> {
        self.same_grid(other)?;
        self.bits |= &other.bits;
        Ok(())
    }

    pub fn difference_with(&mut self, other: &Self) -> Result<()> {
        self.same_grid(other)?;
        let mut keep = other.bits.clone();
        keep = !keep;
        self.bits &= &keep;
        Ok(())
    }

    pub fn intersection_count(&self, other: &Self) -> Result<usize> {
        self.same_grid(other)?;
        Ok(self
            .bits
            .as_raw_slice()
            .iter()
            .zip(other.bits.as_raw_slice())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        Ok(self.intersection_count(other)? == self.count())
    }

    /// Bounding box of the occupied cell centres.
    pub fn occupied_aabb(&self) -> Option<(Point<N>, Point<N>)> {
        let mut lo = [usize::MAX; N];
        let mut hi = [0usize; N];
        let mut any = false;
        for k in self.bits.iter_ones() {
            let idx = self.grid.unlinear(k);
            for i in 0..N {
                lo[i] = lo[i].min(idx[i]);
                hi[i] = hi[i].max(idx[i]);
            }
            any = true;
        }
        any.then(|| (self.grid.center(&lo), self.grid.center(&hi)))
    }

    pub fn occupied_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn occupied_centers(&self) -> Vec<Point<N>> {
        self.bits
            .iter_ones()
            .map(|k| self.grid.center(&self.grid.unlinear(k)))
            .collect()
    }

    /// Run lengths of alternating empty/occupied stretches in storage
    /// order, starting with an empty run (possibly of length 0).
    pub fn runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut pos = 0;
        let len = self.bits.len();
        let mut want_one = true;
        while pos < len {
            let rest = &self.bits[pos..];
            let next = if want_one { rest.first_one() } else { rest.first_zero() };
            let run = next.unwrap_or(len - pos);
            runs.push(run);
            pos += run;
            want_one = !want_one;
        }
        runs
    }

    /// Text export; the layout is specified in `docs/FORMATS.md`.
    pub fn write_rle(&self, out: &mut impl Write) -> Result<()> {
        let join = |v: Vec<String>| v.join(" ");
        writeln!(out, "kakeya-voxels 1")?;
        writeln!(out, "n {N}")?;
        writeln!(out, "h {:.16e}", self.grid.h)?;
        writeln!(out, "lo {}", join(self.grid.lo.iter().map(|v| format!("{v:.16e}")).collect()))?;
        writeln!(out, "dims {}", join(self.grid.dims.iter().map(|v| v.to_string()).collect()))?;
        writeln!(out, "occupied {}", self.count())?;
        let runs = self.runs();
        writeln!(out, "runs {}", runs.len())?;
        for chunk in runs.chunks(32) {
            writeln!(out, "{}", join(chunk.iter().map(|v| v.to_string()).collect()))?;
        }
        Ok(())
    }

    pub fn read_rle(input: impl BufRead) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("voxel file: {m}"));
        let mut lines = input.lines();
        let mut next = |key: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing `{key}` line")))??;
            let mut words = line.split_whitespace().map(str::to_string);
            if words.next().as_deref() != Some(key) {
                return Err(bad(&format!("expected `{key}` line, found `{line}`")));
            }
            Ok(words.collect())
        };
        if next("kakeya-voxels")? != ["1"] {
            return Err(bad("unsupported version"));
        }
        let n: usize = next("n")?.first().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad n"))?;
        if n != N {
            return Err(bad(&format!("file has n = {n}, expected {N}")));
        }
        let h: f64 = next("h")?.first().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad h"))?;
        let parse_f = |v: Vec<String>| -> Option<Vec<f64>> { v.iter().map(|s| s.parse().ok()).collect() };
        let parse_u = |v: Vec<String>| -> Option<Vec<usize>> { v.iter().map(|s| s.parse().ok()).collect() };
        let lo: Point<N> = parse_f(next("lo")?)
            .and_then(|v| v.try_into().ok())
            .ok_or_else(|| bad("bad lo"))?;
        let dims: [usize; N] = parse_u(next("dims")?)
            .and_then(|v| v.try_into().ok())
            .ok_or_else(|| bad("bad dims"))?;
        let occupied = parse_u(next("occupied")?)
            .and_then(|v| v.first().copied())
            .ok_or_else(|| bad("bad occupied count"))?;
        let nruns = parse_u(next("runs")?)
            .and_then(|v| v.first().copied())
            .ok_or_else(|| bad("bad run count"))?;
        let mut runs = Vec::with_capacity(nruns);
        for line in lines {
            for w in line?.split_whitespace() {
                runs.push(w.parse::<usize>().map_err(|_| bad("bad run length"))?);
            }
        }
        if runs.len() != nruns {
            return Err(bad("run count mismatch"));
        }
        let grid = VoxelGrid { lo, h, dims };
        let mut set = Self::empty(grid);
        let mut pos = 0;
        for (i, run) in runs.into_iter().enumerate() {
            if pos + run > set.bits.len() {
                return Err(bad("runs overflow the grid"));
            }
            if i % 2 == 1 {
                set.bits[pos..pos + run].fill(true);
            }
            pos += run;
        }
        if pos != set.bits.len() || set.count() != occupied {
            return Err(bad("runs do not cover the grid"));
        }
        Ok(set)
    }
}

/// Per-cell integer counts, used for overlap fields `Σ χ_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountField<const N: usize> {
    grid: VoxelGrid<N>,
    counts: Vec<u32>,
}

impl<const N: usize> CountField<N> {
    pub fn new(grid: VoxelGrid<N>) -> Self {
        Self { counts: vec![0; grid.len()], grid }
    }

    pub fn grid(&self) -> &VoxelGrid<N> {
        &self.grid
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn add(&mut self, region: &(impl ConvexRegion<N> + ?Sized)) {
        let (spans, clipped) = self.grid.spans(region);
        warn_clip(clipped);
        for r in spans {
            for c in &mut self.counts[r] {
                *c += 1;
            }
        }
    }

    /// Adds every region; integer sums make the result order-independent.
    pub fn add_all<R: ConvexRegion<N>>(&mut self, regions: &[R]) {
        let grid = self.grid;
        let all: Vec<(Vec<Range<usize>>, bool)> = regions.par_iter().map(|r| grid.spans(r)).collect();
        for (spans, clipped) in all {
            warn_clip(clipped);
            for r in spans {
                for c in &mut self.counts[r] {
                    *c += 1;
                }
            }
        }
    }

    /// `(Σ count^p · hⁿ)^(1/p)`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let sum: f64 = self
            .counts
            .par_iter()
            .with_min_len(1 << 16)
            .filter(|&&c| c > 0)
            .map(|&c| (c as f64).powf(p))
            .sum();
        (sum * self.grid.cell_volume()).powf(1.0 / p)
    }

    /// `∫ count`, i.e. the sum of the voxel measures of the regions.
    pub fn integral(&self) -> f64 {
        self.counts.iter().map(|&c| c as u64).sum::<u64>() as f64 * self.grid.cell_volume()
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn support(&self) -> VoxelSet<N> {
        let mut s = VoxelSet::empty(self.grid);
        for (k, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                s.bits.set(k, true);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::direction::Direction;
    use crate::geometry::region::Ball;
    use crate::geometry::tube::tube_volume;

    fn unit_box<const N: usize>() -> BoundingBox<N> {
        BoundingBox::centered_cube(1.0)
    }

    #[test]
    fn grid_indexing_round_trips() {
        let g = VoxelGrid::<3>::new(&unit_box(), 0.25).unwrap();
        assert_eq!(g.dims, [8, 8, 8]);
        for k in [0, 1, 63, 200, 511] {
            assert_eq!(g.linear(&g.unlinear(k)), k);
        }
        assert_eq!(g.cell_of(&[-0.99, 0.0, 0.99]), Some([0, 4, 7]));
        assert_eq!(g.cell_of(&[1.01, 0.0, 0.0]), None);
    }

    /// Every cell is classified exactly as the predicate says.
    #[test]
    fn spans_match_predicate_cell_by_cell() {
        let g = VoxelGrid::<3>::new(&unit_box(), 1.0 / 32.0).unwrap();
        let tube = Tube::new(Direction::new([0.3, -0.5, 0.8]).unwrap(), [0.1, 0.05, -0.1], 0.09).unwrap();
        let mut v = VoxelSet::empty(g);
        v.rasterize(&tube);
        for k in 0..g.len() {
            let c = g.center(&g.unlinear(k));
            assert_eq!(v.bits[k], tube.contains(&c), "cell {c:?}");
        }
    }

    #[test]
    fn tube_outside_box_marks_nothing() {
        let mut v = VoxelSet::<2>::new(&unit_box(), 0.01).unwrap();
        let t = Tube::new(Direction::axis(0), [5.0, 5.0], 0.05).unwrap();
        assert!(v.rasterize(&t));
        assert_eq!(v.count(), 0);
    }

    #[test]
    fn rasterized_measure_is_close_and_idempotent() {
        let delta = 2f64.powi(-5);
        let mut v = VoxelSet::<2>::new(&unit_box(), 2f64.powi(-8)).unwrap();
        let t = Tube::new(Direction::new([1.0, 0.37]).unwrap(), [0.02, -0.01], delta).unwrap();
        v.rasterize_tube(&t).unwrap();
        let ratio = v.measure() / tube_volume(2, delta);
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");
        let once = v.clone();
        v.rasterize_tube(&t).unwrap();
        assert_eq!(v, once);
        assert_eq!(v.count_in(&t), v.count());
    }

    #[test]
    fn fidelity_condition_is_enforced() {
        let mut v = VoxelSet::<2>::new(&unit_box(), 0.1).unwrap();
        let t = Tube::new(Direction::axis(1), [0.0, 0.0], 0.1).unwrap();
        assert!(v.rasterize_tube(&t).is_err());
    }

    #[test]
    fn parallel_union_is_order_independent() {
        let tubes: Vec<Tube<2>> = (0..40)
            .map(|k| {
                let phi = k as f64 * 0.15;
                Tube::new(Direction::new([phi.cos(), phi.sin()]).unwrap(), [0.01 * k as f64, 0.0], 0.03).unwrap()
            })
            .collect();
        let mut a = VoxelSet::<2>::new(&unit_box(), 0.005).unwrap();
        a.rasterize_tubes(&tubes).unwrap();
        let mut b = VoxelSet::<2>::new(&unit_box(), 0.005).unwrap();
        for t in tubes.iter().rev() {
            b.rasterize(t);
        }
        assert_eq!(a, b);
    }

    #[test]
    fn set_algebra() {
        let g = VoxelGrid::<2>::new(&unit_box(), 0.02).unwrap();
        let mut a = VoxelSet::empty(g);
        a.rasterize(&Ball::new([0.0, 0.0], 0.5));
        let mut b = VoxelSet::empty(g);
        b.rasterize(&Ball::new([0.3, 0.0], 0.5));
        let both = a.intersection_count(&b).unwrap();
        let mut u = a.clone();
        u.union_with(&b).unwrap();
        assert_eq!(u.count(), a.count() + b.count() - both);
        let mut d = a.clone();
        d.difference_with(&b).unwrap();
        assert_eq!(d.count(), a.count() - both);
        assert!(d.is_subset_of(&a).unwrap());
        let r = a.restrict_to(&Ball::new([0.3, 0.0], 0.5));
        assert_eq!(r.count(), both);
        let mut cut = a.clone();
        cut.remove_region(&Ball::new([0.3, 0.0], 0.5));
        assert_eq!(cut, d);
    }

    #[test]
    fn rle_round_trip() {
        let mut v = VoxelSet::<3>::new(&unit_box(), 0.05).unwrap();
        v.rasterize(&Ball::new([0.2, -0.1, 0.0], 0.4));
        v.rasterize(&Ball::new([-0.7, 0.6, 0.2], 0.2));
        let mut buf = Vec::new();
        v.write_rle(&mut buf).unwrap();
        let back = VoxelSet::<3>::read_rle(&buf[..]).unwrap();
        assert_eq!(back, v);
        let runs = v.runs();
        assert_eq!(runs.iter().sum::<usize>(), v.grid().len());
        assert!(VoxelSet::<2>::read_rle(&buf[..]).is_err());
    }

    #[test]
    fn count_field_norms() {
        let g = VoxelGrid::<2>::new(&unit_box(), 0.01).unwrap();
        let a = Ball::new([0.0, 0.0], 0.3);
        let mut f = CountField::new(g);
        f.add_all(&[a, a]);
        let mut v = VoxelSet::empty(g);
        v.rasterize(&a);
        let m = v.measure();
        assert!((f.integral() - 2.0 * m).abs() < 1e-12);
        assert!((f.lp_norm(2.0) - (4.0 * m).sqrt()).abs() < 1e-12);
        assert_eq!(f.max(), 2);
        assert_eq!(f.support(), v);
    }
}
