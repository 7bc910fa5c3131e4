//! Uniform grids, shape rasterization, bitset voxel sets, anisotropic
//! dilation by convex-body stencils, and anisotropic distance transforms
//! (exact brute force plus a two-sweep chamfer approximation).
//!
//! Everything here is plumbing for measure estimation: a [`VoxelSet`] stands
//! in for a bounded measurable set, [`measure`] counts cells times hⁿ, and
//! [`dilate`] realizes Minkowski sums with scaled convex bodies on-grid.
//! Stencils use the closed convention (gauge ≤ ε) throughout; the strict
//! variant of [`threshold_below`] exists for open/closed agreement checks.
//!
//! Local conventions worth knowing:
//!
//! * cells are cubes of side h; cell (i, j, k) occupies the closed box
//!   `[origin + i·h, origin + (i+1)·h] × …` and has center `origin + (i+½)·h`;
//! * isolated points that sit exactly on a cell-boundary plane rasterize
//!   into the lower-index cell (deterministic tie-break); supercover
//!   sampling of segments instead keeps every touching cell, matching the
//!   closed-box intersection semantics;
//! * bits are stored row-padded: each x-row occupies ⌈nx/64⌉ whole words so
//!   rows can be shifted independently; padding bits are always zero;
//! * the brute distance transform evaluates gauges on `h·Δindex` with the
//!   *same* floating-point expression the stencil builder uses, so closed
//!   thresholding a brute field reproduces dilation bit for bit.

use crate::convex::ConvexBody;
use crate::geom::{self, AxisBox, Point};
use crate::shapes::mesh::{BoundaryMesh, FacetGeom};
use crate::shapes::{Region, Shape};
use thiserror::Error;

/// Hard cap on addressable cells in one grid.
pub const MAX_GRID_CELLS: u64 = 1 << 31;

/// Hard cap on stencil offsets; exceeding it signals an ε/h ratio far beyond
/// anything the estimation ladders use.
pub const MAX_STENCIL_OFFSETS: u64 = 1 << 23;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("operand dimension {0} does not match grid dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("grid would hold {0} cells, over the cap {MAX_GRID_CELLS}")]
    GridTooLarge(u128),
    #[error("stencil would hold about {0} offsets, over the cap {MAX_STENCIL_OFFSETS} (ε/h too large)")]
    StencilTooLarge(u64),
    #[error("distance field requires a nonempty seed set")]
    EmptySeed,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// A uniform cubic-cell grid over an axis-aligned window.
///
/// Unused trailing axes carry count 1 and origin 0 so that 1-D and 2-D
/// grids reuse the padded 3-vector conventions of [`crate::geom`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    origin: Point,
    h: f64,
    counts: [usize; 3],
}

impl Grid {
    pub fn new(dim: usize, origin: &[f64], h: f64, counts: &[usize]) -> Result<Grid, RasterError> {
        if dim == 0 || dim > crate::MAX_DIM {
            return Err(RasterError::InvalidGrid(format!("dimension {dim} unsupported")));
        }
        if origin.len() < dim || counts.len() < dim {
            return Err(RasterError::InvalidGrid("origin/counts shorter than dimension".into()));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(RasterError::InvalidGrid(format!("spacing {h} must be positive")));
        }
        let mut o = [0.0; 3];
        let mut c = [1usize; 3];
        let mut total: u128 = 1;
        for a in 0..dim {
            if !origin[a].is_finite() {
                return Err(RasterError::InvalidGrid("non-finite origin".into()));
            }
            if counts[a] == 0 {
                return Err(RasterError::InvalidGrid("zero cell count".into()));
            }
            o[a] = origin[a];
            c[a] = counts[a];
            total *= counts[a] as u128;
        }
        if total > MAX_GRID_CELLS as u128 {
            return Err(RasterError::GridTooLarge(total));
        }
        Ok(Grid { dim, origin: o, h, counts: c })
    }

    /// Covers `window` with cubic cells: h is the longest extent divided by
    /// `n_max`, per-axis counts are rounded so the cells tile each extent.
    pub fn cover(window: &AxisBox, n_max: usize) -> Result<Grid, RasterError> {
        if n_max == 0 {
            return Err(RasterError::InvalidGrid("n_max must be positive".into()));
        }
        let dim = window.dim;
        let h = window.max_extent() / n_max as f64;
        let mut counts = [1usize; 3];
        for a in 0..dim {
            counts[a] = (window.extent(a) / h).round().max(1.0) as usize;
        }
        Grid::new(dim, &window.lo[..dim], h, &counts[..dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn cell_count(&self) -> usize {
        self.counts[0] * self.counts[1] * self.counts[2]
    }

    /// Cell volume hⁿ.
    pub fn cell_measure(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    pub fn center(&self, idx: [usize; 3]) -> Point {
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.origin[a] + (idx[a] as f64 + 0.5) * self.h;
        }
        p
    }

    pub fn linear(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.counts[0] * (idx[1] + self.counts[1] * idx[2])
    }

    pub fn from_linear(&self, lin: usize) -> [usize; 3] {
        let nx = self.counts[0];
        let ny = self.counts[1];
        [lin % nx, (lin / nx) % ny, lin / (nx * ny)]
    }

    /// The unique cell whose closed box contains `p`, resolving points on a
    /// cell-boundary plane to the lower-index cell. `None` if `p` lies
    /// outside the closed grid box.
    pub fn cell_of_point(&self, p: Point) -> Option<[usize; 3]> {
        let mut idx = [0usize; 3];
        for a in 0..self.dim {
            let u = (p[a] - self.origin[a]) / self.h;
            if u < 0.0 || u > self.counts[a] as f64 {
                return None;
            }
            let k = (u.ceil() as i64 - 1).max(0) as usize;
            idx[a] = k.min(self.counts[a] - 1);
        }
        Some(idx)
    }

    /// All cells whose closed box contains `p` (up to 2ⁿ when `p` sits on
    /// cell-boundary planes); used by supercover sampling.
    fn touching_cells(&self, p: Point, out: &mut Vec<[usize; 3]>) {
        let mut axis_opts: [[i64; 2]; 3] = [[0, -1]; 3];
        for a in 0..self.dim {
            let u = (p[a] - self.origin[a]) / self.h;
            if u < 0.0 || u > self.counts[a] as f64 {
                return; // outside the grid box entirely
            }
            let k = u.floor();
            if u == k {
                let k = k as i64;
                axis_opts[a] = [k - 1, k];
            } else {
                axis_opts[a] = [k as i64, -1];
            }
        }
        // Trailing axes only admit cell 0.
        for a in self.dim..3 {
            axis_opts[a] = [0, -1];
        }
        let take = |a: usize, which: usize| -> Option<usize> {
            let v = axis_opts[a][which];
            (v >= 0 && (v as usize) < self.counts[a]).then_some(v as usize)
        };
        for ox in 0..2 {
            let Some(ix) = take(0, ox) else { continue };
            for oy in 0..2 {
                let Some(iy) = take(1, oy) else { continue };
                for oz in 0..2 {
                    let Some(iz) = take(2, oz) else { continue };
                    out.push([ix, iy, iz]);
                }
            }
        }
    }

    fn words_per_row(&self) -> usize {
        self.counts[0].div_ceil(64)
    }

    fn row_count(&self) -> usize {
        self.counts[1] * self.counts[2]
    }

    fn last_word_mask(&self) -> u64 {
        let used = self.counts[0] - 64 * (self.words_per_row() - 1);
        if used == 64 {
            u64::MAX
        } else {
            (1u64 << used) - 1
        }
    }
}

/// A subset of grid cells stored as row-padded 64-bit words.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelSet {
    grid: Grid,
    words: Vec<u64>,
}

impl VoxelSet {
    pub fn empty(grid: Grid) -> VoxelSet {
        VoxelSet { grid, words: vec![0; grid.words_per_row() * grid.row_count()] }
    }

    pub fn full(grid: Grid) -> VoxelSet {
        let mut v = VoxelSet { grid, words: vec![u64::MAX; grid.words_per_row() * grid.row_count()] };
        v.mask_padding();
        v
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Cell count times hⁿ.
    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.grid.cell_measure()
    }

    pub fn insert(&mut self, idx: [usize; 3]) {
        let (w, b) = self.word_bit(idx);
        self.words[w] |= 1u64 << b;
    }

    pub fn contains(&self, idx: [usize; 3]) -> bool {
        let (w, b) = self.word_bit(idx);
        self.words[w] >> b & 1 == 1
    }

    fn word_bit(&self, idx: [usize; 3]) -> (usize, usize) {
        debug_assert!(
            idx[0] < self.grid.counts[0]
                && idx[1] < self.grid.counts[1]
                && idx[2] < self.grid.counts[2]
        );
        let row = idx[1] + self.grid.counts[1] * idx[2];
        (row * self.grid.words_per_row() + idx[0] / 64, idx[0] % 64)
    }

    fn mask_padding(&mut self) {
        let wpr = self.grid.words_per_row();
        let mask = self.grid.last_word_mask();
        for row in 0..self.grid.row_count() {
            self.words[row * wpr + wpr - 1] &= mask;
        }
    }

    fn check_same_grid(&self, other: &VoxelSet) -> Result<(), RasterError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(RasterError::GridMismatch)
        }
    }

    pub fn or_assign(&mut self, other: &VoxelSet) -> Result<(), RasterError> {
        self.check_same_grid(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    pub fn and_assign(&mut self, other: &VoxelSet) -> Result<(), RasterError> {
        self.check_same_grid(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        Ok(())
    }

    /// Removes every cell of `other` from `self`.
    pub fn and_not_assign(&mut self, other: &VoxelSet) -> Result<(), RasterError> {
        self.check_same_grid(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        Ok(())
    }

    pub fn complement(&self) -> VoxelSet {
        let mut out = VoxelSet {
            grid: self.grid,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.mask_padding();
        out
    }

    pub fn is_subset_of(&self, other: &VoxelSet) -> bool {
        self.grid == other.grid
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Iterates member cells in linear (x-fastest) order.
    pub fn ones(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let wpr = self.grid.words_per_row();
        let ny = self.grid.counts[1];
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let row = wi / wpr;
            let x0 = (wi % wpr) * 64;
            let (iy, iz) = (row % ny, row / ny);
            BitIter(w).map(move |b| [x0 + b, iy, iz])
        })
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Nonnegative per-cell values (anisotropic distances), linear x-fastest
/// storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: [usize; 3]) -> f64 {
        self.values[self.grid.linear(idx)]
    }
}

/// Magic bytes opening the binary field format.
pub const FIELD_MAGIC: [u8; 4] = *b"MLFD";
/// Version of the binary field format.
pub const FIELD_VERSION: u32 = 1;

/// Serializes a scalar field to the binary format: the magic, a format
/// version, the grid (dim, counts, origin, spacing), then all values as
/// little-endian f64 in linear (x-fastest) order.
pub fn field_bytes(f: &ScalarField) -> Vec<u8> {
    let g = f.grid;
    let mut out = Vec::with_capacity(64 + 8 * f.values.len());
    out.extend_from_slice(&FIELD_MAGIC);
    out.extend_from_slice(&FIELD_VERSION.to_le_bytes());
    out.extend_from_slice(&(g.dim as u32).to_le_bytes());
    for a in 0..3 {
        out.extend_from_slice(&(g.counts()[a] as u64).to_le_bytes());
    }
    for a in 0..3 {
        out.extend_from_slice(&g.origin()[a].to_le_bytes());
    }
    out.extend_from_slice(&g.spacing().to_le_bytes());
    for v in &f.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Serializes a scalar field to CSV: `ix,iy,iz,value`, one row per cell in
/// linear order.
pub fn field_csv(f: &ScalarField) -> String {
    let mut out = String::from("ix,iy,iz,value\n");
    for (lin, v) in f.values.iter().enumerate() {
        let idx = f.grid.from_linear(lin);
        out.push_str(&format!("{},{},{},{}\n", idx[0], idx[1], idx[2], v));
    }
    out
}

/// How `rasterize` decides cell membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterMode {
    /// Cell centers strictly inside the set.
    CellCenter,
    /// Cells whose closed box meets the set; keeps λⁿ-null sets visible.
    Supercover,
}

/// Rasterizes a shape onto a grid.
///
/// Supercover mode is exact for leaf shapes and unions of them. For
/// intersection and difference nodes it returns a conservative superset of
/// the true supercover (the estimation pipeline only ever supercovers
/// leaves, unions, and boundary meshes).
pub fn rasterize(shape: &Shape, grid: Grid, mode: RasterMode) -> Result<VoxelSet, RasterError> {
    if shape.dim() != grid.dim {
        return Err(RasterError::DimensionMismatch(shape.dim(), grid.dim));
    }
    match mode {
        RasterMode::CellCenter => {
            let mut v = VoxelSet::empty(grid);
            for lin in 0..grid.cell_count() {
                let idx = grid.from_linear(lin);
                if shape.indicator(grid.center(idx)) == Region::Inside {
                    v.insert(idx);
                }
            }
            Ok(v)
        }
        RasterMode::Supercover => {
            let mut v = VoxelSet::empty(grid);
            supercover_into(shape, grid, &mut v)?;
            Ok(v)
        }
    }
}

fn supercover_into(shape: &Shape, grid: Grid, out: &mut VoxelSet) -> Result<(), RasterError> {
    match shape {
        Shape::Ball { center, radius, .. } => {
            let mut lo = [0i64; 3];
            let mut hi = [0i64; 3];
            for a in 0..grid.dim {
                lo[a] = (((center[a] - radius - grid.origin[a]) / grid.h).floor() as i64) - 1;
                hi[a] = (((center[a] + radius - grid.origin[a]) / grid.h).ceil() as i64) + 1;
            }
            for_cells_in_range(grid, lo, hi, |idx| {
                // Closed box meets the closed ball iff the box point nearest
                // the center is within the radius.
                let mut d2 = 0.0;
                for a in 0..grid.dim {
                    let blo = grid.origin[a] + idx[a] as f64 * grid.h;
                    let bhi = blo + grid.h;
                    let c = center[a].clamp(blo, bhi);
                    d2 += (c - center[a]) * (c - center[a]);
                }
                if d2 <= radius * radius {
                    out.insert(idx);
                }
            });
        }
        Shape::Box { lo, hi, .. } => {
            let mut ilo = [0i64; 3];
            let mut ihi = [0i64; 3];
            for a in 0..grid.dim {
                ilo[a] = (((lo[a] - grid.origin[a]) / grid.h).floor() as i64) - 1;
                ihi[a] = (((hi[a] - grid.origin[a]) / grid.h).ceil() as i64) + 1;
            }
            for_cells_in_range(grid, ilo, ihi, |idx| {
                for a in 0..grid.dim {
                    let blo = grid.origin[a] + idx[a] as f64 * grid.h;
                    if blo > hi[a] || blo + grid.h < lo[a] {
                        return;
                    }
                }
                out.insert(idx);
            });
        }
        Shape::Polygon { vertices } => {
            let mut lo = [i64::MAX; 3];
            let mut hi = [i64::MIN; 3];
            for v in vertices {
                for a in 0..2 {
                    let u = (v[a] - grid.origin[a]) / grid.h;
                    lo[a] = lo[a].min(u.floor() as i64 - 1);
                    hi[a] = hi[a].max(u.ceil() as i64 + 1);
                }
            }
            (lo[2], hi[2]) = (0, 0);
            for_cells_in_range(grid, lo, hi, |idx| {
                let blo = [
                    grid.origin[0] + idx[0] as f64 * grid.h,
                    grid.origin[1] + idx[1] as f64 * grid.h,
                ];
                let bhi = [blo[0] + grid.h, blo[1] + grid.h];
                // Box meets polygon iff a box corner is in the closed
                // polygon or a polygon edge meets the box.
                let corner_in = [blo[0], bhi[0]].iter().any(|&x| {
                    [blo[1], bhi[1]]
                        .iter()
                        .any(|&y| shape.indicator([x, y, 0.0]) != Region::Outside)
                });
                let edge_hits = || {
                    let m = vertices.len();
                    (0..m).any(|i| {
                        segment_meets_box(vertices[i], vertices[(i + 1) % m], blo, bhi)
                    })
                };
                if corner_in || edge_hits() {
                    out.insert(idx);
                }
            });
        }
        Shape::Points { points, .. } => {
            for p in points {
                if let Some(idx) = grid.cell_of_point(*p) {
                    out.insert(idx);
                }
            }
        }
        Shape::Intervals { set } => {
            for comp in set.components() {
                if comp.lo == comp.hi {
                    if let Some(idx) = grid.cell_of_point([comp.lo, 0.0, 0.0]) {
                        out.insert(idx);
                    }
                    continue;
                }
                let ilo = ((comp.lo - grid.origin[0]) / grid.h).floor() as i64 - 1;
                let ihi = ((comp.hi - grid.origin[0]) / grid.h).ceil() as i64 + 1;
                for_cells_in_range(grid, [ilo, 0, 0], [ihi, 0, 0], |idx| {
                    let blo = grid.origin[0] + idx[0] as f64 * grid.h;
                    if blo <= comp.hi && blo + grid.h >= comp.lo {
                        out.insert(idx);
                    }
                });
            }
        }
        Shape::Union(a, b) => {
            supercover_into(a, grid, out)?;
            supercover_into(b, grid, out)?;
        }
        Shape::Intersection(a, b) => {
            let mut va = VoxelSet::empty(grid);
            supercover_into(a, grid, &mut va)?;
            let mut vb = VoxelSet::empty(grid);
            supercover_into(b, grid, &mut vb)?;
            va.and_assign(&vb)?;
            out.or_assign(&va)?;
        }
        Shape::Difference(a, _) => {
            // Conservative: every cell meeting A∖B also meets A.
            supercover_into(a, grid, out)?;
        }
    }
    Ok(())
}

/// Visits every in-range cell of the (clamped) inclusive index box.
fn for_cells_in_range(grid: Grid, lo: [i64; 3], hi: [i64; 3], mut f: impl FnMut([usize; 3])) {
    let mut clo = [0usize; 3];
    let mut chi = [0usize; 3];
    for a in 0..3 {
        let n = grid.counts[a] as i64;
        let l = lo[a].max(0);
        let h = hi[a].min(n - 1);
        if l > h {
            return;
        }
        clo[a] = l as usize;
        chi[a] = h as usize;
    }
    for iz in clo[2]..=chi[2] {
        for iy in clo[1]..=chi[1] {
            for ix in clo[0]..=chi[0] {
                f([ix, iy, iz]);
            }
        }
    }
}

/// Closed segment vs closed axis box, 2-D, by interval clipping.
fn segment_meets_box(a: Point, b: Point, blo: [f64; 2], bhi: [f64; 2]) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for axis in 0..2 {
        let d = b[axis] - a[axis];
        if d == 0.0 {
            if a[axis] < blo[axis] || a[axis] > bhi[axis] {
                return false;
            }
            continue;
        }
        let mut ta = (blo[axis] - a[axis]) / d;
        let mut tb = (bhi[axis] - a[axis]) / d;
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// Supercover of a boundary mesh: vertices use the lower-cell tie-break,
/// segments are walked through every cell their closed boxes touch
/// (including all cells meeting a crossed cell corner), triangles use an
/// exact closed box–triangle overlap test over their index bounding box.
pub fn supercover_mesh(mesh: &BoundaryMesh, grid: Grid) -> Result<VoxelSet, RasterError> {
    if mesh.dim != grid.dim {
        return Err(RasterError::DimensionMismatch(mesh.dim, grid.dim));
    }
    let mut v = VoxelSet::empty(grid);
    let mut touch = Vec::new();
    for f in &mesh.facets {
        match f.geom {
            FacetGeom::Vertex(p) => {
                if let Some(idx) = grid.cell_of_point(p) {
                    v.insert(idx);
                }
            }
            FacetGeom::Segment(a, b) => {
                segment_supercover(grid, a, b, &mut v, &mut touch);
            }
            FacetGeom::Tri(a, b, c) => {
                tri_supercover(grid, [a, b, c], &mut v);
            }
        }
    }
    Ok(v)
}

fn segment_supercover(
    grid: Grid,
    a: Point,
    b: Point,
    out: &mut VoxelSet,
    touch: &mut Vec<[usize; 3]>,
) {
    // Breakpoints where the segment crosses a cell-boundary plane.
    let mut ts: Vec<f64> = vec![0.0, 1.0];
    for axis in 0..grid.dim {
        let d = b[axis] - a[axis];
        if d == 0.0 {
            continue;
        }
        let ua = (a[axis] - grid.origin[axis]) / grid.h;
        let ub = (b[axis] - grid.origin[axis]) / grid.h;
        let (umin, umax) = if ua < ub { (ua, ub) } else { (ub, ua) };
        let mut k = umin.ceil() as i64;
        while (k as f64) <= umax {
            let plane = grid.origin[axis] + k as f64 * grid.h;
            let t = (plane - a[axis]) / d;
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
            k += 1;
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup();
    // Sample the breakpoints themselves and each sub-interval midpoint;
    // between consecutive breakpoints the containing cell is constant, and
    // at breakpoints every touching cell belongs to the supercover.
    let mut sample = |t: f64| {
        let p = geom::add(a, geom::scale(geom::sub(b, a), t));
        touch.clear();
        grid.touching_cells(p, touch);
        for idx in touch.iter() {
            out.insert(*idx);
        }
    };
    for i in 0..ts.len() {
        sample(ts[i]);
        if i + 1 < ts.len() {
            sample(0.5 * (ts[i] + ts[i + 1]));
        }
    }
}

fn tri_supercover(grid: Grid, tri: [Point; 3], out: &mut VoxelSet) {
    let mut lo = [i64::MAX; 3];
    let mut hi = [i64::MIN; 3];
    for p in &tri {
        for a in 0..3 {
            let u = (p[a] - grid.origin[a]) / grid.h;
            lo[a] = lo[a].min(u.floor() as i64 - 1);
            hi[a] = hi[a].max(u.ceil() as i64 + 1);
        }
    }
    let half = 0.5 * grid.h;
    for_cells_in_range(grid, lo, hi, |idx| {
        let c = grid.center(idx);
        if tri_box_overlap(c, half, &tri) {
            out.insert(idx);
        }
    });
}

/// Closed box (center, half-extent) vs closed triangle separating-axis
/// test: box axes, triangle plane, and the nine edge cross products. Touch
/// counts as overlap.
fn tri_box_overlap(c: Point, half: f64, tri: &[Point; 3]) -> bool {
    let v: Vec<Point> = tri.iter().map(|p| geom::sub(*p, c)).collect();
    let axis_sep = |axis: Point, r_scale: f64| -> bool {
        let r = r_scale;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &v {
            let d = geom::dot(*p, axis);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        lo > r || hi < -r
    };
    // Box axes.
    for a in 0..3 {
        let mut ax = [0.0; 3];
        ax[a] = 1.0;
        if axis_sep(ax, half) {
            return false;
        }
    }
    // Edge cross products.
    let edges = [
        geom::sub(v[1], v[0]),
        geom::sub(v[2], v[1]),
        geom::sub(v[0], v[2]),
    ];
    for e in &edges {
        for a in 0..3 {
            let mut ax = [0.0; 3];
            ax[a] = 1.0;
            let cross = geom::cross(*e, ax);
            let r = half * (cross[0].abs() + cross[1].abs() + cross[2].abs());
            if axis_sep(cross, r) {
                return false;
            }
        }
    }
    // Triangle plane.
    let n = geom::cross(edges[0], edges[1]);
    let r = half * (n[0].abs() + n[1].abs() + n[2].abs());
    let d = geom::dot(v[0], n);
    if d > r || d < -r {
        return false;
    }
    true
}

/// Lebesgue measure of a voxel set: cell count times hⁿ.
pub fn measure(v: &VoxelSet) -> f64 {
    v.measure()
}

/// One x-run of stencil offsets at fixed (dy, dz).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilRow {
    pub dy: i64,
    pub dz: i64,
    pub dx_min: i64,
    pub dx_max: i64,
}

/// The integer offsets o with gauge(C, h·o) ≤ ε, stored as contiguous
/// x-runs for fast row-smear dilation.
#[derive(Debug, Clone)]
pub struct Stencil {
    body: ConvexBody,
    eps: f64,
    h: f64,
    closed: bool,
    rows: Vec<StencilRow>,
    len: usize,
}

impl Stencil {
    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn rows(&self) -> &[StencilRow] {
        &self.rows
    }

    /// Number of offsets.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Iterates all offsets (x-fastest).
    pub fn offsets(&self) -> impl Iterator<Item = [i64; 3]> + '_ {
        self.rows
            .iter()
            .flat_map(|r| (r.dx_min..=r.dx_max).map(move |dx| [dx, r.dy, r.dz]))
    }
}

/// Builds the closed stencil {o : gauge(C, h·o) ≤ ε}.
///
/// The admissible x-offsets at fixed (dy, dz) form contiguous runs because
/// sublevel sets of the gauge are convex; runs are detected directly from
/// the per-offset test so that thresholding a brute distance field at ε
/// reproduces dilation by this stencil bit for bit.
pub fn build_stencil(body: &ConvexBody, eps: f64, grid: Grid) -> Result<Stencil, RasterError> {
    if body.dim() != grid.dim {
        return Err(RasterError::DimensionMismatch(body.dim(), grid.dim));
    }
    assert!(eps > 0.0 && eps.is_finite(), "stencil needs a positive ε");
    let h = grid.h;
    // gauge(x) ≥ |x| / circumradius, so offsets live in a Chebyshev box.
    let bound = (eps * body.circumradius() / h).ceil() as i64 + 1;
    let side = 2 * bound as u64 + 1;
    let est = side.saturating_pow(grid.dim as u32);
    if est > MAX_STENCIL_OFFSETS {
        return Err(RasterError::StencilTooLarge(est));
    }
    let (ry, rz) = match grid.dim {
        1 => (0, 0),
        2 => (bound, 0),
        _ => (bound, bound),
    };
    let mut rows = Vec::new();
    let mut len: usize = 0;
    for dz in -rz..=rz {
        for dy in -ry..=ry {
            let mut run_start: Option<i64> = None;
            for dx in -bound..=(bound + 1) {
                let inside = dx <= bound
                    && body.gauge([h * dx as f64, h * dy as f64, h * dz as f64]) <= eps;
                match (run_start, inside) {
                    (None, true) => run_start = Some(dx),
                    (Some(s), false) => {
                        rows.push(StencilRow { dy, dz, dx_min: s, dx_max: dx - 1 });
                        len += (dx - s) as usize;
                        run_start = None;
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(Stencil { body: body.clone(), eps, h, closed: true, rows, len })
}

/// Minkowski-dilates a voxel set by a stencil; cells pushed outside the
/// grid are dropped.
pub fn dilate(v: &VoxelSet, st: &Stencil) -> Result<VoxelSet, RasterError> {
    if st.h.to_bits() != v.grid.h.to_bits() {
        return Err(RasterError::GridMismatch);
    }
    let g = v.grid;
    let wpr = g.words_per_row();
    let (ny, nz) = (g.counts[1] as i64, g.counts[2] as i64);
    let mut out = VoxelSet::empty(g);
    let last_mask = g.last_word_mask();
    // The smear scratch is wider than a grid row: a left margin absorbs
    // negative dx_min (the source sits `margin` words up), and right
    // headroom keeps every intermediate doubling shift in-buffer. Masking
    // to nx bits happens only on extraction into the destination row.
    let margin: usize = st
        .rows
        .iter()
        .map(|r| ((-r.dx_min).max(0) as usize).div_ceil(64))
        .max()
        .unwrap_or(0);
    let headroom: usize = st
        .rows
        .iter()
        .map(|r| ((r.dx_max - r.dx_min) as usize).div_ceil(64) + 1)
        .max()
        .unwrap_or(1);
    let wide = wpr + margin + headroom;
    let mut smear = vec![0u64; wide];
    for row in &st.rows {
        let run = (row.dx_max - row.dx_min + 1) as u64;
        let b_words = ((-row.dx_min).max(0) as usize).div_ceil(64);
        // Extraction shift: out bit x comes from smear bit x − shift.
        let shift = row.dx_min - 64 * b_words as i64;
        for sz in 0..nz {
            let tz = sz + row.dz;
            if tz < 0 || tz >= nz {
                continue;
            }
            for sy in 0..ny {
                let ty = sy + row.dy;
                if ty < 0 || ty >= ny {
                    continue;
                }
                let src = (sy + ny * sz) as usize * wpr;
                let dst = (ty + ny * tz) as usize * wpr;
                smear.fill(0);
                smear[b_words..b_words + wpr].copy_from_slice(&v.words[src..src + wpr]);
                let mut covered: u64 = 1;
                while covered < run {
                    let s = covered.min(run - covered);
                    shl_or_inplace(&mut smear, s as i64);
                    covered += s;
                }
                shift_or_into(&mut out.words[dst..dst + wpr], &smear, shift, last_mask);
            }
        }
    }
    out.mask_padding();
    Ok(out)
}

/// row |= row << s (s ≥ 0); bits shifted past the buffer end vanish.
fn shl_or_inplace(row: &mut [u64], s: i64) {
    debug_assert!(s >= 0);
    let w = (s / 64) as usize;
    let b = (s % 64) as u32;
    let n = row.len();
    for k in (0..n).rev() {
        let mut v = 0u64;
        if k >= w {
            v = row[k - w] << b;
            if b > 0 && k > w {
                v |= row[k - w - 1] >> (64 - b);
            }
        }
        row[k] |= v;
    }
}

/// dst |= src << s (s may be negative, src may be longer than dst); bits
/// leaving the destination row vanish and its padding stays masked.
fn shift_or_into(dst: &mut [u64], src: &[u64], s: i64, last_mask: u64) {
    let n = dst.len();
    let m = src.len();
    if s >= 0 {
        let w = (s / 64) as usize;
        let b = (s % 64) as u32;
        for k in (0..n).rev() {
            let mut v = 0u64;
            if k >= w && k - w < m {
                v = src[k - w] << b;
                if b > 0 && k > w {
                    v |= src[k - w - 1] >> (64 - b);
                }
            }
            dst[k] |= v;
        }
    } else {
        let t = -s;
        let w = (t / 64) as usize;
        let b = (t % 64) as u32;
        for k in 0..n {
            let mut v = 0u64;
            if k + w < m {
                v = src[k + w] >> b;
                if b > 0 && k + w + 1 < m {
                    v |= src[k + w + 1] << (64 - b);
                }
            }
            dst[k] |= v;
        }
    }
    dst[n - 1] &= last_mask;
}

/// Distance-transform flavor: exact brute force, or a two-sweep chamfer
/// with a Chebyshev neighborhood of the given radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMethod {
    Brute,
    Chamfer { radius: usize },
}

/// Anisotropic distance to the seed set at every cell, measured by the
/// body's gauge.
///
/// Brute force takes the exact minimum of gauge(C, h·Δindex) over all seed
/// cells — O(cells · seeds), intended for oracle-scale grids. The chamfer
/// method runs one forward and one backward sweep propagating gauge-weighted
/// steps; it never undershoots the brute value, and overshoots by at most
/// the neighborhood's angular resolution.
pub fn distance_field(
    v: &VoxelSet,
    body: &ConvexBody,
    method: DistanceMethod,
) -> Result<ScalarField, RasterError> {
    if body.dim() != v.grid.dim {
        return Err(RasterError::DimensionMismatch(body.dim(), v.grid.dim));
    }
    if v.is_empty() {
        return Err(RasterError::EmptySeed);
    }
    let g = v.grid;
    let h = g.h;
    match method {
        DistanceMethod::Brute => {
            let seeds: Vec<[usize; 3]> = v.ones().collect();
            let mut values = vec![0.0f64; g.cell_count()];
            for lin in 0..g.cell_count() {
                let idx = g.from_linear(lin);
                let mut best = f64::INFINITY;
                for s in &seeds {
                    let d = [
                        h * (idx[0] as i64 - s[0] as i64) as f64,
                        h * (idx[1] as i64 - s[1] as i64) as f64,
                        h * (idx[2] as i64 - s[2] as i64) as f64,
                    ];
                    best = best.min(body.gauge(d));
                }
                values[lin] = best;
            }
            Ok(ScalarField { grid: g, values })
        }
        DistanceMethod::Chamfer { radius } => {
            assert!(radius >= 1, "chamfer radius must be at least 1");
            let r = radius as i64;
            let (ry, rz) = match g.dim {
                1 => (0, 0),
                2 => (r, 0),
                _ => (r, r),
            };
            // Offsets whose source cell precedes the scan position. Each
            // carries both step weights: the forward sweep walks src → idx
            // with displacement +o, the backward sweep with −o, and an
            // asymmetric gauge weighs those differently.
            let mut fwd: Vec<([i64; 3], f64, f64)> = Vec::new();
            for oz in -rz..=rz {
                for oy in -ry..=ry {
                    for ox in -r..=r {
                        let later = oz > 0 || (oz == 0 && (oy > 0 || (oy == 0 && ox > 0)));
                        if later {
                            let step = [h * ox as f64, h * oy as f64, h * oz as f64];
                            let w_plus = body.gauge(step);
                            let w_minus = body.gauge([-step[0], -step[1], -step[2]]);
                            fwd.push(([ox, oy, oz], w_plus, w_minus));
                        }
                    }
                }
            }
            let mut values = vec![f64::INFINITY; g.cell_count()];
            for idx in v.ones() {
                values[g.linear(idx)] = 0.0;
            }
            let counts = [g.counts[0] as i64, g.counts[1] as i64, g.counts[2] as i64];
            let relax = |values: &mut Vec<f64>, lin: usize, sign: i64| {
                let idx = g.from_linear(lin);
                let mut best = values[lin];
                for (o, w_plus, w_minus) in &fwd {
                    let src = [
                        idx[0] as i64 - sign * o[0],
                        idx[1] as i64 - sign * o[1],
                        idx[2] as i64 - sign * o[2],
                    ];
                    if (0..3).any(|a| src[a] < 0 || src[a] >= counts[a]) {
                        continue;
                    }
                    let s = g.linear([src[0] as usize, src[1] as usize, src[2] as usize]);
                    let cand = values[s] + if sign > 0 { *w_plus } else { *w_minus };
                    if cand < best {
                        best = cand;
                    }
                }
                values[lin] = best;
            };
            for lin in 0..g.cell_count() {
                relax(&mut values, lin, 1);
            }
            for lin in (0..g.cell_count()).rev() {
                relax(&mut values, lin, -1);
            }
            Ok(ScalarField { grid: g, values })
        }
    }
}

/// Cells whose field value is < ε (strict) or ≤ ε (closed).
pub fn threshold_below(f: &ScalarField, eps: f64, strict: bool) -> VoxelSet {
    let mut v = VoxelSet::empty(f.grid);
    for lin in 0..f.grid.cell_count() {
        let x = f.values[lin];
        if if strict { x < eps } else { x <= eps } {
            v.insert(f.grid.from_linear(lin));
        }
    }
    v
}

/// Morphological boundary: cells of V with a face neighbor outside V, plus
/// cells outside V with a face neighbor in V. Neighbors beyond the grid box
/// do not count. This is the fallback boundary when no analytic mesh exists.
pub fn boundary_voxels(v: &VoxelSet) -> VoxelSet {
    let g = v.grid;
    let mut out = VoxelSet::empty(g);
    let counts = [g.counts[0] as i64, g.counts[1] as i64, g.counts[2] as i64];
    for lin in 0..g.cell_count() {
        let idx = g.from_linear(lin);
        let here = v.contains(idx);
        'probe: for a in 0..g.dim {
            for step in [-1i64, 1] {
                let q = idx[a] as i64 + step;
                if q < 0 || q >= counts[a] {
                    continue;
                }
                let mut n = idx;
                n[a] = q as usize;
                if v.contains(n) != here {
                    out.insert(idx);
                    break 'probe;
                }
            }
        }
    }
    out
}
