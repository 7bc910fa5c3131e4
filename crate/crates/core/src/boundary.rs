//! Lebesgue-density estimation and density-based set decomposition.
//!
//! The density of a set E at a point x is the limit of
//! λ(E ∩ B(x,r)) / λ(B(x,r)) as r → 0. Points of density 1 form the
//! essential interior E¹, points of density 0 the essential exterior E⁰,
//! and everything else the essential boundary — the natural carrier of
//! perimeter, which can be strictly smaller than the topological boundary
//! (an isolated point has density 0 yet belongs to ∂E).
//!
//! Three granularities are provided:
//!
//! * [`density_estimate`] — one analytic point, exact interval arithmetic
//!   in 1-D, a high-resolution local raster otherwise;
//! * [`classify_voxels`] — every cell of a [`VoxelSet`] at once, by
//!   discrete ball counting;
//! * [`essential_interior_shape`] / [`essential_exterior_shape`] — symbolic
//!   E¹ and E⁰ for the shape algebra (exact in 1-D; in n ≥ 2 exact for
//!   boolean scenes whose leaves meet only transversally — shared
//!   positive-area faces of abutting leaves are beyond the symbolic rule
//!   and documented as such).

use crate::geom::Point;
use crate::raster::{Grid, RasterError, VoxelSet};
use crate::shapes::mesh::{boundary_mesh_clipped, BoundaryMesh, ClipMode};
use crate::shapes::{Domain, Region, Shape, ShapeError};
use serde::{Deserialize, Serialize};

/// Mesh refinement used when extracting the reduced boundary analytically.
pub const DEFAULT_REFINEMENT: usize = 4096;

#[derive(Debug, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("ball B(x, r_max) leaves the window")]
    OutOfWindow,
    #[error("radii must be positive, finite and strictly decreasing")]
    BadRadii,
}

/// Verdict of a density estimation, with tolerance 0.05 around the three
/// special values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityClass {
    Density0,
    Density1,
    Half,
    Other,
}

impl DensityClass {
    pub fn label(&self) -> &'static str {
        match self {
            DensityClass::Density0 => "density0",
            DensityClass::Density1 => "density1",
            DensityClass::Half => "half",
            DensityClass::Other => "other",
        }
    }
}

/// Density ratios of a set at one point across a radii ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub point: Point,
    /// Strictly decreasing radii.
    pub radii: Vec<f64>,
    /// λ(E ∩ B(x,r)) / λ(B(x,r)) per radius, each in [0,1]. Discrete
    /// ratios share numerator and denominator cell counts, so the unit-ball
    /// volume factor cancels.
    pub ratios: Vec<f64>,
    /// Tail-averaged density estimate in [0,1].
    pub theta: f64,
    pub class: DensityClass,
}

const CLASS_TOL: f64 = 0.05;

fn classify_theta(theta: f64) -> DensityClass {
    if theta <= CLASS_TOL {
        DensityClass::Density0
    } else if theta >= 1.0 - CLASS_TOL {
        DensityClass::Density1
    } else if (theta - 0.5).abs() <= CLASS_TOL {
        DensityClass::Half
    } else {
        DensityClass::Other
    }
}

/// Default ladder r_k = scale · 2^{−k}, k = 0..5.
pub fn default_radii(scale: f64) -> Vec<f64> {
    (0..5).map(|k| scale * 0.5f64.powi(k)).collect()
}

fn check_radii(radii: &[f64]) -> Result<(), BoundaryError> {
    if radii.is_empty()
        || radii.iter().any(|r| !r.is_finite() || *r <= 0.0)
        || radii.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(BoundaryError::BadRadii);
    }
    Ok(())
}

fn tail_average(ratios: &[f64]) -> f64 {
    let k = ratios.len().min(3);
    let tail = &ratios[ratios.len() - k..];
    tail.iter().sum::<f64>() / k as f64
}

/// Local grid resolution per axis for the raster density path.
fn local_resolution(dim: usize) -> usize {
    match dim {
        2 => 400,
        _ => 96,
    }
}

/// Estimates the Lebesgue density of E at x across a radii ladder.
///
/// 1-D ratios are exact interval arithmetic; n ≥ 2 ratios count a local
/// grid of `local_resolution`ⁿ cell centers inside the ball (both counts
/// discrete, so the ratio stays in [0,1] by construction). Θ̂ averages the
/// three smallest radii; classification uses ±0.05 around 0, ½ and 1.
pub fn density_estimate(
    e: &Shape,
    d: &Domain,
    x: Point,
    radii: &[f64],
) -> Result<DensityEstimate, BoundaryError> {
    e.validate()?;
    check_radii(radii)?;
    let dim = e.dim();
    if dim != d.dim() {
        return Err(ShapeError::DimensionMismatch(dim, d.dim()).into());
    }
    let r_max = radii[0];
    for a in 0..dim {
        if x[a] - r_max < d.window.lo[a] || x[a] + r_max > d.window.hi[a] {
            return Err(BoundaryError::OutOfWindow);
        }
    }

    let mut ratios = Vec::with_capacity(radii.len());
    if dim == 1 {
        let set = e.to_set1().ok_or(ShapeError::NotIntervalAlgebra)?;
        for &r in radii {
            let ball = crate::shapes::set1::Set1::from_parts(vec![
                crate::shapes::set1::Interval1::closed(x[0] - r, x[0] + r),
            ]);
            ratios.push((set.intersection(&ball).measure() / (2.0 * r)).clamp(0.0, 1.0));
        }
    } else {
        let n = local_resolution(dim);
        for &r in radii {
            let h = 2.0 * r / n as f64;
            let mut inside = 0u64;
            let mut total = 0u64;
            let nz = if dim == 3 { n } else { 1 };
            for iz in 0..nz {
                for iy in 0..n {
                    for ix in 0..n {
                        let mut p = [0.0; 3];
                        p[0] = x[0] - r + (ix as f64 + 0.5) * h;
                        p[1] = x[1] - r + (iy as f64 + 0.5) * h;
                        if dim == 3 {
                            p[2] = x[2] - r + (iz as f64 + 0.5) * h;
                        }
                        let mut d2 = 0.0;
                        for a in 0..dim {
                            let t = p[a] - x[a];
                            d2 += t * t;
                        }
                        if d2 > r * r {
                            continue;
                        }
                        total += 1;
                        if e.indicator(p) == Region::Inside {
                            inside += 1;
                        }
                    }
                }
            }
            ratios.push(if total == 0 { 0.0 } else { inside as f64 / total as f64 });
        }
    }
    let theta = tail_average(&ratios).clamp(0.0, 1.0);
    Ok(DensityEstimate { point: x, radii: radii.to_vec(), ratios, theta, class: classify_theta(theta) })
}

/// The reduced boundary of E inside Ω as a mesh: the density-½ facets of
/// the topological boundary, with outward normals. Isolated points and
/// other density-0/1 pieces are excluded.
pub fn reduced_boundary(e: &Shape, d: &Domain) -> Result<BoundaryMesh, BoundaryError> {
    Ok(boundary_mesh_clipped(e, d, DEFAULT_REFINEMENT, ClipMode::OpenRegion)?.reduced_only())
}

/// Discrete density label of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VoxelLabel {
    E0,
    E1,
    Essential,
}

impl VoxelLabel {
    pub fn label(&self) -> &'static str {
        match self {
            VoxelLabel::E0 => "e0",
            VoxelLabel::E1 => "e1",
            VoxelLabel::Essential => "essential",
        }
    }
}

/// Classifies every cell of `e` by discrete density: the occupied fraction
/// of in-grid cells within index distance R, tail-averaged over the radii
/// ladder, then thresholded at 0.05 / 0.95.
///
/// Returned labels are indexed like [`Grid::linear`]. Cost is
/// O(cells · ball offsets · radii); intended for classification dumps, not
/// inner loops.
pub fn classify_voxels(e: &VoxelSet, radii_in_cells: &[f64]) -> Result<Vec<VoxelLabel>, BoundaryError> {
    check_radii(radii_in_cells)?;
    let grid = e.grid();
    let dim = grid.dim();
    let mut offsets_per_radius = Vec::with_capacity(radii_in_cells.len());
    for &r in radii_in_cells {
        let b = r.floor() as i64;
        let mut offs = Vec::new();
        let (zr, yr) = match dim {
            1 => (0..=0, 0..=0),
            2 => (0..=0, -b..=b),
            _ => (-b..=b, -b..=b),
        };
        for dz in zr {
            for dy in yr.clone() {
                for dx in -b..=b {
                    let d2 = (dx * dx + dy * dy + dz * dz) as f64;
                    if d2 <= r * r {
                        offs.push([dx, dy, dz]);
                    }
                }
            }
        }
        offsets_per_radius.push(offs);
    }

    let counts = grid.counts();
    let mut labels = Vec::with_capacity(grid.cell_count());
    for lin in 0..grid.cell_count() {
        let idx = grid.from_linear(lin);
        let mut ratios = Vec::with_capacity(radii_in_cells.len());
        for offs in &offsets_per_radius {
            let mut inside = 0u64;
            let mut total = 0u64;
            for o in offs {
                let mut n = [0usize; 3];
                let mut ok = true;
                for a in 0..3 {
                    let v = idx[a] as i64 + o[a];
                    if v < 0 || v >= counts[a] as i64 {
                        ok = false;
                        break;
                    }
                    n[a] = v as usize;
                }
                if !ok {
                    continue;
                }
                total += 1;
                if e.contains(n) {
                    inside += 1;
                }
            }
            ratios.push(if total == 0 { 0.0 } else { inside as f64 / total as f64 });
        }
        let theta = tail_average(&ratios);
        labels.push(if theta <= CLASS_TOL {
            VoxelLabel::E0
        } else if theta >= 1.0 - CLASS_TOL {
            VoxelLabel::E1
        } else {
            VoxelLabel::Essential
        });
    }
    Ok(labels)
}

/// CSV dump of a voxel classification: `ix,iy,iz,label` per cell, linear
/// order.
pub fn classification_csv(grid: &Grid, labels: &[VoxelLabel]) -> String {
    let mut out = String::from("ix,iy,iz,label\n");
    for (lin, lab) in labels.iter().enumerate() {
        let idx = grid.from_linear(lin);
        out.push_str(&format!("{},{},{},{}\n", idx[0], idx[1], idx[2], lab.label()));
    }
    out
}

/// Symbolic essential interior E¹ of a shape.
///
/// 1-D: exact via interval arithmetic (the result's point set is open).
/// n ≥ 2: λ-null leaves are dropped from the boolean tree and smooth
/// leaves keep their strict-inside semantics, which is exact whenever
/// distinct leaves meet only in λ-null sets. A positive-area face shared
/// by two abutting leaves has density 1 but is invisible to this rule.
pub fn essential_interior_shape(e: &Shape) -> Result<Shape, BoundaryError> {
    e.validate()?;
    if e.dim() == 1 {
        if let Some(set) = e.to_set1() {
            return Ok(Shape::Intervals { set: set.essential_interior() });
        }
    }
    Ok(drop_null_leaves(e))
}

/// Symbolic essential exterior E⁰ of a shape, relative to Ω.
///
/// 1-D: exact. n ≥ 2: Ω minus the null-stripped shape; same transversality
/// caveat as [`essential_interior_shape`].
pub fn essential_exterior_shape(e: &Shape, d: &Domain) -> Result<Shape, BoundaryError> {
    e.validate()?;
    if e.dim() != d.dim() {
        return Err(ShapeError::DimensionMismatch(e.dim(), d.dim()).into());
    }
    if e.dim() == 1 {
        if let (Some(set), Some(omega)) = (e.to_set1(), d.open_region.to_set1()) {
            return Ok(Shape::Intervals {
                set: omega.interior().intersection(&set.essential_exterior()),
            });
        }
    }
    Ok(Shape::difference(d.open_region.clone(), drop_null_leaves(e)))
}

fn drop_null_leaves(e: &Shape) -> Shape {
    let dim = e.dim();
    let empty = || Shape::Points { dim, points: Vec::new() };
    match e {
        Shape::Points { .. } => empty(),
        Shape::Ball { .. } | Shape::Box { .. } | Shape::Polygon { .. } | Shape::Intervals { .. } => {
            e.clone()
        }
        Shape::Union(a, b) => match (a.null_mass(), b.null_mass()) {
            (true, true) => empty(),
            (true, false) => drop_null_leaves(b),
            (false, true) => drop_null_leaves(a),
            (false, false) => Shape::union(drop_null_leaves(a), drop_null_leaves(b)),
        },
        Shape::Intersection(a, b) => {
            if a.null_mass() || b.null_mass() {
                empty()
            } else {
                Shape::intersection(drop_null_leaves(a), drop_null_leaves(b))
            }
        }
        Shape::Difference(a, b) => {
            if a.null_mass() {
                empty()
            } else if b.null_mass() {
                drop_null_leaves(a)
            } else {
                Shape::difference(drop_null_leaves(a), drop_null_leaves(b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AxisBox;
    use crate::raster::{rasterize, RasterMode};

    fn square_domain(half: f64) -> Domain {
        Domain::new(
            Shape::axis_box(&[-half, -half], &[half, half]),
            AxisBox::new(2, &[-half, -half], &[half, half]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn disc_density_interior_boundary_exterior() {
        let d = square_domain(3.0);
        let e = Shape::disc([0.0, 0.0], 1.0);
        let radii = default_radii(0.2);
        let interior = density_estimate(&e, &d, [0.3, 0.2, 0.0], &radii).unwrap();
        assert_eq!(interior.class, DensityClass::Density1);
        assert!((interior.theta - 1.0).abs() < 1e-12);
        let edge = density_estimate(&e, &d, [1.0, 0.0, 0.0], &radii).unwrap();
        assert_eq!(edge.class, DensityClass::Half);
        assert!((edge.theta - 0.5).abs() < 0.02, "theta {}", edge.theta);
        let outside = density_estimate(&e, &d, [2.0, 0.5, 0.0], &radii).unwrap();
        assert_eq!(outside.class, DensityClass::Density0);
        for est in [&interior, &edge, &outside] {
            assert!(est.ratios.iter().all(|r| (0.0..=1.0).contains(r)));
        }
    }

    #[test]
    fn polygon_edge_density_is_half() {
        let d = square_domain(3.0);
        let tri = Shape::Polygon {
            vertices: vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]],
        };
        let est = density_estimate(&tri, &d, [1.0, 0.0, 0.0], &default_radii(0.15)).unwrap();
        assert_eq!(est.class, DensityClass::Half);
        assert!((est.theta - 0.5).abs() < 0.02);
        // Hypotenuse midpoint, tilted edge.
        let est = density_estimate(&tri, &d, [1.0, 1.0, 0.0], &default_radii(0.15)).unwrap();
        assert!((est.theta - 0.5).abs() < 0.02);
    }

    #[test]
    fn isolated_point_has_density_zero_but_lies_on_the_boundary() {
        let d = Domain::new(
            Shape::axis_box(&[-2.0], &[4.0]),
            AxisBox::new(1, &[-2.0], &[4.0]).unwrap(),
        )
        .unwrap();
        let e = Shape::union(
            Shape::intervals_closed(&[(0.0, 1.0)]),
            Shape::Points { dim: 1, points: vec![[2.0, 0.0, 0.0]] },
        );
        let radii = default_radii(0.25);
        let at2 = density_estimate(&e, &d, [2.0, 0.0, 0.0], &radii).unwrap();
        assert_eq!(at2.class, DensityClass::Density0);
        assert_eq!(at2.theta, 0.0);
        assert_eq!(e.indicator([2.0, 0.0, 0.0]), Region::Boundary);
        let at0 = density_estimate(&e, &d, [0.0, 0.0, 0.0], &radii).unwrap();
        assert_eq!(at0.class, DensityClass::Half);
        assert!((at0.theta - 0.5).abs() < 1e-12);
        let mid = density_estimate(&e, &d, [0.5, 0.0, 0.0], &radii).unwrap();
        assert_eq!(mid.class, DensityClass::Density1);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let d = square_domain(1.0);
        let e = Shape::disc([0.0, 0.0], 0.5);
        assert!(matches!(
            density_estimate(&e, &d, [0.9, 0.0, 0.0], &[0.2, 0.1]),
            Err(BoundaryError::OutOfWindow)
        ));
        assert!(matches!(
            density_estimate(&e, &d, [0.0, 0.0, 0.0], &[0.1, 0.2]),
            Err(BoundaryError::BadRadii)
        ));
        assert!(matches!(
            density_estimate(&e, &d, [0.0, 0.0, 0.0], &[]),
            Err(BoundaryError::BadRadii)
        ));
    }

    #[test]
    fn reduced_boundary_drops_isolated_points() {
        let d = Domain::new(
            Shape::axis_box(&[-2.0], &[4.0]),
            AxisBox::new(1, &[-2.0], &[4.0]).unwrap(),
        )
        .unwrap();
        let e = Shape::union(
            Shape::intervals_closed(&[(0.0, 1.0)]),
            Shape::Points { dim: 1, points: vec![[2.0, 0.0, 0.0]] },
        );
        let red = reduced_boundary(&e, &d).unwrap();
        assert_eq!(red.facets.len(), 2);
        let mut xs: Vec<f64> = red.facets.iter().map(|f| f.geom.center()[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs, vec![0.0, 1.0]);
        assert!((red.perimeter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complement_has_negated_normals_on_matching_facets() {
        let d = square_domain(3.0);
        let e = Shape::disc([0.0, 0.0], 1.0);
        let comp = Shape::difference(d.open_region.clone(), e.clone());
        let red_e = boundary_mesh_clipped(&e, &d, 256, ClipMode::OpenRegion)
            .unwrap()
            .reduced_only();
        let red_c = boundary_mesh_clipped(&comp, &d, 256, ClipMode::OpenRegion)
            .unwrap()
            .reduced_only();
        // The complement's reduced boundary inside Ω is the same circle.
        assert_eq!(red_e.facets.len(), red_c.facets.len());
        let mut matched = 0;
        for f in &red_e.facets {
            let c = f.geom.center();
            if let Some(g) = red_c
                .facets
                .iter()
                .find(|g| crate::geom::dist(g.geom.center(), c) < 1e-9)
            {
                let dot = crate::geom::dot(f.normal, g.normal);
                assert!((dot + 1.0).abs() < 1e-9, "normals not opposite: {dot}");
                matched += 1;
            }
        }
        assert_eq!(matched, red_e.facets.len());
    }

    #[test]
    fn voxel_classification_of_a_half_plane() {
        let window = AxisBox::new(2, &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let grid = Grid::cover(&window, 64).unwrap();
        let half = Shape::axis_box(&[0.0, 0.0], &[0.5, 1.0]);
        let v = rasterize(&half, grid, RasterMode::CellCenter).unwrap();
        let labels = classify_voxels(&v, &[6.0, 4.0, 2.0]).unwrap();
        let at = |ix: usize, iy: usize| labels[grid.linear([ix, iy, 0])];
        assert_eq!(at(10, 32), VoxelLabel::E1);
        assert_eq!(at(54, 32), VoxelLabel::E0);
        assert_eq!(at(32, 32), VoxelLabel::Essential);
        let csv = classification_csv(&grid, &labels);
        assert!(csv.starts_with("ix,iy,iz,label\n0,0,0,"));
        assert_eq!(csv.lines().count(), 1 + grid.cell_count());
    }

    #[test]
    fn symbolic_essential_sets_in_one_dimension() {
        let d = Domain::new(
            Shape::axis_box(&[-2.0], &[4.0]),
            AxisBox::new(1, &[-2.0], &[4.0]).unwrap(),
        )
        .unwrap();
        let e = Shape::union(
            Shape::intervals_closed(&[(0.0, 1.0)]),
            Shape::Points { dim: 1, points: vec![[2.0, 0.0, 0.0]] },
        );
        let e1 = essential_interior_shape(&e).unwrap();
        let set = e1.to_set1().unwrap();
        // E¹ = (0,1): open, boundary {0,1} = closure of the reduced boundary.
        assert_eq!(set.boundary_points(), vec![0.0, 1.0]);
        assert!((set.measure() - 1.0).abs() < 1e-12);
        assert_eq!(e1.indicator([0.0, 0.0, 0.0]), Region::Boundary);
        assert_eq!(e1.indicator([0.5, 0.0, 0.0]), Region::Inside);
        assert_eq!(e1.indicator([2.0, 0.0, 0.0]), Region::Outside);

        let e0 = essential_exterior_shape(&e, &d).unwrap();
        assert_eq!(e0.indicator([2.0, 0.0, 0.0]), Region::Inside); // density 0 at the point
        assert_eq!(e0.indicator([0.5, 0.0, 0.0]), Region::Outside);
        assert_eq!(e0.indicator([-1.0, 0.0, 0.0]), Region::Inside);
    }

    #[test]
    fn symbolic_essential_interior_drops_null_leaves_in_2d() {
        let e = Shape::union(
            Shape::disc([0.0, 0.0], 1.0),
            Shape::Points { dim: 2, points: vec![[2.0, 2.0, 0.0]] },
        );
        let e1 = essential_interior_shape(&e).unwrap();
        assert_eq!(e1.indicator([2.0, 2.0, 0.0]), Region::Outside);
        assert_eq!(e1.indicator([0.0, 0.0, 0.0]), Region::Inside);
        assert!(e1.null_leaves().is_empty());
    }
}
