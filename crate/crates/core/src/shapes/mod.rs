//! Exact boolean shape algebra for the measured set E and the region Ω.
//!
//! A [`Shape`] is an expression tree over analytic leaves — balls, axis
//! boxes, simple polygons, finite point sets, 1-D interval unions — combined
//! with union / intersection / difference.  Leaves with λⁿ measure zero
//! (point sets, degenerate intervals) are tracked symbolically so that
//! λ-null pieces are never silently lost: the whole point of several 1-D
//! counterexamples is that an isolated point changes one-sided contents.
//!
//! The three-valued [`indicator`](Shape::indicator) classifies a point as
//! strictly inside, strictly outside, or on the resolved boundary.  Leaves on
//! both sides of a boolean node are treated as regions with their topological
//! boundary; consumers pick the open or closed representative by testing for
//! [`Region::Inside`] or for "not Outside" (a λ-null distinction).
//!
//! Boundary meshes with outward normals live in [`mesh`]; the exact 1-D
//! machinery in [`set1`] and [`exact1d`].

pub mod exact1d;
pub mod mesh;
pub mod set1;

use crate::geom::{self, AxisBox, Point};
use set1::{Interval1, Set1};

pub use exact1d::{exact_1d_content, BoundaryChoice, Functional};
pub use mesh::{BoundaryMesh, FacetGeom, MeshFacet, Orientation};

/// Shape construction / evaluation errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShapeError {
    #[error("dimension mismatch inside shape tree: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension {0} (supported: 1..=3)")]
    UnsupportedDimension(usize),
    #[error("invalid ball: radius must be > 0 and finite")]
    InvalidBall,
    #[error("invalid box: need lo < hi on every axis")]
    InvalidBox,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("shape is not a finite interval/point algebra in dimension 1")]
    NotIntervalAlgebra,
    #[error("structuring body is not a 1-D interval")]
    NonIntervalBody,
    #[error("domain window must contain the shape with margin {margin}")]
    WindowTooSmall { margin: f64 },
}

/// Three-valued point classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Inside,
    Boundary,
    Outside,
}

/// Boolean shape tree; see the module docs for semantics.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Euclidean ball; any dimension 1..=3.
    Ball { dim: usize, center: Point, radius: f64 },
    /// Axis-aligned box; any dimension 1..=3.
    Box { dim: usize, lo: Point, hi: Point },
    /// Simple, positively oriented (counter-clockwise) polygon; dimension 2.
    Polygon { vertices: Vec<Point> },
    /// Finite point set (λ-null leaf); any dimension.
    Points { dim: usize, points: Vec<Point> },
    /// Exact 1-D interval/point union.
    Intervals { set: Set1 },
    Union(std::boxed::Box<Shape>, std::boxed::Box<Shape>),
    Intersection(std::boxed::Box<Shape>, std::boxed::Box<Shape>),
    Difference(std::boxed::Box<Shape>, std::boxed::Box<Shape>),
}

impl Shape {
    /// Convenience: 2-D ball.
    pub fn disc(center: [f64; 2], radius: f64) -> Shape {
        Shape::Ball { dim: 2, center: geom::pad(&center), radius }
    }

    /// Convenience: axis box from slices.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Shape {
        Shape::Box { dim: lo.len(), lo: geom::pad(lo), hi: geom::pad(hi) }
    }

    /// Convenience: 1-D set from closed intervals and points.
    pub fn intervals_closed(parts: &[(f64, f64)]) -> Shape {
        Shape::Intervals {
            set: Set1::from_parts(
                parts.iter().map(|&(a, b)| Interval1::closed(a, b)).collect(),
            ),
        }
    }

    pub fn union(a: Shape, b: Shape) -> Shape {
        Shape::Union(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    pub fn intersection(a: Shape, b: Shape) -> Shape {
        Shape::Intersection(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    pub fn difference(a: Shape, b: Shape) -> Shape {
        Shape::Difference(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    /// Spatial dimension of the tree (leaves must agree; checked by
    /// [`validate`](Shape::validate)).
    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball { dim, .. } | Shape::Box { dim, .. } | Shape::Points { dim, .. } => *dim,
            Shape::Polygon { .. } => 2,
            Shape::Intervals { .. } => 1,
            Shape::Union(a, _) | Shape::Intersection(a, _) | Shape::Difference(a, _) => a.dim(),
        }
    }

    /// True for λⁿ-null leaves (point sets; interval unions of measure 0).
    /// Boolean nodes are not null-flagged; the flag is leaf-local.
    pub fn null_mass(&self) -> bool {
        match self {
            Shape::Points { .. } => true,
            Shape::Intervals { set } => set.measure() == 0.0,
            _ => false,
        }
    }

    /// Structural validation: dimension consistency, leaf well-formedness,
    /// polygon simplicity and positive orientation.
    pub fn validate(&self) -> Result<(), ShapeError> {
        let d = self.dim();
        if d == 0 || d > crate::MAX_DIM {
            return Err(ShapeError::UnsupportedDimension(d));
        }
        self.validate_against(d)
    }

    fn validate_against(&self, d: usize) -> Result<(), ShapeError> {
        if self.dim() != d {
            return Err(ShapeError::DimensionMismatch(d, self.dim()));
        }
        match self {
            Shape::Ball { center, radius, .. } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(ShapeError::InvalidBall);
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(ShapeError::NonFinite);
                }
                Ok(())
            }
            Shape::Box { dim, lo, hi } => {
                if (0..*dim).any(|k| !(lo[k] < hi[k]) || !lo[k].is_finite() || !hi[k].is_finite())
                {
                    return Err(ShapeError::InvalidBox);
                }
                Ok(())
            }
            Shape::Polygon { vertices } => validate_polygon(vertices),
            Shape::Points { points, .. } => {
                if points.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(ShapeError::NonFinite);
                }
                Ok(())
            }
            Shape::Intervals { .. } => Ok(()),
            Shape::Union(a, b) | Shape::Intersection(a, b) | Shape::Difference(a, b) => {
                a.validate_against(d)?;
                b.validate_against(d)
            }
        }
    }

    /// Exact three-valued classification of `x`.
    pub fn indicator(&self, x: Point) -> Region {
        match self {
            Shape::Ball { center, radius, .. } => {
                let d2 = geom::dot(geom::sub(x, *center), geom::sub(x, *center));
                let r2 = radius * radius;
                // Points reconstructed on the sphere (center + r·unit) land a
                // few ulps off r² after rounding; an exact comparison would
                // scatter them between Inside and Outside. A band of a few
                // ulps keeps such points on the boundary, where they belong.
                let band = 64.0 * f64::EPSILON * (r2 + d2);
                if (d2 - r2).abs() <= band {
                    Region::Boundary
                } else if d2 < r2 {
                    Region::Inside
                } else {
                    Region::Outside
                }
            }
            Shape::Box { dim, lo, hi } => {
                let mut on_edge = false;
                for k in 0..*dim {
                    if x[k] < lo[k] || x[k] > hi[k] {
                        return Region::Outside;
                    }
                    on_edge |= x[k] == lo[k] || x[k] == hi[k];
                }
                if on_edge {
                    Region::Boundary
                } else {
                    Region::Inside
                }
            }
            Shape::Polygon { vertices } => polygon_indicator(vertices, x),
            Shape::Points { points, .. } => {
                if points.iter().any(|p| *p == x) {
                    Region::Boundary
                } else {
                    Region::Outside
                }
            }
            Shape::Intervals { set } => {
                if set.interior().contains(x[0]) {
                    Region::Inside
                } else if set.closure().contains(x[0]) {
                    Region::Boundary
                } else {
                    Region::Outside
                }
            }
            Shape::Union(a, b) => match (a.indicator(x), b.indicator(x)) {
                (Region::Inside, _) | (_, Region::Inside) => Region::Inside,
                (Region::Outside, Region::Outside) => Region::Outside,
                _ => Region::Boundary,
            },
            Shape::Intersection(a, b) => match (a.indicator(x), b.indicator(x)) {
                (Region::Outside, _) | (_, Region::Outside) => Region::Outside,
                (Region::Inside, Region::Inside) => Region::Inside,
                _ => Region::Boundary,
            },
            Shape::Difference(a, b) => match (a.indicator(x), b.indicator(x)) {
                (Region::Outside, _) | (_, Region::Inside) => Region::Outside,
                (Region::Inside, Region::Outside) => Region::Inside,
                _ => Region::Boundary,
            },
        }
    }

    /// Finite bounding box `(lo, hi)`; `None` when the set is empty or
    /// unbounded (only 1-D interval algebra can be unbounded).
    pub fn bbox(&self) -> Option<(Point, Point)> {
        fn merge(a: Option<(Point, Point)>, b: Option<(Point, Point)>) -> Option<(Point, Point)> {
            match (a, b) {
                (Some((al, ah)), Some((bl, bh))) => Some((
                    [al[0].min(bl[0]), al[1].min(bl[1]), al[2].min(bl[2])],
                    [ah[0].max(bh[0]), ah[1].max(bh[1]), ah[2].max(bh[2])],
                )),
                (x, None) | (None, x) => x,
            }
        }
        match self {
            Shape::Ball { center, radius, dim } => {
                let mut lo = *center;
                let mut hi = *center;
                for k in 0..*dim {
                    lo[k] -= radius;
                    hi[k] += radius;
                }
                Some((lo, hi))
            }
            Shape::Box { lo, hi, .. } => Some((*lo, *hi)),
            Shape::Polygon { vertices } | Shape::Points { points: vertices, .. } => {
                let mut it = vertices.iter();
                let first = *it.next()?;
                let mut lo = first;
                let mut hi = first;
                for p in it {
                    for k in 0..3 {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
                Some((lo, hi))
            }
            Shape::Intervals { set } => {
                let comps = set.components();
                let lo = comps.first()?.lo;
                let hi = comps.last()?.hi;
                if lo.is_finite() && hi.is_finite() {
                    Some(([lo, 0.0, 0.0], [hi, 0.0, 0.0]))
                } else {
                    None
                }
            }
            Shape::Union(a, b) => merge(a.bbox(), b.bbox()),
            // Conservative over-approximations for the other boolean nodes.
            Shape::Intersection(a, b) => match (a.bbox(), b.bbox()) {
                (Some((al, ah)), Some((bl, bh))) => {
                    let lo = [al[0].max(bl[0]), al[1].max(bl[1]), al[2].max(bl[2])];
                    let hi = [ah[0].min(bh[0]), ah[1].min(bh[1]), ah[2].min(bh[2])];
                    if (0..self.dim()).all(|k| lo[k] <= hi[k]) {
                        Some((lo, hi))
                    } else {
                        None
                    }
                }
                _ => None,
            },
            Shape::Difference(a, _) => a.bbox(),
        }
    }

    /// Exact reduction of a 1-D shape tree to its [`Set1`] (closed-leaf
    /// convention for balls/boxes; all four content functionals are
    /// insensitive to that λ-null choice, and genuine point components are
    /// preserved exactly).  `None` above dimension 1.
    pub fn to_set1(&self) -> Option<Set1> {
        if self.dim() != 1 {
            return None;
        }
        Some(match self {
            Shape::Ball { center, radius, .. } => Set1::from_parts(vec![Interval1::closed(
                center[0] - radius,
                center[0] + radius,
            )]),
            Shape::Box { lo, hi, .. } => {
                Set1::from_parts(vec![Interval1::closed(lo[0], hi[0])])
            }
            Shape::Points { points, .. } => {
                Set1::from_parts(points.iter().map(|p| Interval1::point(p[0])).collect())
            }
            Shape::Intervals { set } => set.clone(),
            Shape::Polygon { .. } => return None,
            Shape::Union(a, b) => a.to_set1()?.union(&b.to_set1()?),
            Shape::Intersection(a, b) => a.to_set1()?.intersection(&b.to_set1()?),
            Shape::Difference(a, b) => a.to_set1()?.difference(&b.to_set1()?),
        })
    }

    /// Collects the λ-null leaves reachable through unions and the positive
    /// side of intersections/differences — the pieces whose supercover must
    /// be added when rasterizing, lest they vanish from cell-center sampling.
    pub fn null_leaves(&self) -> Vec<&Shape> {
        let mut out = Vec::new();
        self.collect_null_leaves(&mut out);
        out
    }

    fn collect_null_leaves<'a>(&'a self, out: &mut Vec<&'a Shape>) {
        match self {
            Shape::Points { .. } => out.push(self),
            Shape::Intervals { set } => {
                if !set.isolated_points().is_empty() {
                    out.push(self);
                }
            }
            Shape::Union(a, b) | Shape::Intersection(a, b) => {
                a.collect_null_leaves(out);
                b.collect_null_leaves(out);
            }
            Shape::Difference(a, _) => a.collect_null_leaves(out),
            _ => {}
        }
    }
}

/// Simplicity + positive orientation check for polygon loops.
fn validate_polygon(vertices: &[Point]) -> Result<(), ShapeError> {
    let m = vertices.len();
    if m < 3 {
        return Err(ShapeError::InvalidPolygon("need at least 3 vertices".into()));
    }
    if vertices.iter().flatten().any(|c| !c.is_finite()) {
        return Err(ShapeError::NonFinite);
    }
    let mut area2 = 0.0;
    for i in 0..m {
        let p = vertices[i];
        let q = vertices[(i + 1) % m];
        if p[0] == q[0] && p[1] == q[1] {
            return Err(ShapeError::InvalidPolygon("repeated consecutive vertex".into()));
        }
        area2 += p[0] * q[1] - q[0] * p[1];
    }
    if area2 <= 0.0 {
        return Err(ShapeError::InvalidPolygon(
            "vertices must be counter-clockwise with positive area".into(),
        ));
    }
    // O(m²) proper-crossing test between non-adjacent edges.
    let seg = |i: usize| (vertices[i], vertices[(i + 1) % m]);
    for i in 0..m {
        for j in i + 1..m {
            if j == i || (j + 1) % m == i || (i + 1) % m == j {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            let o = |p: Point, q: Point, r: Point| {
                (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
            };
            if o(a, b, c) * o(a, b, d) < 0.0 && o(c, d, a) * o(c, d, b) < 0.0 {
                return Err(ShapeError::InvalidPolygon("self-intersecting loop".into()));
            }
        }
    }
    Ok(())
}

/// Point-in-polygon with exact on-edge detection, then even-odd ray casting.
fn polygon_indicator(vertices: &[Point], x: Point) -> Region {
    let m = vertices.len();
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        let cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
        if cross == 0.0
            && x[0] >= a[0].min(b[0])
            && x[0] <= a[0].max(b[0])
            && x[1] >= a[1].min(b[1])
            && x[1] <= a[1].max(b[1])
        {
            return Region::Boundary;
        }
    }
    let mut inside = false;
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        if (a[1] > x[1]) != (b[1] > x[1]) {
            let t = (x[1] - a[1]) / (b[1] - a[1]);
            if x[0] < a[0] + t * (b[0] - a[0]) {
                inside = !inside;
            }
        }
    }
    if inside {
        Region::Inside
    } else {
        Region::Outside
    }
}

/// The ambient open region Ω plus the finite computation window.
///
/// The window must strictly contain the bounding box of Ω inflated by the
/// largest ε·diameter(C) a run will use, so grid dilations never clip
/// against the window edge; [`Domain::check_window_margin`] enforces this
/// per run.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub open_region: Shape,
    pub window: AxisBox,
}

impl Domain {
    pub fn new(open_region: Shape, window: AxisBox) -> Result<Domain, ShapeError> {
        open_region.validate()?;
        let d = open_region.dim();
        if d != window.dim {
            return Err(ShapeError::DimensionMismatch(d, window.dim));
        }
        Ok(Domain { open_region, window })
    }

    pub fn dim(&self) -> usize {
        self.window.dim
    }

    /// Strict membership in the open region.
    pub fn omega_contains(&self, p: Point) -> bool {
        self.open_region.indicator(p) == Region::Inside
    }

    /// Validates the run invariant: window ⊇ bbox(Ω) inflated by `margin`
    /// (= max ε · diam C), strictly.  Unbounded Ω (1-D exact work) passes —
    /// the raster pipeline separately refuses unbounded regions.
    pub fn check_window_margin(&self, margin: f64) -> Result<(), ShapeError> {
        match self.open_region.bbox() {
            None => Ok(()),
            Some((lo, hi)) => {
                let inner = AxisBox { dim: self.dim(), lo, hi };
                if self.window.strictly_contains_box(&inner, margin) {
                    Ok(())
                } else {
                    Err(ShapeError::WindowTooSmall { margin })
                }
            }
        }
    }
}
