//! Convex structuring bodies and their support/gauge/polar calculus.
//!
//! A [`ConvexBody`] is a nonempty compact convex set with the origin strictly
//! in its interior — either a Euclidean ball or the convex hull of finitely
//! many vertices.  Bodies drive every anisotropic measurement in this crate:
//! the support function h(y) = sup_{x∈C} x·y weights boundary normals in
//! perimeter integrals, and the gauge g(x) = inf{t > 0 : x ∈ tC} is the
//! anisotropic distance unit for dilations and distance transforms.
//!
//! Polytopes keep a facet cache (unit outward normal, positive offset per
//! facet), so the gauge is an exact O(#facets) maximum rather than a
//! membership bisection; the bisection form survives as a test oracle.

mod hull;

use crate::geom::{self, Point};
use serde::{Deserialize, Serialize};

/// Construction and arithmetic errors for convex bodies.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConvexError {
    /// The origin is on or outside the hull of the given vertices.
    #[error("origin is not strictly interior to the body")]
    OriginNotInterior,
    /// The vertex set does not affinely span the requested dimension.
    #[error("vertices do not span dimension {0}")]
    DegenerateHull(usize),
    /// Scale factors must be strictly positive.
    #[error("scale factor must be > 0")]
    NonpositiveScale,
    /// Ball radii must be strictly positive and finite.
    #[error("ball radius must be > 0 and finite")]
    NonpositiveRadius,
    /// Minkowski sums are supported for ball⊕ball and polytope⊕polytope only.
    #[error("minkowski_sum of a ball and a polytope is unsupported")]
    MixedKinds,
    /// Operands live in different dimensions.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    /// Dimension outside 1..=3.
    #[error("unsupported dimension {0} (supported: 1..=3)")]
    UnsupportedDimension(usize),
}

/// Ball-or-polytope payload of a [`ConvexBody`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BodyKind {
    /// Euclidean ball of the given radius centered at the origin.
    Ball { radius: f64 },
    /// Convex hull of the stored extreme vertices (canonically sorted).
    Polytope { vertices: Vec<Point> },
}

/// One supporting facet of a polytope: `normal · x ≤ offset` with `|normal| =
/// 1` and `offset > 0` (origin interiority).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
}

/// A compact convex set with the origin strictly interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexBody {
    dim: usize,
    kind: BodyKind,
    /// Facet cache: empty for balls, one entry per geometric facet otherwise.
    facets: Vec<Facet>,
}

/// Vertex dedup / extremality tolerance, relative to the coordinate scale.
const CANON_TOL: f64 = 1e-9;

impl ConvexBody {
    /// A ball of radius `r` in dimension `dim`.
    pub fn ball(dim: usize, r: f64) -> Result<ConvexBody, ConvexError> {
        if dim == 0 || dim > crate::MAX_DIM {
            return Err(ConvexError::UnsupportedDimension(dim));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(ConvexError::NonpositiveRadius);
        }
        Ok(ConvexBody { dim, kind: BodyKind::Ball { radius: r }, facets: Vec::new() })
    }

    /// The 1-D interval `[lo, hi]` with `lo < 0 < hi`.
    pub fn interval(lo: f64, hi: f64) -> Result<ConvexBody, ConvexError> {
        ConvexBody::make_polytope(1, &[[lo, 0.0, 0.0], [hi, 0.0, 0.0]])
    }

    /// Convex hull of `vertices` in dimension `dim` (1..=3).
    ///
    /// Redundant points (interior, on-edge, near-duplicate) are removed, the
    /// surviving extreme vertices are sorted lexicographically, and the facet
    /// cache is built.  Fails if the points do not span the dimension or the
    /// origin is not strictly inside the hull.
    pub fn make_polytope(dim: usize, vertices: &[Point]) -> Result<ConvexBody, ConvexError> {
        if dim == 0 || dim > crate::MAX_DIM {
            return Err(ConvexError::UnsupportedDimension(dim));
        }
        for v in vertices {
            if v.iter().any(|c| !c.is_finite()) || v[dim..].iter().any(|&c| c != 0.0) {
                return Err(ConvexError::DegenerateHull(dim));
            }
        }
        let h = hull::hull(dim, vertices).ok_or(ConvexError::DegenerateHull(dim))?;
        let scale = h
            .vertices
            .iter()
            .map(|v| geom::norm(*v))
            .fold(0.0f64, f64::max);
        if h.planes.iter().any(|p| p.offset <= CANON_TOL * scale) {
            return Err(ConvexError::OriginNotInterior);
        }
        let mut vertices = h.vertices;
        vertices.sort_by(geom::lex_cmp);
        let facets = h
            .planes
            .iter()
            .map(|p| Facet { normal: p.normal, offset: p.offset })
            .collect();
        Ok(ConvexBody { dim, kind: BodyKind::Polytope { vertices }, facets })
    }

    /// Spatial dimension (1..=3).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ball-or-polytope payload.
    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    /// Extreme vertices for polytopes, `None` for balls.
    pub fn vertices(&self) -> Option<&[Point]> {
        match &self.kind {
            BodyKind::Polytope { vertices } => Some(vertices),
            BodyKind::Ball { .. } => None,
        }
    }

    /// Facet cache (empty for balls).
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Support function h(y) = sup_{x∈C} x·y.
    ///
    /// Polytopes: maximum vertex dot product.  Balls: r·|y|.  h(0) = 0.
    pub fn support(&self, y: Point) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius } => radius * geom::norm(y),
            BodyKind::Polytope { vertices } => vertices
                .iter()
                .map(|v| geom::dot(*v, y))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Gauge g(x) = inf{t > 0 : x ∈ tC}; positively homogeneous, g(0) = 0.
    ///
    /// Polytopes: max over facets of (normal·x)/offset.  Balls: |x|/r.
    pub fn gauge(&self, x: Point) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius } => geom::norm(x) / radius,
            BodyKind::Polytope { .. } => self
                .facets
                .iter()
                .map(|f| geom::dot(f.normal, x) / f.offset)
                .fold(0.0f64, f64::max),
        }
    }

    /// Polar body C° = {y : x·y ≤ 1 for all x ∈ C}.
    ///
    /// Balls: radius inverts.  Polytopes: facet (n, c) ↦ polar vertex n/c,
    /// and the identity gauge(C°, ·) = support(C, ·) holds pointwise.
    pub fn polar(&self) -> Result<ConvexBody, ConvexError> {
        match &self.kind {
            BodyKind::Ball { radius } => ConvexBody::ball(self.dim, 1.0 / radius),
            BodyKind::Polytope { .. } => {
                let verts: Vec<Point> = self
                    .facets
                    .iter()
                    .map(|f| geom::scale(f.normal, 1.0 / f.offset))
                    .collect();
                ConvexBody::make_polytope(self.dim, &verts)
            }
        }
    }

    /// Dilation by `r > 0`: vertices/radius multiply by r, support multiplies
    /// by r, gauge divides by r.
    pub fn scale(&self, r: f64) -> Result<ConvexBody, ConvexError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(ConvexError::NonpositiveScale);
        }
        match &self.kind {
            BodyKind::Ball { radius } => ConvexBody::ball(self.dim, radius * r),
            BodyKind::Polytope { vertices } => {
                let verts: Vec<Point> = vertices.iter().map(|v| geom::scale(*v, r)).collect();
                ConvexBody::make_polytope(self.dim, &verts)
            }
        }
    }

    /// Point reflection −C; support(−C, x) = support(C, −x).
    pub fn reflect(&self) -> ConvexBody {
        match &self.kind {
            BodyKind::Ball { .. } => self.clone(),
            BodyKind::Polytope { vertices } => {
                let mut verts: Vec<Point> =
                    vertices.iter().map(|v| geom::scale(*v, -1.0)).collect();
                verts.sort_by(geom::lex_cmp);
                let facets = self
                    .facets
                    .iter()
                    .map(|f| Facet { normal: geom::scale(f.normal, -1.0), offset: f.offset })
                    .collect();
                ConvexBody { dim: self.dim, kind: BodyKind::Polytope { vertices: verts }, facets }
            }
        }
    }

    /// Minkowski sum A ⊕ B = {a + b}; support functions add.
    ///
    /// Supported for matching kinds only: radii add for balls, and for
    /// polytopes the hull of pairwise vertex sums is taken.
    pub fn minkowski_sum(&self, other: &ConvexBody) -> Result<ConvexBody, ConvexError> {
        if self.dim != other.dim {
            return Err(ConvexError::DimensionMismatch(self.dim, other.dim));
        }
        match (&self.kind, &other.kind) {
            (BodyKind::Ball { radius: a }, BodyKind::Ball { radius: b }) => {
                ConvexBody::ball(self.dim, a + b)
            }
            (BodyKind::Polytope { vertices: va }, BodyKind::Polytope { vertices: vb }) => {
                let mut sums = Vec::with_capacity(va.len() * vb.len());
                for a in va {
                    for b in vb {
                        sums.push(geom::add(*a, *b));
                    }
                }
                ConvexBody::make_polytope(self.dim, &sums)
            }
            _ => Err(ConvexError::MixedKinds),
        }
    }

    /// The constants (a, b) with aC ⊆ B(0,1) ⊆ bC, i.e. a·h(ν) ≤ |ν| ≤ b·h(ν)
    /// for every direction ν: a = 1/circumradius, b = 1/inradius-about-origin.
    pub fn containment_constants(&self) -> (f64, f64) {
        match &self.kind {
            BodyKind::Ball { radius } => (1.0 / radius, 1.0 / radius),
            BodyKind::Polytope { vertices } => {
                let circum = vertices
                    .iter()
                    .map(|v| geom::norm(*v))
                    .fold(0.0f64, f64::max);
                let inrad = self
                    .facets
                    .iter()
                    .map(|f| f.offset)
                    .fold(f64::INFINITY, f64::min);
                (1.0 / circum, 1.0 / inrad)
            }
        }
    }

    /// Circumradius about the origin (max |vertex|, or the ball radius).
    pub fn circumradius(&self) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius } => *radius,
            BodyKind::Polytope { vertices } => vertices
                .iter()
                .map(|v| geom::norm(*v))
                .fold(0.0f64, f64::max),
        }
    }

    /// Diameter: max pairwise vertex distance, or 2r for balls.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius } => 2.0 * radius,
            BodyKind::Polytope { vertices } => {
                let mut best = 0.0f64;
                for (i, a) in vertices.iter().enumerate() {
                    for b in &vertices[i + 1..] {
                        best = best.max(geom::dist(*a, *b));
                    }
                }
                best
            }
        }
    }

    /// 1-D bodies as an interval `[lo, hi]`; `None` in higher dimension.
    pub fn as_interval(&self) -> Option<(f64, f64)> {
        if self.dim != 1 {
            return None;
        }
        match &self.kind {
            BodyKind::Ball { radius } => Some((-radius, *radius)),
            BodyKind::Polytope { vertices } => {
                let lo = vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                let hi = vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                Some((lo, hi))
            }
        }
    }

    /// Hausdorff distance between vertex sets of two polytopes (test helper
    /// for canonical-form comparisons); `None` if either body is a ball.
    pub fn vertex_hausdorff(&self, other: &ConvexBody) -> Option<f64> {
        let va = self.vertices()?;
        let vb = other.vertices()?;
        let one_sided = |xs: &[Point], ys: &[Point]| {
            xs.iter()
                .map(|x| {
                    ys.iter()
                        .map(|y| geom::dist(*x, *y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0f64, f64::max)
        };
        Some(one_sided(va, vb).max(one_sided(vb, va)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexBody {
        ConvexBody::make_polytope(
            2,
            &[[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [-1.0, 1.0, 0.0], [-1.0, -1.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn square_facets_are_axis_planes() {
        let sq = square();
        assert_eq!(sq.facets().len(), 4);
        for f in sq.facets() {
            assert!((f.offset - 1.0).abs() < 1e-12);
            let n = f.normal;
            assert!(
                (n[0].abs() - 1.0).abs() < 1e-12 && n[1].abs() < 1e-12
                    || (n[1].abs() - 1.0).abs() < 1e-12 && n[0].abs() < 1e-12
            );
        }
    }

    #[test]
    fn origin_outside_rejected() {
        let err = ConvexBody::make_polytope(2, &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]])
            .unwrap_err();
        assert_eq!(err, ConvexError::OriginNotInterior);
    }

    #[test]
    fn support_and_gauge_basics() {
        let sq = square();
        assert_eq!(sq.support([1.0, 2.0, 0.0]), 3.0);
        assert!((sq.gauge([0.5, -0.25, 0.0]) - 0.5).abs() < 1e-15);
        assert_eq!(sq.gauge([0.0; 3]), 0.0);
        let b = ConvexBody::ball(2, 2.0).unwrap();
        assert!((b.gauge([0.0, 3.0, 0.0]) - 1.5).abs() < 1e-15);
        assert_eq!(ConvexBody::ball(2, 1.0).unwrap().support([3.0, 4.0, 0.0]), 5.0);
    }

    #[test]
    fn polar_square_is_cross() {
        let cross = square().polar().unwrap();
        let expect = ConvexBody::make_polytope(
            2,
            &[[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0]],
        )
        .unwrap();
        assert!(cross.vertex_hausdorff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn interval_body() {
        let c = ConvexBody::interval(-1.0, 2.0).unwrap();
        assert_eq!(c.diameter(), 3.0);
        assert_eq!(c.as_interval(), Some((-1.0, 2.0)));
        assert!((c.gauge([-0.5, 0.0, 0.0]) - 0.5).abs() < 1e-15);
        assert!((c.gauge([1.0, 0.0, 0.0]) - 0.5).abs() < 1e-15);
        assert!(ConvexBody::interval(0.5, 2.0).is_err());
    }

    #[test]
    fn minkowski_sum_square_square() {
        let s2 = square().minkowski_sum(&square()).unwrap();
        let expect = square().scale(2.0).unwrap();
        assert!(s2.vertex_hausdorff(&expect).unwrap() < 1e-12);
        let b = ConvexBody::ball(2, 1.0)
            .unwrap()
            .minkowski_sum(&ConvexBody::ball(2, 2.0).unwrap())
            .unwrap();
        assert_eq!(b.kind(), &BodyKind::Ball { radius: 3.0 });
        assert!(square().minkowski_sum(&ConvexBody::ball(2, 1.0).unwrap()).is_err());
    }

    #[test]
    fn containment_constants_match_hand_values() {
        let (a, b) = square().containment_constants();
        assert!((a - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
        let cross = square().polar().unwrap();
        let (a, b) = cross.containment_constants();
        assert!((a - 1.0).abs() < 1e-12);
        assert!((b - 2.0f64.sqrt()).abs() < 1e-12);
    }
}
