//! Boundary meshes with outward normals and H^{n−1} facet measures.
//!
//! The mesh generator walks the shape tree, emits candidate facets from each
//! leaf's boundary (polygon edges, box faces, circle chords, sphere
//! triangles, isolated points), then classifies every candidate against the
//! *resolved* boolean set by probing an anchor point on the leaf's true
//! boundary surface (for flat leaves the facet midpoint, for chords and
//! sphere triangles the midpoint re-projected radially onto the circle or
//! sphere) and two points offset a little along ± the facet normal:
//!
//! * probes on opposite sides → a genuine reduced-boundary facet; the normal
//!   is oriented toward the outside;
//! * probes on the same side → discarded: the leaf surface was swallowed by
//!   a union or cut away by a difference (positive-measure cracks and slits
//!   are not expressible by the leaf algebra in n ≥ 2, and the 1-D path is
//!   handled exactly by the interval engine);
//! * isolated points survive if the resolved set still reports them as
//!   boundary; they carry zero measure and no normal (`reduced == false`).
//!
//! Facets are finally clipped to the open region Ω (midpoint test, with a
//! bisected split for segments whose endpoints straddle ∂Ω), so integrals
//! over the mesh are integrals over Ω ∩ ∂E; facets lying on ∂Ω itself probe
//! as "not strictly inside" and drop out, which is exactly the semantics the
//! content functionals need.

use crate::convex::ConvexBody;
use crate::geom::{self, Point};
use crate::shapes::{Domain, Region, Shape, ShapeError};

/// Facet geometry: a point (n=1, or isolated points in any n), a segment
/// (n=2), or a triangle (n=3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FacetGeom {
    Vertex(Point),
    Segment(Point, Point),
    Tri(Point, Point, Point),
}

impl FacetGeom {
    /// Midpoint / centroid.
    pub fn center(&self) -> Point {
        match self {
            FacetGeom::Vertex(p) => *p,
            FacetGeom::Segment(a, b) => geom::scale(geom::add(*a, *b), 0.5),
            FacetGeom::Tri(a, b, c) => {
                geom::scale(geom::add(geom::add(*a, *b), *c), 1.0 / 3.0)
            }
        }
    }

    /// H^{n−1} measure of the geometry itself (1 for points, length for
    /// segments, area for triangles).
    pub fn measure(&self) -> f64 {
        match self {
            FacetGeom::Vertex(_) => 1.0,
            FacetGeom::Segment(a, b) => geom::dist(*a, *b),
            FacetGeom::Tri(a, b, c) => {
                0.5 * geom::norm(geom::cross(geom::sub(*b, *a), geom::sub(*c, *a)))
            }
        }
    }
}

/// One mesh facet: geometry, outward unit normal (zero for
/// `topological_only` facets without a meaningful side), measure, and the
/// reduced-boundary flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshFacet {
    pub geom: FacetGeom,
    pub normal: Point,
    pub measure: f64,
    pub reduced: bool,
    /// True when the geometry is a chordal approximation of a curved leaf;
    /// false when it lies exactly on the true boundary (straight edges,
    /// box faces, isolated points).
    pub chordal: bool,
}

/// Orientation selector for anisotropic perimeter integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Weight facets by h_C(ν): the perimeter of E.
    Outward,
    /// Weight facets by h_C(−ν): the perimeter of the complement Ω∖E.
    Inward,
}

/// A boundary mesh: facets of Ω∩∂E with reduced/topological flags.
#[derive(Debug, Clone, Default)]
pub struct BoundaryMesh {
    pub dim: usize,
    pub facets: Vec<MeshFacet>,
}

impl BoundaryMesh {
    /// Total H^{n−1} measure of reduced facets: Per(E; Ω).
    /// In 1-D this is the count of reduced boundary points.
    pub fn perimeter(&self) -> f64 {
        self.facets.iter().filter(|f| f.reduced).map(|f| f.measure).sum()
    }

    /// ∫ h_C(±ν) dH^{n−1} over the reduced facets.
    pub fn anisotropic_perimeter(&self, body: &ConvexBody, orientation: Orientation) -> f64 {
        let sign = match orientation {
            Orientation::Outward => 1.0,
            Orientation::Inward => -1.0,
        };
        self.facets
            .iter()
            .filter(|f| f.reduced)
            .map(|f| f.measure * body.support(geom::scale(f.normal, sign)))
            .sum()
    }

    /// ½·(outward + inward anisotropic perimeter): the common limit target
    /// of the two-sided content functionals.
    pub fn half_sum_target(&self, body: &ConvexBody) -> f64 {
        0.5 * (self.anisotropic_perimeter(body, Orientation::Outward)
            + self.anisotropic_perimeter(body, Orientation::Inward))
    }

    /// The sub-mesh of reduced facets.
    pub fn reduced_only(&self) -> BoundaryMesh {
        BoundaryMesh {
            dim: self.dim,
            facets: self.facets.iter().filter(|f| f.reduced).copied().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }
}

/// Clipping mode: against Ω (the default for all Ω-relative integrals) or
/// against the computation window only (used by the functional that lets
/// dilations spill across ∂Ω — its seed is the whole ∂E inside the window).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClipMode {
    OpenRegion,
    WindowOnly,
}

/// Meshes Ω∩∂S with outward normals; curved leaves get `refinement` segments
/// (2-D) or triangle strips per full turn (3-D).
pub fn boundary_mesh(
    shape: &Shape,
    domain: &Domain,
    refinement: usize,
) -> Result<BoundaryMesh, ShapeError> {
    boundary_mesh_clipped(shape, domain, refinement, ClipMode::OpenRegion)
}

/// Meshes ∂S inside the window without Ω clipping.
pub fn boundary_mesh_in_window(
    shape: &Shape,
    domain: &Domain,
    refinement: usize,
) -> Result<BoundaryMesh, ShapeError> {
    boundary_mesh_clipped(shape, domain, refinement, ClipMode::WindowOnly)
}

pub fn boundary_mesh_clipped(
    shape: &Shape,
    domain: &Domain,
    refinement: usize,
    clip: ClipMode,
) -> Result<BoundaryMesh, ShapeError> {
    shape.validate()?;
    let dim = shape.dim();
    if dim != domain.dim() {
        return Err(ShapeError::DimensionMismatch(dim, domain.dim()));
    }
    if refinement < 8 {
        return Err(ShapeError::InvalidPolygon("refinement must be ≥ 8".into()));
    }
    if dim == 1 {
        return Ok(mesh_1d(shape, domain, clip)?);
    }

    let mut candidates: Vec<LeafFacet> = Vec::new();
    collect_leaf_facets(shape, refinement, &mut candidates)?;

    let mut out = BoundaryMesh { dim, facets: Vec::new() };
    for cand in candidates {
        let Some(f) = classify_facet(shape, cand) else {
            continue;
        };
        clip_facet(&mut out.facets, f, domain, clip);
    }
    Ok(out)
}

/// Exact 1-D mesh via the interval engine: boundary points with one-sided
/// density classification.
fn mesh_1d(shape: &Shape, domain: &Domain, clip: ClipMode) -> Result<BoundaryMesh, ShapeError> {
    let set = shape.to_set1().ok_or(ShapeError::NotIntervalAlgebra)?;
    let mut facets = Vec::new();
    for x in set.boundary_points() {
        let p = [x, 0.0, 0.0];
        let keep = match clip {
            ClipMode::OpenRegion => domain.omega_contains(p),
            ClipMode::WindowOnly => domain.window.contains_strict(p),
        };
        if !keep {
            continue;
        }
        let (left, right) = set.one_sided_coverage(x);
        let (normal, reduced, measure) = match (left, right) {
            (true, false) => ([1.0, 0.0, 0.0], true, 1.0),
            (false, true) => ([-1.0, 0.0, 0.0], true, 1.0),
            // density 1 (interior crack) or 0 (isolated point): ∂E ∖ ∂*E
            _ => ([0.0, 0.0, 0.0], false, 0.0),
        };
        facets.push(MeshFacet { geom: FacetGeom::Vertex(p), normal, measure, reduced, chordal: false });
    }
    Ok(BoundaryMesh { dim: 1, facets })
}

/// One candidate facet from a leaf: geometry, a probe anchor lying exactly
/// on the leaf's boundary surface, and the leaf's own outward normal
/// (orientation may be flipped later by probing).
struct LeafFacet {
    geom: FacetGeom,
    anchor: Point,
    normal: Point,
    chordal: bool,
}

impl LeafFacet {
    /// Flat facet: the centroid already lies on the leaf boundary.
    fn flat(geom: FacetGeom, normal: Point) -> Self {
        LeafFacet { anchor: geom.center(), geom, normal, chordal: false }
    }
}

fn collect_leaf_facets(
    shape: &Shape,
    refinement: usize,
    out: &mut Vec<LeafFacet>,
) -> Result<(), ShapeError> {
    match shape {
        Shape::Ball { dim: 2, center, radius } => {
            let k = refinement;
            for i in 0..k {
                let t0 = 2.0 * std::f64::consts::PI * (i as f64) / (k as f64);
                let t1 = 2.0 * std::f64::consts::PI * ((i + 1) as f64) / (k as f64);
                let tm = 0.5 * (t0 + t1);
                let a = geom::add(*center, [radius * t0.cos(), radius * t0.sin(), 0.0]);
                let b = geom::add(*center, [radius * t1.cos(), radius * t1.sin(), 0.0]);
                let n = [tm.cos(), tm.sin(), 0.0];
                out.push(LeafFacet {
                    geom: FacetGeom::Segment(a, b),
                    anchor: geom::add(*center, geom::scale(n, *radius)),
                    normal: n,
                    chordal: true,
                });
            }
        }
        Shape::Ball { dim: 3, center, radius } => {
            // UV sphere: `refinement` slices per equatorial turn, half as
            // many stacks pole to pole.
            let slices = refinement;
            let stacks = (refinement / 2).max(4);
            let pt = |s: usize, t: usize| {
                let phi = std::f64::consts::PI * (s as f64) / (stacks as f64);
                let theta = 2.0 * std::f64::consts::PI * (t as f64) / (slices as f64);
                geom::add(
                    *center,
                    [
                        radius * phi.sin() * theta.cos(),
                        radius * phi.sin() * theta.sin(),
                        radius * phi.cos(),
                    ],
                )
            };
            for s in 0..stacks {
                for t in 0..slices {
                    let (p00, p01, p10, p11) =
                        (pt(s, t), pt(s, t + 1), pt(s + 1, t), pt(s + 1, t + 1));
                    let tris: &[[Point; 3]] = if s == 0 {
                        &[[p00, p10, p11]]
                    } else if s == stacks - 1 {
                        &[[p00, p10, p01]]
                    } else {
                        &[[p00, p10, p11], [p00, p11, p01]]
                    };
                    for tr in tris {
                        let g = FacetGeom::Tri(tr[0], tr[1], tr[2]);
                        let n = geom::unit(geom::sub(g.center(), *center), 1e-300)
                            .unwrap_or([0.0, 0.0, 1.0]);
                        out.push(LeafFacet {
                            geom: g,
                            anchor: geom::add(*center, geom::scale(n, *radius)),
                            normal: n,
                            chordal: true,
                        });
                    }
                }
            }
        }
        Shape::Ball { dim, .. } => return Err(ShapeError::UnsupportedDimension(*dim)),
        Shape::Box { dim: 2, lo, hi } => {
            let c = [
                ([lo[0], lo[1]], [hi[0], lo[1]], [0.0, -1.0]),
                ([hi[0], lo[1]], [hi[0], hi[1]], [1.0, 0.0]),
                ([hi[0], hi[1]], [lo[0], hi[1]], [0.0, 1.0]),
                ([lo[0], hi[1]], [lo[0], lo[1]], [-1.0, 0.0]),
            ];
            for (a, b, n) in c {
                push_subdivided_segment(
                    out,
                    [a[0], a[1], 0.0],
                    [b[0], b[1], 0.0],
                    [n[0], n[1], 0.0],
                    refinement,
                );
            }
        }
        Shape::Box { dim: 3, lo, hi } => {
            // Faces are split into a g×g grid of cells (two triangles each)
            // so partially-buried faces classify at a resolution comparable
            // to the curved leaves.
            let g = (refinement / 64).max(4);
            for axis in 0..3 {
                for (side, n_sign) in [(lo[axis], -1.0), (hi[axis], 1.0)] {
                    let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
                    let corner = |fu: f64, fv: f64| {
                        let mut p = [0.0; 3];
                        p[axis] = side;
                        p[u] = lo[u] + fu * (hi[u] - lo[u]);
                        p[v] = lo[v] + fv * (hi[v] - lo[v]);
                        p
                    };
                    let mut n = [0.0; 3];
                    n[axis] = n_sign;
                    for iu in 0..g {
                        for iv in 0..g {
                            let (f0, f1) = (iu as f64 / g as f64, (iu + 1) as f64 / g as f64);
                            let (e0, e1) = (iv as f64 / g as f64, (iv + 1) as f64 / g as f64);
                            let (c00, c10, c01, c11) = (
                                corner(f0, e0),
                                corner(f1, e0),
                                corner(f0, e1),
                                corner(f1, e1),
                            );
                            out.push(LeafFacet::flat(FacetGeom::Tri(c00, c10, c11), n));
                            out.push(LeafFacet::flat(FacetGeom::Tri(c00, c11, c01), n));
                        }
                    }
                }
            }
        }
        Shape::Box { dim, .. } => return Err(ShapeError::UnsupportedDimension(*dim)),
        Shape::Polygon { vertices } => {
            let m = vertices.len();
            for i in 0..m {
                let a = vertices[i];
                let b = vertices[(i + 1) % m];
                let d = geom::sub(b, a);
                let n = geom::unit([d[1], -d[0], 0.0], 1e-300).unwrap_or([0.0, 0.0, 0.0]);
                push_subdivided_segment(out, a, b, n, refinement);
            }
        }
        Shape::Points { points, .. } => {
            for p in points {
                out.push(LeafFacet::flat(FacetGeom::Vertex(*p), [0.0, 0.0, 0.0]));
            }
        }
        Shape::Intervals { .. } => return Err(ShapeError::UnsupportedDimension(1)),
        Shape::Union(a, b) | Shape::Intersection(a, b) | Shape::Difference(a, b) => {
            collect_leaf_facets(a, refinement, out)?;
            collect_leaf_facets(b, refinement, out)?;
        }
    }
    Ok(())
}

/// Splits a straight edge into `refinement/8` equal pieces before emission.
///
/// Straight leaves need the same classification resolution as curved ones:
/// a box or polygon edge half-buried by a union (or half-erased by a
/// difference) is decided piece by piece, not by one midpoint probe for the
/// whole edge.
fn push_subdivided_segment(
    out: &mut Vec<LeafFacet>,
    a: Point,
    b: Point,
    n: Point,
    refinement: usize,
) {
    let pieces = (refinement / 8).max(1);
    let lerp = |t: f64| geom::add(a, geom::scale(geom::sub(b, a), t));
    for i in 0..pieces {
        let p = lerp(i as f64 / pieces as f64);
        let q = if i + 1 == pieces { b } else { lerp((i + 1) as f64 / pieces as f64) };
        out.push(LeafFacet::flat(FacetGeom::Segment(p, q), n));
    }
}

/// Probes a candidate facet against the resolved set; see module docs.
fn classify_facet(shape: &Shape, cand: LeafFacet) -> Option<MeshFacet> {
    let LeafFacet { geom: g, anchor, normal: leaf_normal, chordal } = cand;
    if geom::norm(leaf_normal) == 0.0 {
        // Isolated point: keep only if the boolean algebra still reports it
        // as boundary; it carries no measure either way.
        if shape.indicator(anchor) != Region::Boundary {
            return None;
        }
        return Some(MeshFacet { geom: g, normal: [0.0; 3], measure: 0.0, reduced: false, chordal });
    }
    let scale = 1.0 + anchor.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut delta = 1e-6 * scale;
    for _ in 0..4 {
        let plus = shape.indicator(geom::add(anchor, geom::scale(leaf_normal, delta)));
        let minus = shape.indicator(geom::sub(anchor, geom::scale(leaf_normal, delta)));
        match (minus, plus) {
            (Region::Inside, Region::Outside) => {
                return Some(MeshFacet {
                    geom: g,
                    normal: leaf_normal,
                    measure: g.measure(),
                    reduced: true,
                    chordal,
                })
            }
            (Region::Outside, Region::Inside) => {
                return Some(MeshFacet {
                    geom: g,
                    normal: geom::scale(leaf_normal, -1.0),
                    measure: g.measure(),
                    reduced: true,
                    chordal,
                })
            }
            (Region::Inside, Region::Inside) | (Region::Outside, Region::Outside) => {
                // Same side both ways: the leaf surface is buried inside a
                // union or removed by a difference, so it is not part of the
                // resolved set's boundary here. (Positive-measure cracks and
                // slits are not expressible by the leaf algebra in n ≥ 2, and
                // the 1-D path classifies them exactly, so nothing real is
                // lost by dropping.)
                return None;
            }
            _ => delta /= 64.0, // probe landed on another boundary: shrink
        }
    }
    // Probes kept landing on a boundary at every scale: a tangency sliver.
    None
}

/// Keeps the part of a facet inside the clip region; segments straddling the
/// region edge are split at a bisected crossing point.
///
/// Exactly-straight segments whose midpoint disagrees with both endpoints
/// are halved first, so a narrow clip region (or a hole) inside one piece
/// is still resolved. Chordal pieces never get the midpoint treatment:
/// where a curve runs along the crack between two open components, the
/// chord's interior dips off the curve into the region, and trusting it
/// would keep boundary mass whose true geometry lies outside the open set.
/// Their endpoints sample the true curve, and the O(length²) sagitta error
/// vanishes under refinement.
fn clip_facet(out: &mut Vec<MeshFacet>, f: MeshFacet, domain: &Domain, clip: ClipMode) {
    let inside = |p: Point| match clip {
        ClipMode::OpenRegion => domain.omega_contains(p),
        ClipMode::WindowOnly => domain.window.contains_strict(p),
    };
    match f.geom {
        FacetGeom::Vertex(p) => {
            if inside(p) {
                out.push(f);
            }
        }
        FacetGeom::Tri(a, b, c) => {
            // Chordal triangles: the centroid dips off the true surface
            // (into an open component when the surface runs along a crack),
            // so the vertices — which sample the surface exactly — vote
            // instead.
            let keep = if f.chordal {
                [a, b, c].into_iter().filter(|&p| inside(p)).count() >= 2
            } else {
                inside(f.geom.center())
            };
            if keep {
                out.push(f);
            }
        }
        FacetGeom::Segment(a, b) => {
            let (ia, ib) = (inside(a), inside(b));
            if ia == ib {
                let c = f.geom.center();
                if f.chordal || inside(c) == ia {
                    if ia {
                        out.push(f);
                    }
                } else {
                    // Interior status flips inside an exactly-straight
                    // piece (a facet spanning a narrow clip region, or
                    // bridging a hole): split at the midpoint into two
                    // straddling halves and cut each exactly.
                    cut_segment(out, &f, a, c, ia, &inside);
                    cut_segment(out, &f, c, b, !ib, &inside);
                }
                return;
            }
            cut_segment(out, &f, a, b, ia, &inside);
        }
    }
}

/// Keeps the inside part of a segment with exactly one membership
/// transition, bisecting the crossing to ~1e-12 of the length.
fn cut_segment(
    out: &mut Vec<MeshFacet>,
    f: &MeshFacet,
    a: Point,
    b: Point,
    a_inside: bool,
    inside: &impl Fn(Point) -> bool,
) {
    let (mut tin, mut tout) = if a_inside { (0.0f64, 1.0f64) } else { (1.0f64, 0.0f64) };
    for _ in 0..48 {
        let tm = 0.5 * (tin + tout);
        let pm = geom::add(a, geom::scale(geom::sub(b, a), tm));
        if inside(pm) {
            tin = tm;
        } else {
            tout = tm;
        }
    }
    let t = 0.5 * (tin + tout);
    let cut = geom::add(a, geom::scale(geom::sub(b, a), t));
    let (ka, kb) = if a_inside { (a, cut) } else { (cut, b) };
    let geom_kept = FacetGeom::Segment(ka, kb);
    if geom_kept.measure() > 0.0 && inside(geom_kept.center()) {
        out.push(MeshFacet {
            geom: geom_kept,
            normal: f.normal,
            measure: if f.reduced { geom_kept.measure() } else { 0.0 },
            reduced: f.reduced,
            chordal: f.chordal,
        });
    }
}
