//! Hand-rolled convex hulls in dimensions 1, 2, 3.
//!
//! The polytope sizes in this crate are tiny (bodies are things like squares,
//! triangles, cross-polytopes, cubes, octahedra and their polars or Minkowski
//! sums), so the classic O(m log m) monotone chain (2-D) and the O(m²)
//! incremental hull (3-D) are used without any arithmetic filtering beyond a
//! scale-relative tolerance.

use crate::geom::{self, Point};

/// A supporting hyperplane `normal · x = offset` with unit outward normal.
#[derive(Clone, Copy, Debug)]
pub struct Plane {
    pub normal: Point,
    pub offset: f64,
}

/// Hull output: extreme vertices (unsorted) plus supporting planes, one per
/// geometric facet (deduplicated).
pub struct Hull {
    pub vertices: Vec<Point>,
    pub planes: Vec<Plane>,
}

/// Largest coordinate magnitude; the reference scale for tolerances.
fn coord_scale(points: &[Point]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, &c| m.max(c.abs()))
        .max(1e-300)
}

/// Removes near-duplicate points (within `tol` in Euclidean distance).
fn dedup(points: &[Point], tol: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        if !out.iter().any(|&q| geom::dist(p, q) <= tol) {
            out.push(p);
        }
    }
    out
}

/// Convex hull in the requested dimension, or `None` when the points do not
/// affinely span it.
pub fn hull(dim: usize, points: &[Point]) -> Option<Hull> {
    let scale = coord_scale(points);
    let tol = 1e-9 * scale;
    let pts = dedup(points, tol);
    match dim {
        1 => hull_1d(&pts, tol),
        2 => hull_2d(&pts, tol),
        3 => hull_3d(&pts, tol),
        _ => None,
    }
}

fn hull_1d(pts: &[Point], tol: f64) -> Option<Hull> {
    let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo > tol) {
        return None;
    }
    Some(Hull {
        vertices: vec![[lo, 0.0, 0.0], [hi, 0.0, 0.0]],
        planes: vec![
            Plane { normal: [1.0, 0.0, 0.0], offset: hi },
            Plane { normal: [-1.0, 0.0, 0.0], offset: -lo },
        ],
    })
}

/// z-component of (b−a) × (c−a): twice the signed area of triangle abc.
fn area2(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Monotone chain; returns the counter-clockwise vertex loop and one plane
/// per edge.  Strictly convex turns only, so collinear middle points are
/// dropped and every returned vertex is extreme.
fn hull_2d(pts: &[Point], tol: f64) -> Option<Hull> {
    if pts.len() < 3 {
        return None;
    }
    let mut sorted = pts.to_vec();
    sorted.sort_by(geom::lex_cmp);
    let turn_tol = tol * coord_scale(pts); // area units: length · length

    let chain = |iter: &mut dyn Iterator<Item = Point>| -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for p in iter {
            while out.len() >= 2 && area2(out[out.len() - 2], out[out.len() - 1], p) <= turn_tol {
                out.pop();
            }
            out.push(p);
        }
        out
    };
    let mut lower = chain(&mut sorted.iter().copied());
    let mut upper = chain(&mut sorted.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let loop_ccw = lower;
    if loop_ccw.len() < 3 {
        return None;
    }

    let mut planes = Vec::with_capacity(loop_ccw.len());
    for (i, &p) in loop_ccw.iter().enumerate() {
        let q = loop_ccw[(i + 1) % loop_ccw.len()];
        let d = geom::sub(q, p);
        // Outward normal of a CCW edge points to its right.
        let n = geom::unit([d[1], -d[0], 0.0], 0.0)?;
        planes.push(Plane { normal: n, offset: geom::dot(n, p) });
    }
    Some(Hull { vertices: loop_ccw, planes })
}

/// A triangular face of the incremental 3-D hull.
#[derive(Clone, Copy)]
struct Face {
    v: [usize; 3],
    normal: Point,
    offset: f64,
    alive: bool,
}

fn make_face(pts: &[Point], a: usize, b: usize, c: usize, inside: Point) -> Option<Face> {
    let n = geom::cross(geom::sub(pts[b], pts[a]), geom::sub(pts[c], pts[a]));
    let mut n = geom::unit(n, 1e-14 * coord_scale(pts).powi(2))?;
    let mut v = [a, b, c];
    if geom::dot(n, geom::sub(inside, pts[a])) > 0.0 {
        n = geom::scale(n, -1.0);
        v.swap(1, 2);
    }
    Some(Face { v, normal: n, offset: geom::dot(n, pts[a]), alive: true })
}

/// Incremental hull with visible-face deletion and horizon fans.
fn hull_3d(pts: &[Point], tol: f64) -> Option<Hull> {
    if pts.len() < 4 {
        return None;
    }
    // Seed simplex: spread-out, affinely independent quadruple.
    let i0 = 0;
    let i1 = (0..pts.len()).max_by(|&i, &j| {
        geom::dist(pts[i0], pts[i]).total_cmp(&geom::dist(pts[i0], pts[j]))
    })?;
    let line = geom::sub(pts[i1], pts[i0]);
    let area_of = |i: usize| geom::norm(geom::cross(line, geom::sub(pts[i], pts[i0])));
    let i2 = (0..pts.len()).max_by(|&i, &j| area_of(i).total_cmp(&area_of(j)))?;
    let base_n = geom::cross(line, geom::sub(pts[i2], pts[i0]));
    let vol_of = |i: usize| geom::dot(base_n, geom::sub(pts[i], pts[i0])).abs();
    let i3 = (0..pts.len()).max_by(|&i, &j| vol_of(i).total_cmp(&vol_of(j)))?;
    if geom::dist(pts[i0], pts[i1]) <= tol
        || area_of(i2) <= tol * tol
        || vol_of(i3) <= tol * tol * tol
    {
        return None; // points do not span 3-space
    }

    let centroid = geom::scale(
        geom::add(geom::add(pts[i0], pts[i1]), geom::add(pts[i2], pts[i3])),
        0.25,
    );
    let mut faces: Vec<Face> = Vec::new();
    for (a, b, c) in [(i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)] {
        faces.push(make_face(pts, a, b, c, centroid)?);
    }

    for p in 0..pts.len() {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && geom::dot(f.normal, pts[p]) - f.offset > tol)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // Horizon = directed edges of visible faces whose reverse edge is not
        // itself part of a visible face.
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &fi in &visible {
            let [a, b, c] = faces[fi].v;
            for e in [(a, b), (b, c), (c, a)] {
                if let Some(pos) = edges.iter().position(|&(x, y)| (y, x) == e) {
                    edges.swap_remove(pos);
                } else {
                    edges.push(e);
                }
            }
        }
        for &fi in &visible {
            faces[fi].alive = false;
        }
        for (a, b) in edges {
            if let Some(f) = make_face(pts, a, b, p, centroid) {
                faces.push(f);
            }
        }
    }

    let live: Vec<&Face> = faces.iter().filter(|f| f.alive).collect();
    if live.is_empty() {
        return None;
    }
    let mut vert_ids: Vec<usize> = live.iter().flat_map(|f| f.v).collect();
    vert_ids.sort_unstable();
    vert_ids.dedup();
    let vertices: Vec<Point> = vert_ids.iter().map(|&i| pts[i]).collect();

    // Coplanar triangles of one geometric facet share (normal, offset).
    let mut planes: Vec<Plane> = Vec::new();
    for f in &live {
        let dup = planes.iter().any(|pl| {
            geom::dist(pl.normal, f.normal) <= 1e-9 && (pl.offset - f.offset).abs() <= tol
        });
        if !dup {
            planes.push(Plane { normal: f.normal, offset: f.offset });
        }
    }
    Some(Hull { vertices, planes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_hull_drops_interior_and_collinear() {
        let pts: Vec<Point> = vec![
            [1.0, 1.0, 0.0],
            [-1.0, 1.0, 0.0],
            [-1.0, -1.0, 0.0],
            [1.0, -1.0, 0.0],
            [0.0, 0.0, 0.0],  // interior
            [0.0, 1.0, 0.0],  // edge midpoint
        ];
        let h = hull(2, &pts).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.planes.len(), 4);
    }

    #[test]
    fn octahedron_hull() {
        let mut pts: Vec<Point> = Vec::new();
        for d in 0..3 {
            for s in [-1.0, 1.0] {
                let mut p = [0.0; 3];
                p[d] = s;
                pts.push(p);
            }
        }
        pts.push([0.1, 0.1, 0.1]); // interior
        let h = hull(3, &pts).unwrap();
        assert_eq!(h.vertices.len(), 6);
        assert_eq!(h.planes.len(), 8);
        for pl in &h.planes {
            assert!((pl.offset - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(hull(2, &[[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]).is_none());
        assert!(hull(3, &[[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]]).is_none());
        assert!(hull(1, &[[0.5, 0.0, 0.0]]).is_none());
    }
}
