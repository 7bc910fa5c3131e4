//! Small fixed-dimension vector helpers shared by every module.
//!
//! Points live in at most [`crate::MAX_DIM`] = 3 dimensions and are stored as
//! `[f64; 3]` with unused trailing components equal to zero, so the same
//! arithmetic works for n = 1, 2, 3 without generics or allocation.

use serde::{Deserialize, Serialize};

/// A point / vector in ≤ 3 dimensions; unused components must be zero.
pub type Point = [f64; 3];

/// The all-zero point.
pub const ORIGIN: Point = [0.0, 0.0, 0.0];

/// Builds a point from a slice of length 1..=3, zero-padding the rest.
pub fn pad(coords: &[f64]) -> Point {
    let mut p = ORIGIN;
    p[..coords.len()].copy_from_slice(coords);
    p
}

/// Component-wise sum.
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Component-wise difference `a − b`.
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Scalar multiple.
pub fn scale(a: Point, t: f64) -> Point {
    [a[0] * t, a[1] * t, a[2] * t]
}

/// Euclidean inner product (padding components contribute zero).
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Euclidean norm.
pub fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

/// Euclidean distance.
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Cross product (meaningful for dimension 3; for planar inputs the first two
/// components vanish and the z component is the scalar 2-D cross).
pub fn cross(a: Point, b: Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Normalizes `a`; returns `None` for vectors shorter than `tiny`.
pub fn unit(a: Point, tiny: f64) -> Option<Point> {
    let n = norm(a);
    if n <= tiny {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Lexicographic total order on points (exact float comparison; NaN-free
/// inputs are a construction invariant everywhere in this crate).
pub fn lex_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    for d in 0..3 {
        match a[d].partial_cmp(&b[d]) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// An axis-aligned box; the computation window of a [`crate::shapes::Domain`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub dim: usize,
    pub lo: Point,
    pub hi: Point,
}

impl AxisBox {
    /// Builds a box from corner slices; requires `lo[d] < hi[d]` on every
    /// active axis.
    pub fn new(dim: usize, lo: &[f64], hi: &[f64]) -> Option<AxisBox> {
        if dim == 0 || dim > crate::MAX_DIM || lo.len() != dim || hi.len() != dim {
            return None;
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return None;
        }
        Some(AxisBox { dim, lo: pad(lo), hi: pad(hi) })
    }

    /// Extent along axis `d`.
    pub fn extent(&self, d: usize) -> f64 {
        self.hi[d] - self.lo[d]
    }

    /// Longest axis extent.
    pub fn max_extent(&self) -> f64 {
        (0..self.dim).map(|d| self.extent(d)).fold(0.0, f64::max)
    }

    /// Volume (product of active extents).
    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|d| self.extent(d)).product()
    }

    /// Sum of facet areas; in 1-D the count of endpoints (2), in 2-D the
    /// perimeter, in 3-D the surface area.  Used as the natural scale for
    /// absolute tolerance floors.
    pub fn boundary_measure(&self) -> f64 {
        match self.dim {
            1 => 2.0,
            2 => 2.0 * (self.extent(0) + self.extent(1)),
            _ => {
                let (a, b, c) = (self.extent(0), self.extent(1), self.extent(2));
                2.0 * (a * b + b * c + c * a)
            }
        }
    }

    /// Strict interior membership.
    pub fn contains_strict(&self, p: Point) -> bool {
        (0..self.dim).all(|d| self.lo[d] < p[d] && p[d] < self.hi[d])
    }

    /// Closed membership.
    pub fn contains_closed(&self, p: Point) -> bool {
        (0..self.dim).all(|d| self.lo[d] <= p[d] && p[d] <= self.hi[d])
    }

    /// Grows the box by `margin` on every side.
    pub fn inflate(&self, margin: f64) -> AxisBox {
        let mut out = *self;
        for d in 0..self.dim {
            out.lo[d] -= margin;
            out.hi[d] += margin;
        }
        out
    }

    /// True when `inner` (inflated by `margin`) fits strictly inside `self`.
    pub fn strictly_contains_box(&self, inner: &AxisBox, margin: f64) -> bool {
        (0..self.dim)
            .all(|d| self.lo[d] < inner.lo[d] - margin && inner.hi[d] + margin < self.hi[d])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_and_arithmetic() {
        let a = pad(&[1.0, 2.0]);
        let b = pad(&[0.5, -1.0]);
        assert_eq!(add(a, b), [1.5, 1.0, 0.0]);
        assert_eq!(dot(a, b), -1.5);
        assert_eq!(norm(pad(&[3.0, 4.0])), 5.0);
    }

    #[test]
    fn axis_box_rejects_degenerate() {
        assert!(AxisBox::new(2, &[0.0, 0.0], &[1.0, 0.0]).is_none());
        assert!(AxisBox::new(0, &[], &[]).is_none());
        assert!(AxisBox::new(4, &[0.0; 4], &[1.0; 4]).is_none());
    }

    #[test]
    fn axis_box_measures() {
        let b = AxisBox::new(2, &[0.0, 0.0], &[2.0, 3.0]).unwrap();
        assert_eq!(b.volume(), 6.0);
        assert_eq!(b.boundary_measure(), 10.0);
        assert!(b.contains_strict([1.0, 1.0, 0.0]));
        assert!(!b.contains_strict([0.0, 1.0, 0.0]));
        assert!(b.contains_closed([0.0, 1.0, 0.0]));
    }
}
