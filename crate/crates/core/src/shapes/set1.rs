//! Exact 1-D set calculus on finite unions of intervals and points.
//!
//! A [`Set1`] is a normalized list of maximal components, each carrying its
//! endpoint closedness, so boolean algebra, topological operations (closure,
//! interior, boundary), measure-theoretic operations (density-1 interior,
//! density-0 exterior, essential boundary) and Minkowski dilation by an
//! interval are all evaluated by exact endpoint arithmetic — no grids, no
//! tolerances.  Components may reach ±∞ (open on the infinite side), which is
//! how the whole line is represented.
//!
//! This engine backs every machine-precision 1-D check in the crate: content
//! functionals of interval unions are computed to f64 rounding error, and
//! sets differing by λ-null pieces (an isolated point, a removed endpoint)
//! are genuinely distinguished — the raster pipeline cannot do that.

/// One maximal component `lo..hi` with endpoint closedness flags.
///
/// Degenerate components (`lo == hi`) are single points and are closed on
/// both sides; infinite endpoints are open on that side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval1 {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval1 {
    /// Closed interval `[lo, hi]` (or the point `{lo}` when `lo == hi`).
    pub fn closed(lo: f64, hi: f64) -> Interval1 {
        Interval1 { lo, hi, lo_closed: lo.is_finite(), hi_closed: hi.is_finite() }
    }

    /// Open interval `(lo, hi)`.
    pub fn open(lo: f64, hi: f64) -> Interval1 {
        Interval1 { lo, hi, lo_closed: false, hi_closed: false }
    }

    /// Single point `{x}`.
    pub fn point(x: f64) -> Interval1 {
        Interval1 { lo: x, hi: x, lo_closed: true, hi_closed: true }
    }

    fn valid(&self) -> bool {
        if self.lo > self.hi || self.lo.is_nan() || self.hi.is_nan() {
            return false;
        }
        if self.lo == self.hi && !(self.lo_closed && self.hi_closed && self.lo.is_finite()) {
            return false;
        }
        if (self.lo == f64::NEG_INFINITY && self.lo_closed)
            || (self.hi == f64::INFINITY && self.hi_closed)
        {
            return false;
        }
        true
    }

    fn len(&self) -> f64 {
        self.hi - self.lo
    }

    fn contains(&self, x: f64) -> bool {
        (self.lo < x || (self.lo == x && self.lo_closed))
            && (x < self.hi || (x == self.hi && self.hi_closed))
    }
}

/// A finite union of intervals and points, kept in normal form: components
/// sorted, pairwise disjoint, and non-adjacent (no mergeable touching pair).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Set1 {
    comps: Vec<Interval1>,
}

impl Set1 {
    /// The empty set.
    pub fn empty() -> Set1 {
        Set1 { comps: Vec::new() }
    }

    /// The whole real line.
    pub fn line() -> Set1 {
        Set1::from_parts(vec![Interval1::open(f64::NEG_INFINITY, f64::INFINITY)])
    }

    /// Normalizing constructor: invalid parts (NaN, inverted, improperly
    /// closed infinite ends) are dropped, overlapping or mergeable-touching
    /// parts are fused.
    pub fn from_parts(parts: Vec<Interval1>) -> Set1 {
        let mut parts: Vec<Interval1> = parts.into_iter().filter(Interval1::valid).collect();
        parts.sort_by(|a, b| {
            a.lo.total_cmp(&b.lo)
                .then_with(|| b.lo_closed.cmp(&a.lo_closed))
        });
        let mut comps: Vec<Interval1> = Vec::with_capacity(parts.len());
        for p in parts {
            match comps.last_mut() {
                Some(last) if touches(last, &p) => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    } else if p.hi == last.hi {
                        last.hi_closed |= p.hi_closed;
                    }
                }
                _ => comps.push(p),
            }
        }
        Set1 { comps }
    }

    /// The normalized maximal components.
    pub fn components(&self) -> &[Interval1] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Exact membership.
    pub fn contains(&self, x: f64) -> bool {
        self.comps.iter().any(|c| c.contains(x))
    }

    /// Lebesgue measure (∞ if any component is unbounded).
    pub fn measure(&self) -> f64 {
        self.comps.iter().map(Interval1::len).sum()
    }

    /// Union.
    pub fn union(&self, other: &Set1) -> Set1 {
        let mut parts = self.comps.clone();
        parts.extend(other.comps.iter().copied());
        Set1::from_parts(parts)
    }

    /// Complement within ℝ.
    pub fn complement(&self) -> Set1 {
        let mut parts = Vec::with_capacity(self.comps.len() + 1);
        let mut cursor = f64::NEG_INFINITY;
        let mut cursor_closed = false; // closedness of the gap's low end
        for c in &self.comps {
            push_gap(&mut parts, cursor, cursor_closed, c.lo, !c.lo_closed);
            cursor = c.hi;
            cursor_closed = !c.hi_closed;
        }
        push_gap(&mut parts, cursor, cursor_closed, f64::INFINITY, false);
        Set1::from_parts(parts)
    }

    /// Intersection (De Morgan on exact complements).
    pub fn intersection(&self, other: &Set1) -> Set1 {
        self.complement().union(&other.complement()).complement()
    }

    /// Set difference `self ∖ other`.
    pub fn difference(&self, other: &Set1) -> Set1 {
        self.intersection(&other.complement())
    }

    /// Minkowski dilation by the closed interval `[a, b]` (a ≤ b): each
    /// component `⟨lo, hi⟩` becomes `⟨lo + a, hi + b⟩` with closedness
    /// preserved on finite ends; points grow into closed intervals.
    pub fn dilate(&self, a: f64, b: f64) -> Set1 {
        debug_assert!(a <= b);
        let parts = self
            .comps
            .iter()
            .map(|c| {
                let grown = c.lo < c.hi || a < b;
                Interval1 {
                    lo: c.lo + a,
                    hi: c.hi + b,
                    lo_closed: if grown && c.lo == c.hi { true } else { c.lo_closed },
                    hi_closed: if grown && c.lo == c.hi { true } else { c.hi_closed },
                }
            })
            .collect();
        Set1::from_parts(parts)
    }

    /// Topological closure.
    pub fn closure(&self) -> Set1 {
        let parts = self
            .comps
            .iter()
            .map(|c| Interval1 {
                lo: c.lo,
                hi: c.hi,
                lo_closed: c.lo.is_finite(),
                hi_closed: c.hi.is_finite(),
            })
            .collect();
        Set1::from_parts(parts)
    }

    /// Topological interior.
    pub fn interior(&self) -> Set1 {
        // Components are maximal and separated, so opening each one (and
        // dropping points) is exact.
        let parts = self
            .comps
            .iter()
            .filter(|c| c.lo < c.hi)
            .map(|c| Interval1::open(c.lo, c.hi))
            .collect();
        Set1::from_parts(parts)
    }

    /// Topological boundary ∂ = closure ∖ interior: a finite point list
    /// (sorted, deduplicated).
    pub fn boundary_points(&self) -> Vec<f64> {
        let cl = self.closure();
        let int = self.interior();
        let mut pts: Vec<f64> = Vec::new();
        for c in &self.comps {
            for x in [c.lo, c.hi] {
                if x.is_finite() && cl.contains(x) && !int.contains(x) {
                    pts.push(x);
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Density-1 set E¹: for finite interval unions this is the interior of
    /// the closure of the positive-length components (measure-zero gaps and
    /// endpoints heal over, null points drop out).
    pub fn essential_interior(&self) -> Set1 {
        let fat = Set1::from_parts(
            self.comps
                .iter()
                .filter(|c| c.lo < c.hi)
                .map(|c| Interval1::closed(c.lo, c.hi))
                .collect(),
        );
        fat.interior()
    }

    /// Density-0 set E⁰ = (ℝ∖E)¹.
    pub fn essential_exterior(&self) -> Set1 {
        self.complement().essential_interior()
    }

    /// Essential boundary ∂*E = ℝ ∖ (E⁰ ∪ E¹): a finite point list.
    pub fn essential_boundary_points(&self) -> Vec<f64> {
        let e1 = self.essential_interior();
        let e0 = self.essential_exterior();
        let mut pts: Vec<f64> = Vec::new();
        for set in [self, &self.complement()] {
            for c in set.components() {
                for x in [c.lo, c.hi] {
                    if x.is_finite() && !e1.contains(x) && !e0.contains(x) {
                        pts.push(x);
                    }
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// One-sided coverage at `x`: whether `(x−δ, x)` resp. `(x, x+δ)` lie in
    /// the set for all small δ > 0.  Exact from the component list.
    pub fn one_sided_coverage(&self, x: f64) -> (bool, bool) {
        let left = self.comps.iter().any(|c| c.lo < x && c.hi >= x);
        let right = self.comps.iter().any(|c| c.lo <= x && c.hi > x);
        (left, right)
    }

    /// The point set of degenerate (isolated, λ-null) components.
    pub fn isolated_points(&self) -> Vec<f64> {
        self.comps.iter().filter(|c| c.lo == c.hi).map(|c| c.lo).collect()
    }
}

/// True when `b` overlaps `a` or touches it mergeably (zero gap with at
/// least one closed side).  Requires `a.lo ≤ b.lo` (sorted sweep order).
fn touches(a: &Interval1, b: &Interval1) -> bool {
    if b.lo < a.hi {
        return true;
    }
    b.lo == a.hi && (a.hi_closed || b.lo_closed)
}

/// Appends the complement gap `⟨lo, hi⟩` if nonempty.
fn push_gap(parts: &mut Vec<Interval1>, lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) {
    if lo < hi || (lo == hi && lo.is_finite() && lo_closed && hi_closed) {
        parts.push(Interval1 { lo, hi, lo_closed, hi_closed });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_and_point() -> Set1 {
        Set1::from_parts(vec![Interval1::closed(0.0, 1.0), Interval1::point(2.0)])
    }

    #[test]
    fn normalization_merges_where_possible() {
        // [0,1) ∪ [1,2] fuses; (0,1) ∪ (1,2) cannot.
        let merged = Set1::from_parts(vec![
            Interval1 { lo: 0.0, hi: 1.0, lo_closed: true, hi_closed: false },
            Interval1::closed(1.0, 2.0),
        ]);
        assert_eq!(merged.components().len(), 1);
        let split = Set1::from_parts(vec![Interval1::open(0.0, 1.0), Interval1::open(1.0, 2.0)]);
        assert_eq!(split.components().len(), 2);
        assert!(!split.contains(1.0));
        assert_eq!(split.measure(), 2.0);
    }

    #[test]
    fn complement_roundtrip() {
        let e = unit_and_point();
        let cc = e.complement().complement();
        assert_eq!(cc, e);
        assert!(e.complement().contains(1.5));
        assert!(!e.complement().contains(2.0));
        assert!(!e.complement().contains(0.0));
    }

    #[test]
    fn dilation_grows_endpoints() {
        let e = unit_and_point();
        let d = e.dilate(-0.25, 0.25);
        assert_eq!(d.components().len(), 2);
        assert_eq!(d.measure(), 2.0);
        assert!(d.contains(2.25) && d.contains(1.75) && !d.contains(1.5));
        // Asymmetric body.
        let p = Set1::from_parts(vec![Interval1::point(0.0)]).dilate(-0.5, 1.0);
        assert_eq!(p.components(), &[Interval1::closed(-0.5, 1.0)]);
    }

    #[test]
    fn topology_of_unit_and_point() {
        let e = unit_and_point();
        assert_eq!(e.boundary_points(), vec![0.0, 1.0, 2.0]);
        assert_eq!(e.interior().components(), &[Interval1::open(0.0, 1.0)]);
        assert_eq!(e.essential_boundary_points(), vec![0.0, 1.0]);
        assert_eq!(e.essential_interior().components(), &[Interval1::open(0.0, 1.0)]);
        assert!(e.essential_exterior().contains(2.0));
    }

    #[test]
    fn measure_zero_gap_heals_in_essential_interior() {
        let cracked = Set1::from_parts(vec![
            Interval1 { lo: 0.0, hi: 0.5, lo_closed: true, hi_closed: false },
            Interval1 { lo: 0.5, hi: 1.0, lo_closed: false, hi_closed: true },
        ]);
        assert_eq!(cracked.components().len(), 2);
        assert_eq!(cracked.boundary_points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(
            cracked.essential_interior().components(),
            &[Interval1::open(0.0, 1.0)]
        );
        assert_eq!(cracked.essential_boundary_points(), vec![0.0, 1.0]);
    }

    #[test]
    fn one_sided_coverage_cases() {
        let e = unit_and_point();
        assert_eq!(e.one_sided_coverage(0.0), (false, true));
        assert_eq!(e.one_sided_coverage(1.0), (true, false));
        assert_eq!(e.one_sided_coverage(2.0), (false, false));
        assert_eq!(e.one_sided_coverage(0.5), (true, true));
    }
}
