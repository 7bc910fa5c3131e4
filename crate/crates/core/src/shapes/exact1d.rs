//! Exact 1-D evaluation of the content functionals by interval-endpoint
//! arithmetic.
//!
//! One dimension is where the contrasts between the functionals are sharpest
//! (isolated points carry full diameter weight, boundary vs reduced boundary
//! split cleanly), and where everything is computable without any grid: the
//! set algebra of [`super::set1::Set1`] tracks open/closed endpoints
//! exactly, so the measures below are exact rational-style arithmetic on
//! endpoints, constant in ε once components are separated by more than the
//! dilation width.

use crate::convex::ConvexBody;
use crate::shapes::set1::{Interval1, Set1};
use crate::shapes::{Domain, Region, Shape, ShapeError};
use serde::{Deserialize, Serialize};

/// Which content functional to evaluate.
///
/// With gauge body C, open region Ω and window-bounded sets:
///
/// * `M`: λ(((S∩Ω) ⊕ εC) ∩ Ω) / 2ε — the two-sided content of a (usually
///   λ-null) set S relative to Ω;
/// * `SM`: λ(((E∩Ω) ⊕ εC) ∩ (Ω∖E)) / ε — the outer (one-sided) content of
///   a set E;
/// * `FrakM`: λ((S ⊕ εC) ∩ Ω) / 2ε — like `M` but without intersecting S
///   with Ω before dilating, so mass seeded on ∂Ω still counts;
/// * `ScriptM`: ½·(SM of E + SM of Ω∖E) — the symmetrized outer content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Functional {
    M,
    SM,
    FrakM,
    ScriptM,
}

impl Functional {
    /// Stable lowercase label for reports and CSV.
    pub fn label(&self) -> &'static str {
        match self {
            Functional::M => "m",
            Functional::SM => "sm",
            Functional::FrakM => "frak_m",
            Functional::ScriptM => "script_m",
        }
    }
}

/// For the boundary-seeded functionals (`M`, `FrakM`): evaluate on the full
/// topological boundary of E, or only on the reduced (density-½) part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryChoice {
    Topological,
    Reduced,
}

/// Exact fixed-ε content in one dimension.
///
/// `e` must be expressible as a finite union of intervals and points and
/// `c` must be a 1-D interval body [c_lo, c_hi] with c_lo < 0 < c_hi. The
/// `target` selector only matters for `M` and `FrakM`, which derive ∂E or
/// ∂*E from `e` internally; `SM` and `ScriptM` act on `e` itself.
///
/// Endpoint conventions: dilation by a closed interval maps each component
/// [l, h) to [l + ε·c_lo, h + ε·c_hi) preserving end closedness, so all
/// measures below are exact endpoint arithmetic. Isolated points of the
/// operand that do not lie strictly inside Ω are stripped before dilation
/// (the λ-null set intersections are the only place the open/closed
/// distinction of Ω changes a measure).
pub fn exact_1d_content(
    e: &Shape,
    d: &Domain,
    c: &ConvexBody,
    functional: Functional,
    target: BoundaryChoice,
    eps: f64,
) -> Result<f64, ShapeError> {
    if e.dim() != 1 || d.dim() != 1 {
        return Err(ShapeError::DimensionMismatch(e.dim(), d.dim()));
    }
    let (c_lo, c_hi) = c.as_interval().ok_or(ShapeError::NonIntervalBody)?;
    assert!(eps > 0.0 && eps.is_finite(), "ε must be positive");
    let (a, b) = (eps * c_lo, eps * c_hi);
    let e_set = e.to_set1().ok_or(ShapeError::NotIntervalAlgebra)?;
    let omega = d
        .open_region
        .to_set1()
        .ok_or(ShapeError::NotIntervalAlgebra)?;

    let value = match functional {
        Functional::M | Functional::FrakM => {
            let mut pts = match target {
                BoundaryChoice::Topological => e_set.boundary_points(),
                BoundaryChoice::Reduced => reduced_boundary_points(&e_set),
            };
            if functional == Functional::M {
                // S∩Ω first: only points strictly inside Ω are seeded.
                pts.retain(|&p| d.open_region.indicator([p, 0.0, 0.0]) == Region::Inside);
            }
            let seed = Set1::from_parts(pts.into_iter().map(Interval1::point).collect());
            let dilated = seed.dilate(a, b);
            dilated.intersection(&omega).measure() / (2.0 * eps)
        }
        Functional::SM => one_sided(&e_set, &omega, &d.open_region, a, b, eps),
        Functional::ScriptM => {
            let comp = omega.difference(&e_set);
            let sm_e = one_sided(&e_set, &omega, &d.open_region, a, b, eps);
            let sm_c = one_sided(&comp, &omega, &d.open_region, a, b, eps);
            0.5 * (sm_e + sm_c)
        }
    };
    Ok(value)
}

/// λ(((X∩Ω) ⊕ εC) ∩ (Ω∖X)) / ε with exact isolated-point handling.
fn one_sided(x: &Set1, omega: &Set1, open_region: &Shape, a: f64, b: f64, eps: f64) -> f64 {
    let mut seed = x.intersection(omega);
    let strays: Vec<Interval1> = seed
        .isolated_points()
        .into_iter()
        .filter(|&p| open_region.indicator([p, 0.0, 0.0]) != Region::Inside)
        .map(Interval1::point)
        .collect();
    if !strays.is_empty() {
        seed = seed.difference(&Set1::from_parts(strays));
    }
    let dilated = seed.dilate(a, b);
    let mask = omega.difference(x);
    dilated.intersection(&mask).measure() / eps
}

/// Boundary points of density ½: covered on exactly one side.
pub(crate) fn reduced_boundary_points(set: &Set1) -> Vec<f64> {
    set.boundary_points()
        .into_iter()
        .filter(|&p| {
            let (l, r) = set.one_sided_coverage(p);
            l != r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AxisBox;

    fn line_domain(lo: f64, hi: f64) -> Domain {
        Domain::new(
            Shape::axis_box(&[lo], &[hi]),
            AxisBox::new(1, &[lo], &[hi]).unwrap(),
        )
        .unwrap()
    }

    fn sym_c() -> ConvexBody {
        ConvexBody::interval(-1.0, 1.0).unwrap()
    }

    #[test]
    fn interval_plus_point_values() {
        let e = Shape::union(
            Shape::intervals_closed(&[(0.0, 1.0)]),
            Shape::Points { dim: 1, points: vec![[2.0, 0.0, 0.0]] },
        );
        let d = line_domain(-2.0, 4.0);
        let c = sym_c();
        for eps in [0.05, 0.1, 0.25] {
            let sm =
                exact_1d_content(&e, &d, &c, Functional::SM, BoundaryChoice::Topological, eps)
                    .unwrap();
            assert!((sm - 4.0).abs() < 1e-12, "sm={sm} at ε={eps}");
            let m =
                exact_1d_content(&e, &d, &c, Functional::M, BoundaryChoice::Topological, eps)
                    .unwrap();
            assert!((m - 3.0).abs() < 1e-12, "m={m}");
            let m_red =
                exact_1d_content(&e, &d, &c, Functional::M, BoundaryChoice::Reduced, eps)
                    .unwrap();
            assert!((m_red - 2.0).abs() < 1e-12, "m_red={m_red}");
            let fm = exact_1d_content(
                &e,
                &d,
                &c,
                Functional::FrakM,
                BoundaryChoice::Reduced,
                eps,
            )
            .unwrap();
            assert!((fm - 2.0).abs() < 1e-12, "frak={fm}");
        }
    }

    #[test]
    fn representative_invariance_of_one_sided_content() {
        // (0,1), [0,1) and [0,1] share the closed interval description, and
        // the one-sided content of each is 2.
        let d = line_domain(-2.0, 3.0);
        let c = sym_c();
        let e = Shape::intervals_closed(&[(0.0, 1.0)]);
        let v = exact_1d_content(&e, &d, &c, Functional::SM, BoundaryChoice::Topological, 0.1)
            .unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let s = exact_1d_content(
            &e,
            &d,
            &c,
            Functional::ScriptM,
            BoundaryChoice::Topological,
            0.1,
        )
        .unwrap();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_weighs_a_full_diameter() {
        let d = line_domain(-3.0, 3.0);
        let c = ConvexBody::interval(-1.0, 2.0).unwrap();
        let e = Shape::Points { dim: 1, points: vec![[0.0, 0.0, 0.0]] };
        for eps in [0.01, 0.3, 1.0] {
            let v =
                exact_1d_content(&e, &d, &c, Functional::SM, BoundaryChoice::Topological, eps)
                    .unwrap();
            assert!((v - 3.0).abs() < 1e-12, "v={v} (diameter of [−1,2])");
        }
    }

    #[test]
    fn point_on_omega_edge_is_stripped() {
        // Ω = (0, 5): the isolated point {0} of E sits on ∂Ω, so E∩Ω drops
        // it and the one-sided content is that of [1,2] alone.
        let d = line_domain(0.0, 5.0);
        let c = sym_c();
        let e = Shape::union(
            Shape::intervals_closed(&[(1.0, 2.0)]),
            Shape::Points { dim: 1, points: vec![[0.0, 0.0, 0.0]] },
        );
        let v = exact_1d_content(&e, &d, &c, Functional::SM, BoundaryChoice::Topological, 0.1)
            .unwrap();
        assert!((v - 2.0).abs() < 1e-12, "v={v}");
    }

    #[test]
    fn rejects_non_interval_bodies_and_dimensions() {
        let d = line_domain(-1.0, 1.0);
        let e = Shape::intervals_closed(&[(0.0, 0.5)]);
        let ball2 = ConvexBody::ball(2, 1.0).unwrap();
        assert!(matches!(
            exact_1d_content(&e, &d, &ball2, Functional::SM, BoundaryChoice::Topological, 0.1),
            Err(ShapeError::NonIntervalBody)
        ));
    }
}
