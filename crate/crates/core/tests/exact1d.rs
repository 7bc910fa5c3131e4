//! Machine-precision checks of the 1-D content engine: pinned identities on
//! hand-computed configurations, plus randomized laws (combinatorial value
//! oracle, ε-stability, scaling covariance, complement symmetry, and the
//! pointwise chain between the three two-sided functionals).

use minklab::convex::ConvexBody;
use minklab::geom::AxisBox;
use minklab::shapes::set1::{Interval1, Set1};
use minklab::shapes::{exact_1d_content, BoundaryChoice, Functional};
use minklab::{Domain, Shape};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn line_domain(lo: f64, hi: f64) -> Domain {
    Domain::new(Shape::axis_box(&[lo], &[hi]), AxisBox::new(1, &[lo], &[hi]).unwrap()).unwrap()
}

fn body(lo: f64, hi: f64) -> ConvexBody {
    ConvexBody::interval(lo, hi).unwrap()
}

fn value(e: &Shape, d: &Domain, c: &ConvexBody, f: Functional, eps: f64) -> f64 {
    exact_1d_content(e, d, c, f, BoundaryChoice::Topological, eps).unwrap()
}

/// A union of well-separated intervals (random endpoint closedness) and
/// isolated points, described by counts; returns the shape together with
/// the component count and interval count, which the combinatorial oracle
/// needs.
#[derive(Debug, Clone)]
struct Config {
    shape: Shape,
    intervals: usize,
    points: usize,
    span_hi: f64,
}

fn config() -> impl Strategy<Value = Config> {
    // Each item: is_point, pre-gap in [0.4, 1.0], length in [0.25, 0.9],
    // lo/hi closedness.
    let item = (any::<bool>(), 0.4f64..1.0, 0.25f64..0.9, any::<bool>(), any::<bool>());
    prop::collection::vec(item, 1..6).prop_map(|items| {
        let mut parts = Vec::new();
        let mut x = 0.0;
        let mut intervals = 0;
        let mut points = 0;
        for (is_point, gap, len, lo_c, hi_c) in items {
            x += gap;
            if is_point {
                parts.push(Interval1::point(x));
                points += 1;
            } else {
                parts.push(Interval1 { lo: x, hi: x + len, lo_closed: lo_c, hi_closed: hi_c });
                x += len;
                intervals += 1;
            }
        }
        Config {
            shape: Shape::Intervals { set: Set1::from_parts(parts) },
            intervals,
            points,
            span_hi: x,
        }
    })
}

/// An interval gauge body with nonempty interior on both sides of 0.
fn gauge_body() -> impl Strategy<Value = (f64, f64)> {
    (-2.0f64..-0.2, 0.2f64..2.0)
}

#[test]
fn interval_plus_point_battery() {
    // E = [0,1] ∪ {2} inside Ω = (−2, 4), C = [−1, 1].
    let e = Shape::union(
        Shape::intervals_closed(&[(0.0, 1.0)]),
        Shape::Points { dim: 1, points: vec![[2.0, 0.0, 0.0]] },
    );
    let d = line_domain(-2.0, 4.0);
    let c = body(-1.0, 1.0);
    for eps in [0.3, 0.1, 0.02] {
        assert!((value(&e, &d, &c, Functional::SM, eps) - 4.0).abs() < TOL);
        assert!((value(&e, &d, &c, Functional::M, eps) - 3.0).abs() < TOL);
        let red =
            exact_1d_content(&e, &d, &c, Functional::M, BoundaryChoice::Reduced, eps).unwrap();
        assert!((red - 2.0).abs() < TOL);
        let frak =
            exact_1d_content(&e, &d, &c, Functional::FrakM, BoundaryChoice::Reduced, eps)
                .unwrap();
        assert!((frak - 2.0).abs() < TOL);
        assert!((value(&e, &d, &c, Functional::ScriptM, eps) - 3.0).abs() < TOL);
    }
}

#[test]
fn one_sided_content_ignores_null_representative_changes() {
    // (0,1), [0,1), [0,1] all have one-sided content 2 with C = [−1,1].
    let d = line_domain(-2.0, 3.0);
    let c = body(-1.0, 1.0);
    let variants = [
        Shape::Intervals { set: Set1::from_parts(vec![Interval1::open(0.0, 1.0)]) },
        Shape::Intervals {
            set: Set1::from_parts(vec![Interval1 {
                lo: 0.0,
                hi: 1.0,
                lo_closed: true,
                hi_closed: false,
            }]),
        },
        Shape::intervals_closed(&[(0.0, 1.0)]),
    ];
    for e in &variants {
        assert!((value(e, &d, &c, Functional::SM, 0.07) - 2.0).abs() < TOL);
    }
}

#[test]
fn asymmetric_body_weighs_a_point_by_its_diameter() {
    let d = line_domain(-4.0, 4.0);
    let c = body(-1.0, 2.0);
    let e = Shape::Points { dim: 1, points: vec![[0.0, 0.0, 0.0]] };
    for eps in [0.01, 0.5, 1.0] {
        assert!((value(&e, &d, &c, Functional::SM, eps) - 3.0).abs() < TOL);
    }
}

proptest! {
    /// For ε below half the minimal configuration gap, every component of a
    /// separated union contributes exactly diam(C) to the one-sided
    /// content, and the value is ε-independent.
    #[test]
    fn one_sided_value_counts_components(cfg in config(), (c_lo, c_hi) in gauge_body()) {
        let d = line_domain(-2.0, cfg.span_hi + 2.0);
        let c = body(c_lo, c_hi);
        let diam = c_hi - c_lo;
        let eps = 0.4 / (2.0 * diam.max(1.0));
        let oracle = (cfg.intervals + cfg.points) as f64 * diam;
        let v = value(&cfg.shape, &d, &c, Functional::SM, eps);
        prop_assert!((v - oracle).abs() < TOL * (1.0 + oracle), "v={v} oracle={oracle}");
        let v_half = value(&cfg.shape, &d, &c, Functional::SM, eps / 2.0);
        prop_assert!((v - v_half).abs() < TOL * (1.0 + oracle));
    }

    /// Two-sided content counts topological boundary points at half a
    /// diameter each; the reduced variant drops the isolated points.
    #[test]
    fn two_sided_value_counts_boundary_points(cfg in config(), (c_lo, c_hi) in gauge_body()) {
        let d = line_domain(-2.0, cfg.span_hi + 2.0);
        let c = body(c_lo, c_hi);
        let diam = c_hi - c_lo;
        let eps = 0.4 / (2.0 * diam.max(1.0));
        let n_boundary = (2 * cfg.intervals + cfg.points) as f64;
        let v = value(&cfg.shape, &d, &c, Functional::M, eps);
        let oracle = n_boundary * diam / 2.0;
        prop_assert!((v - oracle).abs() < TOL * (1.0 + oracle), "v={v} oracle={oracle}");
        let red = exact_1d_content(&cfg.shape, &d, &c, Functional::M, BoundaryChoice::Reduced, eps)
            .unwrap();
        let red_oracle = cfg.intervals as f64 * diam;
        prop_assert!((red - red_oracle).abs() < TOL * (1.0 + red_oracle));
    }

    /// With every seed strictly inside Ω, clipping before or after dilation
    /// cannot differ: the window-relative functional agrees with the
    /// two-sided one exactly.
    #[test]
    fn interior_seeds_make_clipping_irrelevant(cfg in config(), (c_lo, c_hi) in gauge_body()) {
        let d = line_domain(-4.0, cfg.span_hi + 4.0);
        let c = body(c_lo, c_hi);
        for eps in [0.05, 0.11] {
            let m = value(&cfg.shape, &d, &c, Functional::M, eps);
            let frak = value(&cfg.shape, &d, &c, Functional::FrakM, eps);
            prop_assert!((m - frak).abs() < TOL * (1.0 + m.abs()));
        }
    }

    /// Scaling covariance: dilating by ε·(tC) is dilating by (tε)·C, so the
    /// two-sided value satisfies M[tC](ε) = t·M[C](tε), and likewise for
    /// the one-sided value.
    #[test]
    fn scaling_moves_between_body_and_epsilon(
        cfg in config(),
        (c_lo, c_hi) in gauge_body(),
        t in 0.25f64..2.0,
    ) {
        let d = line_domain(-6.0, cfg.span_hi + 6.0);
        let c = body(c_lo, c_hi);
        let tc = c.scale(t).unwrap();
        let eps = 0.08;
        for f in [Functional::M, Functional::SM, Functional::ScriptM] {
            let scaled_body = value(&cfg.shape, &d, &tc, f, eps);
            let scaled_eps = t * value(&cfg.shape, &d, &c, f, t * eps);
            prop_assert!(
                (scaled_body - scaled_eps).abs() < 1e-10 * (1.0 + scaled_eps.abs()),
                "{}: {scaled_body} vs {scaled_eps}",
                f.label()
            );
        }
    }

    /// The symmetrized functional is invariant under complementing within
    /// Ω.
    #[test]
    fn symmetrized_value_survives_complement(cfg in config(), (c_lo, c_hi) in gauge_body()) {
        let lo = -2.0;
        let hi = cfg.span_hi + 2.0;
        let d = line_domain(lo, hi);
        let c = body(c_lo, c_hi);
        let comp = Shape::difference(Shape::axis_box(&[lo], &[hi]), cfg.shape.clone());
        for eps in [0.04, 0.09] {
            let a = value(&cfg.shape, &d, &c, Functional::ScriptM, eps);
            let b = value(&comp, &d, &c, Functional::ScriptM, eps);
            prop_assert!((a - b).abs() < TOL * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    /// The pointwise chain: at every ε, the spill-over functional dominates
    /// the symmetrized one, which dominates the two-sided one.
    #[test]
    fn chain_holds_at_every_epsilon(
        cfg in config(),
        (c_lo, c_hi) in gauge_body(),
        eps in 0.01f64..1.5,
    ) {
        let d = line_domain(-2.0, cfg.span_hi + 2.0);
        let c = body(c_lo, c_hi);
        let m = value(&cfg.shape, &d, &c, Functional::M, eps);
        let script = value(&cfg.shape, &d, &c, Functional::ScriptM, eps);
        let frak = value(&cfg.shape, &d, &c, Functional::FrakM, eps);
        let slack = TOL * (1.0 + frak.abs());
        prop_assert!(frak >= script - slack, "frak {frak} < script {script}");
        prop_assert!(script >= m - slack, "script {script} < m {m}");
    }
}
