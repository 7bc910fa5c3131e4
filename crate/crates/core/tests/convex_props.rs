//! Randomized property checks for the convex-body kernel: support/gauge
//! duality, polarity, scaling, reflection, Minkowski sums, and the metric
//! containment constants.

use minklab::convex::ConvexBody;
use minklab::Point;
use proptest::prelude::*;

const REL: f64 = 1e-9;

fn pad(dim: usize, raw: [f64; 3]) -> Point {
    let mut p = [0.0; 3];
    p[..dim].copy_from_slice(&raw[..dim]);
    p
}

/// A nonzero direction with coordinates in [-3, 3].
fn dir(dim: usize) -> impl Strategy<Value = Point> {
    prop::array::uniform3(-3.0f64..3.0)
        .prop_map(move |raw| pad(dim, raw))
        .prop_filter("needs a nonzero direction", |p| {
            p.iter().map(|c| c * c).sum::<f64>() > 1e-4
        })
}

/// A random body: a ball, or the hull of a random cloud around a
/// cross-polytope core (the core keeps the origin strictly interior and
/// the hull full-dimensional, so construction never fails).
fn body(dim: usize) -> impl Strategy<Value = ConvexBody> {
    let ball = (0.1f64..4.0).prop_map(move |r| ConvexBody::ball(dim, r).unwrap());
    let cloud = prop::collection::vec(prop::array::uniform3(-2.0f64..2.0), 0..7);
    let poly = (cloud, 0.5f64..2.0).prop_map(move |(pts, core)| {
        let mut vs: Vec<Point> = pts.into_iter().map(|raw| pad(dim, raw)).collect();
        for axis in 0..dim {
            for sign in [-1.0, 1.0] {
                let mut v = [0.0; 3];
                v[axis] = sign * core;
                vs.push(v);
            }
        }
        ConvexBody::make_polytope(dim, &vs).unwrap()
    });
    prop_oneof![ball, poly]
}

fn dim_and<T: Strategy + 'static>(
    f: impl Fn(usize) -> T + 'static,
) -> impl Strategy<Value = (usize, T::Value)>
where
    T::Value: std::fmt::Debug,
{
    (1usize..=3).prop_flat_map(move |d| (Just(d), f(d)))
}

fn add(u: Point, v: Point) -> Point {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

fn neg(u: Point) -> Point {
    [-u[0], -u[1], -u[2]]
}

fn norm(u: Point) -> f64 {
    u.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Support-function distance over a fixed fan of probe directions; used to
/// compare bodies of any kind (vertex sets are only comparable for
/// polytopes).
fn support_gap(a: &ConvexBody, b: &ConvexBody, dirs: &[Point]) -> f64 {
    dirs.iter()
        .map(|&u| (a.support(u) - b.support(u)).abs())
        .fold(0.0, f64::max)
}

fn probe_fan(dim: usize) -> Vec<Point> {
    let mut dirs = Vec::new();
    match dim {
        1 => {
            dirs.push([1.0, 0.0, 0.0]);
            dirs.push([-1.0, 0.0, 0.0]);
        }
        2 => {
            for k in 0..24 {
                let t = std::f64::consts::TAU * k as f64 / 24.0;
                dirs.push([t.cos(), t.sin(), 0.0]);
            }
        }
        _ => {
            for i in -2i32..=2 {
                for j in -2i32..=2 {
                    for k in -2i32..=2 {
                        let u = [i as f64, j as f64, k as f64];
                        let n = norm(u);
                        if n > 0.0 {
                            dirs.push([u[0] / n, u[1] / n, u[2] / n]);
                        }
                    }
                }
            }
        }
    }
    dirs
}

proptest! {
    #[test]
    fn support_is_positively_homogeneous(
        (dim, c) in dim_and(body),
        u_raw in prop::array::uniform3(-3.0f64..3.0),
        t in 0.0f64..4.0,
    ) {
        let u = pad(dim, u_raw);
        let tu = [t * u[0], t * u[1], t * u[2]];
        let h = c.support(u);
        prop_assert!((c.support(tu) - t * h).abs() <= REL * (1.0 + t * h.abs()));
    }

    #[test]
    fn support_is_sublinear(
        (dim, c) in dim_and(body),
        u_raw in prop::array::uniform3(-3.0f64..3.0),
        v_raw in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let (u, v) = (pad(dim, u_raw), pad(dim, v_raw));
        let (hu, hv) = (c.support(u), c.support(v));
        let scale = 1.0 + hu.abs() + hv.abs();
        prop_assert!(c.support(add(u, v)) <= hu + hv + REL * scale);
    }

    #[test]
    fn gauge_of_polar_is_support(
        (dim, c) in dim_and(body),
        x_raw in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let x = pad(dim, x_raw);
        let polar = c.polar().unwrap();
        let (g, h) = (polar.gauge(x), c.support(x));
        prop_assert!((g - h).abs() <= REL * (1.0 + h.abs()), "gauge {g} vs support {h}");
    }

    #[test]
    fn double_polar_restores_the_body((dim, c) in dim_and(body)) {
        let back = c.polar().unwrap().polar().unwrap();
        let gap = match c.vertex_hausdorff(&back) {
            Some(d) => d,
            None => support_gap(&c, &back, &probe_fan(dim)),
        };
        prop_assert!(gap <= REL * (1.0 + c.diameter()), "gap {gap}");
    }

    #[test]
    fn gauge_and_support_bound_the_pairing(
        (dim, c) in dim_and(body),
        x_raw in prop::array::uniform3(-3.0f64..3.0),
        y_raw in prop::array::uniform3(-3.0f64..3.0),
    ) {
        // x·y ≤ g_C(x)·h_C(y): the pairing never beats the dual product.
        let (x, y) = (pad(dim, x_raw), pad(dim, y_raw));
        let dot: f64 = (0..3).map(|i| x[i] * y[i]).sum();
        let bound = c.gauge(x) * c.support(y);
        prop_assert!(dot <= bound + REL * (1.0 + bound.abs()));
    }

    #[test]
    fn containment_constants_bracket_the_norm(
        (_dim, c, u) in (1usize..=3).prop_flat_map(|d| (Just(d), body(d), dir(d))),
    ) {
        let (a, b) = c.containment_constants();
        let h = c.support(u);
        let n = norm(u);
        let slack = REL * (1.0 + n);
        prop_assert!(a * h <= n + slack, "a·h = {} > |u| = {n}", a * h);
        prop_assert!(b * h >= n - slack, "b·h = {} < |u| = {n}", b * h);
    }

    #[test]
    fn scaling_multiplies_support_and_divides_gauge(
        (dim, c) in dim_and(body),
        u_raw in prop::array::uniform3(-3.0f64..3.0),
        t in 0.1f64..5.0,
    ) {
        let u = pad(dim, u_raw);
        let scaled = c.scale(t).unwrap();
        let h = c.support(u);
        let g = c.gauge(u);
        prop_assert!((scaled.support(u) - t * h).abs() <= REL * (1.0 + t * h.abs()));
        prop_assert!((scaled.gauge(u) - g / t).abs() <= REL * (1.0 + g / t));
    }

    #[test]
    fn reflection_swaps_support_arguments(
        (dim, c) in dim_and(body),
        u_raw in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let u = pad(dim, u_raw);
        let r = c.reflect();
        let want = c.support(neg(u));
        prop_assert!((r.support(u) - want).abs() <= REL * (1.0 + want.abs()));
    }

    #[test]
    fn minkowski_sum_adds_supports(
        (dim, pair) in dim_and(|d| (body(d), body(d))),
        u_raw in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let (a, b) = pair;
        let u = pad(dim, u_raw);
        // Mixed ball/polytope sums are unsupported by design; skip those.
        if let Ok(sum) = a.minkowski_sum(&b) {
            let want = a.support(u) + b.support(u);
            prop_assert!((sum.support(u) - want).abs() <= REL * (1.0 + want.abs()));
        }
    }

    #[test]
    fn gauge_certifies_membership_of_scaled_vertices(
        (dim, c) in dim_and(body),
        t in 0.05f64..1.0,
    ) {
        // Every point t·v with v a vertex (or support point) satisfies
        // g(t·v) = t ≤ 1, and g(v/t) = 1/t ≥ 1 for t < 1.
        let vs: Vec<Point> = match c.vertices() {
            Some(vs) => vs.to_vec(),
            None => probe_fan(dim)
                .iter()
                .map(|&u| {
                    let r = c.support(u) / norm(u).max(1e-300);
                    [u[0] * r, u[1] * r, u[2] * r]
                })
                .collect(),
        };
        for v in vs {
            let g = c.gauge([t * v[0], t * v[1], t * v[2]]);
            prop_assert!((g - t).abs() <= REL * (1.0 + t), "g = {g}, t = {t}");
        }
    }

    #[test]
    fn interval_roundtrip_preserves_endpoints(lo in -4.0f64..-0.05, hi in 0.05f64..4.0) {
        let c = ConvexBody::interval(lo, hi).unwrap();
        let (a, b) = c.as_interval().unwrap();
        prop_assert!((a - lo).abs() <= REL && (b - hi).abs() <= REL);
        prop_assert!((c.support([1.0, 0.0, 0.0]) - hi).abs() <= REL);
        prop_assert!((c.support([-1.0, 0.0, 0.0]) + lo).abs() <= REL);
    }
}
