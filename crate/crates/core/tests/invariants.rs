//! Randomized structural invariants, 10⁴ cases each.

use proptest::prelude::*;

use freqbound::family::convex_hull;
use freqbound::geometry::{ConvexPolygon, Point};
use freqbound::onedim::chebyshev_like_check;
use freqbound::properties::union_brute_force;
use freqbound::solver::{self, combine_union, GridFrame, SolverConfig};

const CASES: u32 = 10_000;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        max_global_rejects: 10 * CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Convex hull of ten points in the unit square, Chebyshev-centered.
fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 10).prop_filter_map("degenerate hull", |pts| {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            return None;
        }
        let p = ConvexPolygon::new(hull).ok()?;
        (p.area() > 1e-3).then(|| p.center_at_chebyshev())
    })
}

/// Interior point from convex weights on the vertices.
fn interior(poly: &ConvexPolygon, weights: &[f64]) -> Point {
    let v = poly.vertices();
    let w: Vec<f64> = (0..v.len()).map(|i| weights[i % weights.len()] + 1e-3).collect();
    let s: f64 = w.iter().sum();
    v.iter().zip(&w).fold(Point::ORIGIN, |acc, (p, wi)| acc + *p * (wi / s))
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 10)
}

fn quiet() -> SolverConfig {
    SolverConfig {
        estimate_error: false,
        ..SolverConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn gauge_is_positively_homogeneous_and_one_on_vertices(poly in polygon(), w in weights(), t in 0.1..10.0f64) {
        let x = interior(&poly, &w);
        let j = poly.minkowski_gauge(x).unwrap().value;
        let jt = poly.minkowski_gauge(x * t).unwrap().value;
        prop_assert!((jt - t * j).abs() <= 1e-12 * (t * j).max(1e-300), "{jt} vs {}", t * j);
        prop_assert!(j < 1.0);
        for v in poly.vertices() {
            prop_assert!((poly.minkowski_gauge(*v).unwrap().value - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn boundary_support_integral_is_twice_the_area(poly in polygon()) {
        let b = poly.boundary_integrals().unwrap();
        prop_assert!((b.plus / (2.0 * poly.area()) - 1.0).abs() <= 1e-12);
        prop_assert!(b.minus > 0.0);
    }

    #[test]
    fn support_values_dominate_the_inradius(poly in polygon()) {
        let np = poly.normal_product_check();
        prop_assert!(np.holds, "{np:?}");
        prop_assert!(np.min_offset >= np.inradius - 1e-12 * poly.diameter());
    }

    #[test]
    fn monotone_chebyshev_inequality(
        raw_slopes in prop::collection::vec(0.0..1.0f64, 4..64),
        raw_psi in prop::collection::vec(0.0..1.0f64, 65),
        a in 0.1..5.0f64,
    ) {
        let n = raw_slopes.len();
        let h = a / n as f64;
        let mut slopes = raw_slopes;
        slopes.sort_by(f64::total_cmp);
        let mut xi = vec![0.0];
        for s in &slopes {
            xi.push(xi.last().unwrap() + s * h);
        }
        let mut psi: Vec<f64> = raw_psi[..=n].to_vec();
        psi.sort_by(|p, q| q.total_cmp(p));
        let c = chebyshev_like_check(&xi, &psi, a).unwrap();
        prop_assert!(c.lhs <= c.rhs + 1e-9 * c.rhs.abs().max(1.0), "{c:?}");
    }

    #[test]
    fn distance_to_the_boundary_is_concave(poly in polygon(), w1 in weights(), w2 in weights(), s in 0.0..1.0f64) {
        let (x, y) = (interior(&poly, &w1), interior(&poly, &w2));
        let mid = x * s + y * (1.0 - s);
        let defect = s * poly.min_slack(x) + (1.0 - s) * poly.min_slack(y) - poly.min_slack(mid);
        prop_assert!(defect <= 1e-12 * poly.diameter(), "{defect}");
    }

    #[test]
    fn sampled_distance_is_discretely_superharmonic(poly in polygon(), per_diameter in 8.0..40.0f64) {
        let h = poly.diameter() / per_diameter;
        let frame = GridFrame::around(&poly, h).unwrap();
        let field = solver::distance_field(&poly, frame);
        let fh = frame.spacing();
        if let Some(l) = field.max_interior_laplacian() {
            prop_assert!(l * fh * fh <= 1e-9, "{l}");
        }
    }

    #[test]
    fn union_rule_matches_brute_force(l1 in 0.5..20.0f64, l2 in 0.5..20.0f64, q in 1.0..3.0f64) {
        let rule = combine_union(&[l1, l2], q).unwrap();
        let brute = union_brute_force(l1, l2, q);
        prop_assert!((rule - brute).abs() <= 1e-9 * rule, "{rule} vs {brute}");
        prop_assert!(rule <= l1.min(l2) * (1.0 + 1e-12));
        if q >= 2.0 {
            prop_assert_eq!(rule, l1.min(l2));
        }
    }

    #[test]
    fn frequency_scales_with_dilation(poly in polygon(), q in 1.0..3.0f64, t in 0.25..4.0f64, per_diameter in 6.0..12.0f64) {
        let h = poly.diameter() / per_diameter;
        let base = GridFrame::around(&poly, h).unwrap();
        let scaled_poly = poly.scale(t);
        let scaled = GridFrame::around(&scaled_poly, t * h).unwrap();
        let a = solver::solve_on_frame(&poly, q, base, &quiet());
        let b = solver::solve_on_frame(&scaled_poly, q, scaled, &quiet());
        match (a, b) {
            (Ok((a, _)), Ok((b, _))) => {
                let predicted = a.lambda * t.powf(solver::scaling_exponent(q, 2));
                prop_assert!((b.lambda / predicted - 1.0).abs() <= 1e-9, "{} vs {predicted}", b.lambda);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "only one grid had unknowns: {:?} {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn frequency_is_monotone_under_inclusion(poly in polygon(), q in 1.0..3.0f64, s in 0.5..0.95f64, per_diameter in 8.0..14.0f64) {
        let frame = GridFrame::around(&poly, poly.diameter() / per_diameter).unwrap();
        let inner = poly.scale(s);
        let outer = solver::solve_on_frame(&poly, q, frame, &quiet());
        let inner = solver::solve_on_frame(&inner, q, frame, &quiet());
        if let (Ok((o, _)), Ok((i, _))) = (outer, inner) {
            prop_assert!(i.lambda >= o.lambda * (1.0 - 1e-9), "{} < {}", i.lambda, o.lambda);
        }
    }
}
