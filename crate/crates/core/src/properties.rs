//! Seeded randomized checks of the structural invariants, summarized per property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::random_polygon;
use crate::geometry::{ConvexPolygon, Point};
use crate::onedim::chebyshev_like_check;
use crate::solver::{self, combine_union, GridFrame, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySummary {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest defect seen, in the property's own units.
    pub max_defect: f64,
    pub tolerance: f64,
}

impl PropertySummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    failures: usize,
    max_defect: f64,
    tolerance: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            trials: 0,
            failures: 0,
            max_defect: 0.0,
            tolerance,
        }
    }

    /// Records a defect; positive beyond the tolerance counts as a failure.
    fn record(&mut self, defect: f64) {
        self.trials += 1;
        if defect.is_nan() || defect > self.tolerance {
            self.failures += 1;
        }
        if defect.is_nan() || defect > self.max_defect {
            self.max_defect = defect;
        }
    }

    fn finish(self) -> PropertySummary {
        PropertySummary {
            name: self.name.to_string(),
            trials: self.trials,
            failures: self.failures,
            max_defect: self.max_defect,
            tolerance: self.tolerance,
        }
    }
}

/// Random convex combination of the vertices, strictly inside the polygon.
pub fn random_interior_point(poly: &ConvexPolygon, rng: &mut impl Rng) -> Point {
    let v = poly.vertices();
    let w: Vec<f64> = v.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    v.iter().zip(&w).fold(Point::ORIGIN, |acc, (p, wi)| acc + *p * (wi / s))
}

/// Brute-force union rule: `min (a₁ s₁² + a₂ s₂²)/(s₁^q + s₂^q)^{2/q}` over the
/// quarter circle, by a grid scan refined with golden-section search.
pub fn union_brute_force(a1: f64, a2: f64, q: f64) -> f64 {
    let f = |th: f64| {
        let (s1, s2) = (th.cos(), th.sin());
        (a1 * s1 * s1 + a2 * s2 * s2) / (s1.powf(q) + s2.powf(q)).powf(2.0 / q)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let n = 400;
    let (mut best, mut arg) = (f64::INFINITY, 0.0);
    for k in 0..=n {
        let th = half_pi * k as f64 / n as f64;
        let v = f(th);
        if v < best {
            best = v;
            arg = th;
        }
    }
    let step = half_pi / n as f64;
    let (mut lo, mut hi) = ((arg - step).max(0.0), (arg + step).min(half_pi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.min(f(0.5 * (lo + hi))).min(f(0.0)).min(f(half_pi))
}

/// Runs every property with `trials` random cases each, seeded by `seed`.
pub fn run_properties(seed: u64, trials: usize) -> Result<Vec<PropertySummary>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauge = Tally::new("gauge homogeneity", 1e-12);
    let mut divergence = Tally::new("divergence identity", 1e-12);
    let mut normal = Tally::new("normal-product bound", 1e-12);
    let mut chebyshev = Tally::new("monotone Chebyshev-type inequality", 1e-9);
    let mut concave = Tally::new("distance concavity", 1e-12);
    let mut superharmonic = Tally::new("discrete superharmonicity of the distance", 1e-9);
    let mut union = Tally::new("union rule vs brute force", 1e-9);
    let mut scaling = Tally::new("scaling covariance", 1e-9);

    for _ in 0..trials {
        let poly = random_polygon(&mut rng)?.center_at_chebyshev();
        let scale = poly.diameter();

        let x = random_interior_point(&poly, &mut rng);
        let t = rng.gen_range(0.1..10.0);
        let j = poly.minkowski_gauge(x)?.value;
        let jt = poly.minkowski_gauge(x * t)?.value;
        gauge.record((jt - t * j).abs() / (t * j).max(f64::MIN_POSITIVE));

        let bi = poly.boundary_integrals()?;
        divergence.record((bi.plus / (2.0 * poly.area()) - 1.0).abs());

        let np = poly.normal_product_check();
        normal.record((np.inradius - np.min_offset) / scale);

        let n = rng.gen_range(4..64);
        let a = rng.gen_range(0.1..5.0);
        let h = a / n as f64;
        // ξ from cumulative sums of a nondecreasing slope sequence, ψ sorted descending
        let mut slopes: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        slopes.sort_by(f64::total_cmp);
        let mut xi = vec![0.0];
        for s in &slopes {
            xi.push(xi.last().unwrap() + s * h);
        }
        let mut psi: Vec<f64> = (0..=n).map(|_| rng.gen::<f64>()).collect();
        psi.sort_by(|p, q| q.total_cmp(p));
        let c = chebyshev_like_check(&xi, &psi, a)?;
        chebyshev.record(c.lhs - c.rhs);

        let y = random_interior_point(&poly, &mut rng);
        let s = rng.gen::<f64>();
        let mid = x * s + y * (1.0 - s);
        let d = |p: Point| poly.min_slack(p);
        concave.record((s * d(x) + (1.0 - s) * d(y) - d(mid)) / scale);

        let hs = scale / rng.gen_range(8.0..40.0);
        let frame = GridFrame::around(&poly, hs)?;
        let field = solver::distance_field(&poly, frame);
        let fh = frame.spacing();
        if let Some(l) = field.max_interior_laplacian() {
            superharmonic.record(l * fh * fh);
        }

        let q = rng.gen_range(1.0..3.0);
        let (l1, l2) = (rng.gen_range(0.5..20.0), rng.gen_range(0.5..20.0));
        let rule = combine_union(&[l1, l2], q)?;
        union.record((rule - union_brute_force(l1, l2, q)).abs() / rule);
    }

    // the covariance check solves two small grid problems per trial
    let cfg = SolverConfig {
        estimate_error: false,
        ..SolverConfig::default()
    };
    for _ in 0..trials {
        let poly = random_polygon(&mut rng)?;
        let q = rng.gen_range(1.0..3.0);
        let t = rng.gen_range(0.25..4.0);
        let h = poly.diameter() / rng.gen_range(6.0..12.0);
        let base = GridFrame::around(&poly, h)?;
        let scaled_poly = poly.scale(t);
        let scaled = GridFrame::around(&scaled_poly, t * h)?;
        let (a, b) = match (
            solver::solve_on_frame(&poly, q, base, &cfg),
            solver::solve_on_frame(&scaled_poly, q, scaled, &cfg),
        ) {
            (Ok((a, _)), Ok((b, _))) => (a.lambda, b.lambda),
            // no interior node at this spacing: nothing to compare
            (Err(_), Err(_)) => continue,
            _ => {
                scaling.record(f64::INFINITY);
                continue;
            }
        };
        let predicted = a * t.powf(solver::scaling_exponent(q, 2));
        scaling.record((b / predicted - 1.0).abs());
    }

    Ok(vec![
        gauge.finish(),
        divergence.finish(),
        normal.finish(),
        chebyshev.finish(),
        concave.finish(),
        superharmonic.finish(),
        union.finish(),
        scaling.finish(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_properties_hold_on_a_small_sample() {
        let s = run_properties(7, 50).unwrap();
        assert_eq!(s.len(), 8);
        for p in &s {
            assert!(p.passed(), "{p:?}");
            assert!(p.trials > 0, "{p:?}");
        }
    }

    #[test]
    fn brute_force_matches_closed_cases() {
        assert!((union_brute_force(3.0, 3.0, 1.0) - 1.5).abs() < 1e-9);
        assert!((union_brute_force(3.0, 5.0, 2.0) - 3.0).abs() < 1e-9);
    }
}
