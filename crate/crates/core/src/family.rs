//! Reproducible shape families from short text descriptors.
//!
//! A descriptor is a `;`-separated list of items:
//!
//! * `default`: disk, square, hexagon, three random hulls, slabs 2, 4, 8, 16
//!   and a union of two disjoint disks;
//! * `slabs:2,4,8`: rectangles `(−L/2, L/2) × (0, 1)`;
//! * `regular:8,16,32`: regular polygons of unit circumradius;
//! * `random:3 seed:42`: convex hulls of seeded point clouds (`seed:` optional);
//! * `disk`, `square`, `hexagon`, `union`: the single named shapes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{BallShape, ConvexPolygon, Point};
use crate::shape::{NamedShape, Shape};

/// Points per random hull.
pub const RANDOM_POINTS: usize = 10;
pub const DEFAULT_SEED: u64 = 42;

/// Counterclockwise convex hull (monotone chain), collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Convex hull of `RANDOM_POINTS` uniform points in the unit square.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> Result<ConvexPolygon> {
    let pts: Vec<Point> = (0..RANDOM_POINTS)
        .map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    let hull = convex_hull(&pts);
    if hull.len() < 3 {
        return Err(Error::TooFewVertices(hull.len()));
    }
    ConvexPolygon::new(hull)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidInput(format!("bad {what} {s:?}")))
        })
        .collect()
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn two_disks() -> Shape {
    let a = Shape::Ball(BallShape::new(2, 1.0, vec![-1.5, 0.0]).expect("valid disk"));
    let b = Shape::Ball(BallShape::new(2, 1.0, vec![1.5, 0.0]).expect("valid disk"));
    Shape::union(vec![a, b]).expect("disjoint disks")
}

fn named(name: &str) -> Option<NamedShape> {
    let s = match name {
        "disk" => Shape::Ball(BallShape::unit(2)),
        "square" => Shape::Polygon(ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).ok()?),
        "hexagon" => Shape::Polygon(ConvexPolygon::regular(6, 1.0).ok()?),
        "union" => two_disks(),
        _ => return None,
    };
    let id = if name == "union" { "union-2disks" } else { name };
    Some(NamedShape::new(id, s))
}

fn random_family(count: usize, seed: u64) -> Result<Vec<NamedShape>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            Ok(NamedShape::new(format!("random-{seed}-{i}"), Shape::Polygon(random_polygon(&mut rng)?)))
        })
        .collect()
}

/// Expands a descriptor into named shapes; `seed` applies to random items without their own seed.
pub fn generate_family(descriptor: &str, seed: u64) -> Result<Vec<NamedShape>> {
    let mut out = Vec::new();
    for item in descriptor.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "default" {
            for n in ["disk", "square", "hexagon"] {
                out.extend(named(n));
            }
            out.extend(random_family(3, seed)?);
            out.extend(generate_family("slabs:2,4,8,16", seed)?);
            out.extend(named("union"));
        } else if let Some(rest) = item.strip_prefix("slabs:") {
            for l in parse_list::<f64>(rest, "slab length")? {
                out.push(NamedShape::new(format!("slab-{}", fmt_num(l)), Shape::Polygon(ConvexPolygon::slab(l)?)));
            }
        } else if let Some(rest) = item.strip_prefix("regular:") {
            for m in parse_list::<usize>(rest, "vertex count")? {
                out.push(NamedShape::new(format!("regular-{m}"), Shape::Polygon(ConvexPolygon::regular(m, 1.0)?)));
            }
        } else if let Some(rest) = item.strip_prefix("random:") {
            let mut words = rest.split_whitespace();
            let count: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad random count in {item:?}")))?;
            let mut s = seed;
            for w in words {
                let v = w
                    .strip_prefix("seed:")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("unexpected {w:?} in {item:?}")))?;
                s = v;
            }
            out.extend(random_family(count, s)?);
        } else if let Some(n) = named(item) {
            out.push(n);
        } else {
            return Err(Error::InvalidInput(format!("unknown family item {item:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slabs_have_half_inradius() {
        let f = generate_family("slabs:2,4,8", 0).unwrap();
        assert_eq!(f.len(), 3);
        for s in &f {
            assert!((s.shape.inradius() - 0.5).abs() < 1e-12);
        }
        assert_eq!(f[2].id, "slab-8");
    }

    #[test]
    fn regular_polygons() {
        let f = generate_family("regular:8,16,32", 0).unwrap();
        let ids: Vec<_> = f.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["regular-8", "regular-16", "regular-32"]);
        for s in &f {
            let Shape::Polygon(p) = &s.shape else { panic!() };
            assert!(p.vertices().iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn random_hulls_are_reproducible() {
        let a = generate_family("random:3 seed:42", 7).unwrap();
        let b = generate_family("random:3 seed:42", 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        let c = generate_family("random:3 seed:43", 7).unwrap();
        assert_ne!(a[0], c[0]);
    }

    #[test]
    fn default_family_layout() {
        let f = generate_family("default", DEFAULT_SEED).unwrap();
        assert_eq!(f.len(), 11);
        assert_eq!(f[0].id, "disk");
        assert_eq!(f.last().unwrap().id, "union-2disks");
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.5),
        ];
        assert_eq!(convex_hull(&pts).len(), 4);
        assert!(convex_hull(&pts[..2]).len() < 3);
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(generate_family("slabs:x", 0).is_err());
        assert!(generate_family("pentagon", 0).is_err());
        assert!(generate_family("random:2 salt:3", 0).is_err());
        assert!(generate_family("", 0).unwrap().is_empty());
    }
}
