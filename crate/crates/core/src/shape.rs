//! Shape library: the JSON schema and the `Shape` sum type used by the solvers.
//!
//! ```json
//! {"type":"polygon","vertices":[[0,0],[1,0],[0,1]]}
//! {"type":"ball","dim":3,"radius":1.0}
//! {"type":"rect","L":16}
//! {"type":"union","parts":[{"type":"ball","dim":2,"radius":1,"center":[-2,0]}, ...]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BallShape, ConvexPolygon, Point};

/// Wire form of a shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ShapeSpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Ball {
        dim: usize,
        radius: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        center: Vec<f64>,
    },
    /// The slab `(−L/2, L/2) × (0, 1)`.
    Rect {
        #[serde(rename = "L")]
        length: f64,
    },
    Union {
        parts: Vec<ShapeSpec>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polygon(ConvexPolygon),
    Ball(BallShape),
    /// Pairwise disjoint parts, flattened (no nested unions).
    Union(Vec<Shape>),
}

impl TryFrom<&ShapeSpec> for Shape {
    type Error = Error;

    fn try_from(spec: &ShapeSpec) -> Result<Self> {
        match spec {
            ShapeSpec::Polygon { vertices } => Ok(Shape::Polygon(ConvexPolygon::new(
                vertices.iter().map(|v| Point::new(v[0], v[1])).collect(),
            )?)),
            ShapeSpec::Ball { dim, radius, center } => {
                Ok(Shape::Ball(BallShape::new(*dim, *radius, center.clone())?))
            }
            ShapeSpec::Rect { length } => {
                if !(*length > 0.0 && length.is_finite()) {
                    return Err(Error::InvalidShape(format!("slab length must be positive, got {length}")));
                }
                Ok(Shape::Polygon(ConvexPolygon::slab(*length)?))
            }
            ShapeSpec::Union { parts } => {
                let mut flat = Vec::new();
                for p in parts {
                    match Shape::try_from(p)? {
                        Shape::Union(inner) => flat.extend(inner),
                        s => flat.push(s),
                    }
                }
                Shape::union(flat)
            }
        }
    }
}

impl From<&Shape> for ShapeSpec {
    fn from(shape: &Shape) -> Self {
        match shape {
            Shape::Polygon(p) => ShapeSpec::Polygon {
                vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
            },
            Shape::Ball(b) => ShapeSpec::Ball {
                dim: b.dim,
                radius: b.radius,
                center: b.center.clone(),
            },
            Shape::Union(parts) => ShapeSpec::Union {
                parts: parts.iter().map(ShapeSpec::from).collect(),
            },
        }
    }
}

impl Shape {
    /// Builds a union after checking that the parts are pairwise disjoint.
    pub fn union(parts: Vec<Shape>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidShape("union needs at least one part".into()));
        }
        let dim = parts[0].dim();
        if parts.iter().any(|p| p.dim() != dim) {
            return Err(Error::InvalidShape("union parts have different dimensions".into()));
        }
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                if !disjoint(&parts[i], &parts[j]) {
                    return Err(Error::Overlapping(i, j));
                }
            }
        }
        Ok(Shape::Union(parts))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ShapeSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidShape(e.to_string()))?;
        Shape::try_from(&spec)
    }

    pub fn to_spec(&self) -> ShapeSpec {
        ShapeSpec::from(self)
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Polygon(_) => 2,
            Shape::Ball(b) => b.dim,
            Shape::Union(parts) => parts[0].dim(),
        }
    }

    pub fn measure(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.area(),
            Shape::Ball(b) => b.measure(),
            Shape::Union(parts) => parts.iter().map(Shape::measure).sum(),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.perimeter(),
            Shape::Ball(b) => b.perimeter(),
            Shape::Union(parts) => parts.iter().map(Shape::perimeter).sum(),
        }
    }

    pub fn inradius(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.inradius().radius,
            Shape::Ball(b) => b.radius,
            Shape::Union(parts) => parts.iter().map(Shape::inradius).fold(0.0, f64::max),
        }
    }

    /// Diameter for polygons and balls; for unions, the diameter of the union of
    /// the parts' enclosing balls.
    pub fn diameter(&self) -> f64 {
        match self {
            Shape::Polygon(p) => p.diameter(),
            Shape::Ball(b) => 2.0 * b.radius,
            Shape::Union(parts) => {
                let enc: Vec<(Vec<f64>, f64)> = parts.iter().map(enclosing_ball).collect();
                let mut d: f64 = 0.0;
                for (i, (ci, ri)) in enc.iter().enumerate() {
                    d = d.max(2.0 * ri);
                    for (cj, rj) in &enc[i + 1..] {
                        d = d.max(euclid(ci, cj) + ri + rj);
                    }
                }
                d
            }
        }
    }

    /// Convex shapes are single polygons and balls (or a union with one part).
    pub fn is_convex(&self) -> bool {
        match self {
            Shape::Union(parts) => parts.len() == 1 && parts[0].is_convex(),
            _ => true,
        }
    }

    /// Image under `x ↦ t x`.
    pub fn scale(&self, t: f64) -> Shape {
        match self {
            Shape::Polygon(p) => Shape::Polygon(p.scale(t)),
            Shape::Ball(b) => Shape::Ball(BallShape {
                dim: b.dim,
                radius: b.radius * t,
                center: b.center.iter().map(|c| c * t).collect(),
            }),
            Shape::Union(parts) => Shape::Union(parts.iter().map(|p| p.scale(t)).collect()),
        }
    }

    pub fn summary(&self) -> GeometrySummary {
        GeometrySummary {
            dim: self.dim(),
            measure: self.measure(),
            perimeter: self.perimeter(),
            inradius: self.inradius(),
            diameter: self.diameter(),
            convex: self.is_convex(),
        }
    }
}

/// Scalar geometry consumed by the inequality checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub dim: usize,
    pub measure: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub diameter: f64,
    pub convex: bool,
}

/// A shape with a stable identifier used in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedShape {
    pub id: String,
    pub shape: Shape,
}

impl NamedShape {
    pub fn new(id: impl Into<String>, shape: Shape) -> Self {
        Self { id: id.into(), shape }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn enclosing_ball(s: &Shape) -> (Vec<f64>, f64) {
    match s {
        Shape::Ball(b) => (b.center.clone(), b.radius),
        Shape::Polygon(p) => {
            let n = p.len() as f64;
            let c = p.vertices().iter().fold(Point::ORIGIN, |acc, v| acc + *v) * (1.0 / n);
            let r = p.vertices().iter().map(|v| (*v - c).norm()).fold(0.0, f64::max);
            (vec![c.x, c.y], r)
        }
        Shape::Union(_) => unreachable!("unions are flattened"),
    }
}

/// Distance from `c` to the closed polygon (0 if inside).
fn point_polygon_distance(p: &ConvexPolygon, c: Point) -> f64 {
    if p.contains(c) {
        return 0.0;
    }
    let v = p.vertices();
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            let e = b - a;
            let s = ((c - a).dot(e) / e.dot(e)).clamp(0.0, 1.0);
            (a + e * s - c).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Open sets are disjoint when their closures meet at most on the boundary.
fn disjoint(a: &Shape, b: &Shape) -> bool {
    let tol = 1e-12 * a.diameter().max(b.diameter());
    match (a, b) {
        (Shape::Ball(x), Shape::Ball(y)) => euclid(&x.center, &y.center) >= x.radius + y.radius - tol,
        (Shape::Ball(x), Shape::Polygon(p)) | (Shape::Polygon(p), Shape::Ball(x)) => {
            point_polygon_distance(p, Point::new(x.center[0], x.center[1])) >= x.radius - tol
        }
        (Shape::Polygon(p), Shape::Polygon(r)) => {
            // separating axis among the facet normals of either polygon
            let separated = |p: &ConvexPolygon, r: &ConvexPolygon| {
                p.halfplanes()
                    .iter()
                    .any(|h| r.vertices().iter().all(|v| h.normal.dot(*v) >= h.offset - tol))
            };
            separated(p, r) || separated(r, p)
        }
        _ => unreachable!("unions are flattened"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn parses_every_schema_variant() {
        let s = Shape::from_json(r#"{"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert_relative_eq!(s.measure(), 1.0);
        let b = Shape::from_json(r#"{"type":"ball","dim":3,"radius":2.0}"#).unwrap();
        assert_relative_eq!(b.measure(), 4.0 / 3.0 * PI * 8.0, epsilon = 1e-12);
        let r = Shape::from_json(r#"{"type":"rect","L":16}"#).unwrap();
        assert_relative_eq!(r.measure(), 16.0);
        assert_relative_eq!(r.inradius(), 0.5);
        let u = Shape::from_json(
            r#"{"type":"union","parts":[
                {"type":"ball","dim":2,"radius":1,"center":[-2,0]},
                {"type":"ball","dim":2,"radius":1,"center":[2,0]}]}"#,
        )
        .unwrap();
        assert_relative_eq!(u.measure(), 2.0 * PI, epsilon = 1e-14);
        assert!(!u.is_convex());
        assert_relative_eq!(u.inradius(), 1.0);
        assert_relative_eq!(u.diameter(), 6.0);
    }

    #[test]
    fn rejects_overlapping_unions_and_bad_input() {
        let overlap = Shape::from_json(
            r#"{"type":"union","parts":[{"type":"ball","dim":2,"radius":1},{"type":"ball","dim":2,"radius":1,"center":[1,0]}]}"#,
        );
        assert!(matches!(overlap, Err(Error::Overlapping(0, 1))));
        let poly_overlap = Shape::from_json(
            r#"{"type":"union","parts":[{"type":"rect","L":2},{"type":"polygon","vertices":[[0.5,0.5],[3,0.5],[3,3]]}]}"#,
        );
        assert!(poly_overlap.is_err());
        let ball_poly = Shape::from_json(
            r#"{"type":"union","parts":[{"type":"rect","L":2},{"type":"ball","dim":2,"radius":1,"center":[0,3]}]}"#,
        );
        assert!(ball_poly.is_ok());
        assert!(Shape::from_json(r#"{"type":"rect","L":-1}"#).is_err());
        assert!(Shape::from_json(r#"{"type":"hexagon"}"#).is_err());
        let mixed = Shape::from_json(
            r#"{"type":"union","parts":[{"type":"ball","dim":3,"radius":1},{"type":"ball","dim":2,"radius":1,"center":[5,0]}]}"#,
        );
        assert!(mixed.is_err());
    }

    #[test]
    fn spec_round_trip() {
        let s = Shape::from_json(r#"{"type":"rect","L":4}"#).unwrap();
        let back = Shape::try_from(&s.to_spec()).unwrap();
        assert_eq!(back, s);
        let text = serde_json::to_string(&ShapeSpec::Rect { length: 2.0 }).unwrap();
        assert_eq!(text, r#"{"type":"rect","L":2.0}"#);
    }
}
