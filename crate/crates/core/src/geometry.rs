//! Exact geometry of planar convex polygons and analytic N-dimensional balls.
//!
//! A polygon is stored twice: as a counterclockwise vertex chain and as the
//! matching list of half-planes `⟨a_i, x⟩ < b_i` with unit outward normals.
//! Facet `i` is the edge from vertex `i` to vertex `i + 1`. Every quantity
//! below (distance function, gauge, boundary integrals, inner parallels) is
//! read off the half-plane list in closed form.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by construction and containment predicates.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Open half-plane `⟨normal, x⟩ < offset` with a unit outward normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl HalfPlane {
    /// `offset − ⟨normal, p⟩`: the Euclidean distance from `p` to the facet line,
    /// positive on the inner side.
    #[inline]
    pub fn slack(&self, p: Point) -> f64 {
        self.offset - self.normal.dot(p)
    }
}

/// Open bounded convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    halfplanes: Vec<HalfPlane>,
    diameter: f64,
}

impl ConvexPolygon {
    /// Builds a polygon from a vertex chain in either orientation.
    ///
    /// Near-duplicate vertices (closer than `1e-12 · diameter`) and collinear
    /// vertices are dropped; a reflex or self-winding chain is rejected.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        let diameter = point_set_diameter(&vertices);
        if diameter <= 0.0 {
            return Err(Error::TooFewVertices(1));
        }
        let merge = GEOM_TOL * diameter;

        let mut chain: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if chain.last().is_none_or(|q| (p - *q).norm() > merge) {
                chain.push(p);
            }
        }
        while chain.len() > 1 && (chain[0] - chain[chain.len() - 1]).norm() <= merge {
            chain.pop();
        }
        if chain.len() < 3 {
            return Err(Error::TooFewVertices(chain.len()));
        }

        if signed_area(&chain) < 0.0 {
            chain.reverse();
        }

        // Drop collinear vertices until every turn is strict.
        loop {
            let n = chain.len();
            if n < 3 {
                return Err(Error::TooFewVertices(n));
            }
            let flat = (0..n).find(|&i| {
                let e0 = chain[i] - chain[(i + n - 1) % n];
                let e1 = chain[(i + 1) % n] - chain[i];
                e0.cross(e1).abs() <= GEOM_TOL * e0.norm() * e1.norm() && e0.dot(e1) > 0.0
            });
            match flat {
                Some(i) => {
                    chain.remove(i);
                }
                None => break,
            }
        }

        let n = chain.len();
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = chain[i] - chain[(i + n - 1) % n];
            let e1 = chain[(i + 1) % n] - chain[i];
            let c = e0.cross(e1);
            if c <= GEOM_TOL * e0.norm() * e1.norm() {
                return Err(Error::ReflexVertex { index: i });
            }
            turning += c.atan2(e0.dot(e1));
        }
        let turns = turning / (2.0 * PI);
        if (turns - 1.0).abs() > 1e-6 {
            return Err(Error::SelfIntersecting { turns });
        }

        let halfplanes = (0..n)
            .map(|i| {
                let p = chain[i];
                let e = chain[(i + 1) % n] - p;
                let normal = Point::new(e.y, -e.x) * (1.0 / e.norm());
                HalfPlane {
                    normal,
                    offset: normal.dot(p),
                }
            })
            .collect();

        Ok(Self {
            diameter: point_set_diameter(&chain),
            vertices: chain,
            halfplanes,
        })
    }

    /// Axis-aligned rectangle `(x0, x1) × (y0, y1)`.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    /// The slab `(−L/2, L/2) × (0, 1)`.
    pub fn slab(length: f64) -> Result<Self> {
        Self::rectangle(-0.5 * length, 0.5 * length, 0.0, 1.0)
    }

    /// Regular `m`-gon inscribed in the circle of radius `circumradius` about the origin,
    /// with a vertex on the positive x-axis.
    pub fn regular(m: usize, circumradius: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::TooFewVertices(m));
        }
        let pts = (0..m)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / m as f64;
                Point::new(circumradius * th.cos(), circumradius * th.sin())
            })
            .collect();
        Self::new(pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Edge lengths `ℓ_i`, indexed like the facets.
    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .collect()
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    /// `(min corner, max corner)` of the bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Smallest facet slack at `p`; positive iff `p` is interior.
    pub fn min_slack(&self, p: Point) -> f64 {
        self.halfplanes
            .iter()
            .map(|h| h.slack(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.min_slack(p) > 0.0
    }

    pub fn translate(&self, d: Point) -> Self {
        let halfplanes = self
            .halfplanes
            .iter()
            .map(|h| HalfPlane {
                normal: h.normal,
                offset: h.offset + h.normal.dot(d),
            })
            .collect();
        Self {
            vertices: self.vertices.iter().map(|&p| p + d).collect(),
            halfplanes,
            diameter: self.diameter,
        }
    }

    /// Homothety `x ↦ t x` about the origin, `t > 0`.
    pub fn scale(&self, t: f64) -> Self {
        assert!(t > 0.0, "scale factor must be positive");
        Self {
            vertices: self.vertices.iter().map(|&p| p * t).collect(),
            halfplanes: self
                .halfplanes
                .iter()
                .map(|h| HalfPlane {
                    normal: h.normal,
                    offset: h.offset * t,
                })
                .collect(),
            diameter: self.diameter * t,
        }
    }

    /// Largest inscribed disk, by enumerating facet triples as the active set of
    /// `max r s.t. ⟨a_i, x⟩ + r ≤ b_i`.
    ///
    /// Among optimal centers the lexicographically smallest one is returned.
    pub fn inradius(&self) -> InradiusResult {
        let hp = &self.halfplanes;
        let m = hp.len();
        let scale = self.diameter.max(
            hp.iter()
                .map(|h| h.offset.abs())
                .fold(0.0_f64, f64::max),
        );
        let feas_tol = GEOM_TOL * scale;
        let tie_tol = 1e-10 * scale;

        let mut best: Option<(f64, Point)> = None;
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let Some((c, r)) = tangent_circle(&hp[i], &hp[j], &hp[k]) else {
                        continue;
                    };
                    if r <= 0.0 {
                        continue;
                    }
                    if let Some((br, bc)) = best {
                        if r < br - tie_tol {
                            continue;
                        }
                        let tie = (r - br).abs() <= tie_tol;
                        if tie && !lex_less(c, bc, tie_tol) {
                            continue;
                        }
                    }
                    if hp.iter().all(|h| h.normal.dot(c) + r <= h.offset + feas_tol) {
                        best = match best {
                            Some((br, _)) if (r - br).abs() <= tie_tol => Some((br.max(r), c)),
                            _ => Some((r, c)),
                        };
                    }
                }
            }
        }
        let (radius, center) = best.expect("a bounded convex polygon has a Chebyshev center");
        // Snap the reported radius to the actual clearance of the chosen center.
        let radius = self.min_slack(center).min(radius);
        InradiusResult { radius, center }
    }

    /// `d_Ω(x) = min_i (b_i − ⟨a_i, x⟩)`, valid on the closure of a convex polygon.
    pub fn distance_to_boundary(&self, x: Point) -> Result<f64> {
        let s = self.min_slack(x);
        if s < -GEOM_TOL * self.diameter.max(x.norm()) {
            return Err(Error::OutOfDomain {
                x: x.x,
                y: x.y,
                slack: s,
            });
        }
        Ok(s.max(0.0))
    }

    fn require_origin_interior(&self) -> Result<()> {
        for (i, h) in self.halfplanes.iter().enumerate() {
            if h.offset <= 0.0 {
                return Err(Error::OriginNotInterior {
                    facet: i,
                    offset: h.offset,
                });
            }
        }
        Ok(())
    }

    /// Minkowski functional `j_Ω(x) = max_i ⟨a_i, x⟩ / b_i` and the gradient of the
    /// active facet. The origin must be interior.
    pub fn minkowski_gauge(&self, x: Point) -> Result<Gauge> {
        self.require_origin_interior()?;
        let mut facet = 0;
        let mut value = f64::NEG_INFINITY;
        for (i, h) in self.halfplanes.iter().enumerate() {
            let r = h.normal.dot(x) / h.offset;
            if r > value {
                value = r;
                facet = i;
            }
        }
        let tol = GEOM_TOL * value.abs();
        let tie = self
            .halfplanes
            .iter()
            .enumerate()
            .any(|(i, h)| i != facet && (h.normal.dot(x) / h.offset - value).abs() <= tol);
        if tie {
            // smallest index among the maximizers
            facet = self
                .halfplanes
                .iter()
                .position(|h| (h.normal.dot(x) / h.offset - value).abs() <= tol)
                .unwrap_or(facet);
        }
        let h = self.halfplanes[facet];
        Ok(Gauge {
            value,
            gradient: h.normal * (1.0 / h.offset),
            facet,
            tie,
        })
    }

    /// Translated copy with the Chebyshev center at the origin.
    pub fn center_at_chebyshev(&self) -> Self {
        let c = self.inradius().center;
        if c.norm() <= GEOM_TOL * self.diameter {
            return self.clone();
        }
        self.translate(-c)
    }

    /// Exact boundary integrals of `⟨x, ν⟩` and `⟨x, ν⟩⁻¹`; on facet `i` the support
    /// value is the constant `b_i`.
    pub fn boundary_integrals(&self) -> Result<BoundaryIntegrals> {
        self.require_origin_interior()?;
        let (mut plus, mut minus) = (0.0, 0.0);
        for (h, l) in self.halfplanes.iter().zip(self.edge_lengths()) {
            plus += h.offset * l;
            minus += l / h.offset;
        }
        Ok(BoundaryIntegrals { plus, minus })
    }

    /// Compares every facet offset with the inradius. Meant for Chebyshev-centered
    /// polygons, where `min_i b_i ≥ R_Ω` must hold.
    pub fn normal_product_check(&self) -> NormalProductCheck {
        let inradius = self.inradius().radius;
        let min_offset = self
            .halfplanes
            .iter()
            .map(|h| h.offset)
            .fold(f64::INFINITY, f64::min);
        let scale = self.diameter.max(1.0);
        let tangent_edges: Vec<usize> = self
            .halfplanes
            .iter()
            .enumerate()
            .filter(|(_, h)| (h.offset - inradius).abs() <= 1e-9 * scale)
            .map(|(i, _)| i)
            .collect();
        NormalProductCheck {
            min_offset,
            inradius,
            holds: min_offset >= inradius - GEOM_TOL * scale,
            circumscribes_inball: tangent_edges.len() == self.len(),
            tangent_edges,
        }
    }

    /// Inner parallel body `{x ∈ Ω : d_Ω(x) > t}`: every facet moved inward by `t`.
    pub fn inner_parallel(&self, t: f64) -> InnerParallelBody {
        assert!(t >= 0.0, "offset must be nonnegative");
        if t == 0.0 {
            return InnerParallelBody {
                offset: t,
                polygon: Some(self.clone()),
            };
        }
        let r = self.inradius().radius;
        if t >= r * (1.0 - 1e-9) {
            return InnerParallelBody {
                offset: t,
                polygon: None,
            };
        }
        let mut pts = self.vertices.clone();
        for h in &self.halfplanes {
            pts = clip(&pts, h.normal, h.offset - t);
            if pts.len() < 3 {
                return InnerParallelBody {
                    offset: t,
                    polygon: None,
                };
            }
        }
        InnerParallelBody {
            offset: t,
            polygon: ConvexPolygon::new(pts).ok(),
        }
    }
}

/// Circle tangent to three facet lines from the inside: solves
/// `⟨a, c⟩ + r = b` for the three facets.
fn tangent_circle(h1: &HalfPlane, h2: &HalfPlane, h3: &HalfPlane) -> Option<(Point, f64)> {
    let m = [
        [h1.normal.x, h1.normal.y, 1.0],
        [h2.normal.x, h2.normal.y, 1.0],
        [h3.normal.x, h3.normal.y, 1.0],
    ];
    let rhs = [h1.offset, h2.offset, h3.offset];
    let det = det3(&m);
    if det.abs() < 1e-14 {
        return None;
    }
    let mut sol = [0.0; 3];
    for (col, s) in sol.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *s = det3(&mc) / det;
    }
    Some((Point::new(sol[0], sol[1]), sol[2]))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn lex_less(a: Point, b: Point, tol: f64) -> bool {
    if a.x < b.x - tol {
        true
    } else if a.x > b.x + tol {
        false
    } else {
        a.y < b.y - tol
    }
}

/// Sutherland–Hodgman step against `⟨n, x⟩ ≤ c`.
fn clip(pts: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(pts.len() + 1);
    let k = pts.len();
    for i in 0..k {
        let p = pts[i];
        let q = pts[(i + 1) % k];
        let sp = c - n.dot(p);
        let sq = c - n.dot(q);
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let s = sp / (sp - sq);
            out.push(p + (q - p) * s);
        }
    }
    out
}

fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum::<f64>()
}

fn point_set_diameter(pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d = d.max((*p - *q).norm());
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InradiusResult {
    pub radius: f64,
    pub center: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gauge {
    pub value: f64,
    pub gradient: Point,
    /// Facet whose ratio attains the maximum (smallest index on ties).
    pub facet: usize,
    /// Set when `x` lies on a cone boundary between two facets.
    pub tie: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryIntegrals {
    /// `∫_{∂Ω} ⟨x, ν⟩ = Σ b_i ℓ_i`
    pub plus: f64,
    /// `∫_{∂Ω} ⟨x, ν⟩⁻¹ = Σ ℓ_i / b_i`
    pub minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalProductCheck {
    pub min_offset: f64,
    pub inradius: f64,
    pub holds: bool,
    /// Every facet touches the inscribed disk.
    pub circumscribes_inball: bool,
    pub tangent_edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerParallelBody {
    pub offset: f64,
    /// `None` once the offset reaches the inradius.
    pub polygon: Option<ConvexPolygon>,
}

impl InnerParallelBody {
    pub fn perimeter(&self) -> f64 {
        self.polygon.as_ref().map_or(0.0, ConvexPolygon::perimeter)
    }

    pub fn area(&self) -> f64 {
        self.polygon.as_ref().map_or(0.0, ConvexPolygon::area)
    }
}

/// Volume `ω_N` of the unit ball in `ℝ^N`, from `π^{N/2} / Γ(N/2 + 1)` via the
/// recursion `ω_N = (2π / N) ω_{N−2}`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        n => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Open ball `B_R(x_0) ⊂ ℝ^N`, kept analytic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallShape {
    pub dim: usize,
    pub radius: f64,
    pub center: Vec<f64>,
}

impl BallShape {
    pub fn new(dim: usize, radius: f64, center: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidShape(format!("ball dimension must be >= 2, got {dim}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidShape(format!("ball radius must be positive, got {radius}")));
        }
        let center = if center.is_empty() { vec![0.0; dim] } else { center };
        if center.len() != dim {
            return Err(Error::InvalidShape(format!(
                "ball center has {} coordinates, expected {dim}",
                center.len()
            )));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, radius, center })
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(dim, 1.0, Vec::new()).expect("unit ball is valid")
    }

    pub fn measure(&self) -> f64 {
        unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32)
    }

    pub fn perimeter(&self) -> f64 {
        self.dim as f64 * unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32 - 1)
    }

    pub fn inradius(&self) -> f64 {
        self.radius
    }

    /// Inscribed regular `m`-gon approximation (planar balls only).
    pub fn polygonize(&self, m: usize) -> Result<ConvexPolygon> {
        if self.dim != 2 {
            return Err(Error::InvalidShape("only planar balls can be polygonized".into()));
        }
        Ok(ConvexPolygon::regular(m, self.radius)?
            .translate(Point::new(self.center[0], self.center[1])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    fn equilateral(side: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(side, 0.0),
            Point::new(0.5 * side, 0.5 * 3f64.sqrt() * side),
        ])
        .unwrap()
    }

    #[test]
    fn measures_and_perimeters() {
        assert_relative_eq!(unit_square().area(), 1.0);
        assert_relative_eq!(unit_square().perimeter(), 4.0);
        let tri = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        assert_relative_eq!(tri.area(), 2.0);
        assert_relative_eq!(BallShape::unit(2).measure(), PI, epsilon = 1e-15);
        assert_relative_eq!(BallShape::unit(2).perimeter(), 2.0 * PI, epsilon = 1e-15);
        assert_relative_eq!(BallShape::unit(3).measure(), 4.0 * PI / 3.0, epsilon = 1e-15);
        let r = ConvexPolygon::rectangle(0.0, 10.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(r.perimeter(), 22.0);
    }

    #[test]
    fn construction_normalizes_and_rejects() {
        // clockwise input, a duplicate and a collinear midpoint
        let p = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.5),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.area() > 0.0);
        for (i, v) in p.vertices().iter().enumerate() {
            let n = p.len();
            for (k, h) in p.halfplanes().iter().enumerate() {
                let s = h.slack(*v);
                if k == i || k == (i + n - 1) % n {
                    assert!(s.abs() < 1e-12);
                } else {
                    assert!(s > 0.0);
                }
            }
        }

        let reflex = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ]);
        assert!(matches!(reflex, Err(Error::ReflexVertex { .. })));

        let line = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        ]);
        assert!(matches!(line, Err(Error::TooFewVertices(_))));

        let pentagram: Vec<Point> = (0..5)
            .map(|k| {
                let th = 4.0 * PI * k as f64 / 5.0;
                Point::new(th.cos(), th.sin())
            })
            .collect();
        assert!(ConvexPolygon::new(pentagram).is_err());
    }

    #[test]
    fn inradius_examples() {
        let sq = unit_square().inradius();
        assert_relative_eq!(sq.radius, 0.5, epsilon = 1e-15);
        assert_relative_eq!(sq.center.x, 0.5, epsilon = 1e-15);
        assert_relative_eq!(sq.center.y, 0.5, epsilon = 1e-15);

        for l in [2.0, 4.0, 16.0] {
            let slab = ConvexPolygon::slab(l).unwrap().inradius();
            assert_relative_eq!(slab.radius, 0.5, epsilon = 1e-14);
            // lexicographically smallest optimal center sits at the left end
            assert_relative_eq!(slab.center.x, -0.5 * l + 0.5, epsilon = 1e-12);
        }

        // brute-force grid maximization of d_Ω, frozen: 0.28867513459481287
        let tri = equilateral(1.0).inradius();
        assert_relative_eq!(tri.radius, 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-14);
        assert_relative_eq!(tri.radius, 0.288_675_134_594_812_87, epsilon = 1e-14);
    }

    #[test]
    fn inradius_matches_brute_force_maximization() {
        let tri = equilateral(1.0);
        let n = 600;
        let mut best: f64 = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let p = Point::new(i as f64 / n as f64, j as f64 / n as f64 * 0.9);
                if let Ok(d) = tri.distance_to_boundary(p) {
                    best = best.max(d);
                }
            }
        }
        assert!((best - tri.inradius().radius).abs() < 2e-3);
        assert!(best <= tri.inradius().radius + 1e-14);
    }

    #[test]
    fn distance_examples() {
        let sq = unit_square();
        assert_relative_eq!(sq.distance_to_boundary(Point::new(0.5, 0.5)).unwrap(), 0.5);
        assert_eq!(sq.distance_to_boundary(Point::new(0.5, 0.0)).unwrap(), 0.0);
        assert_relative_eq!(sq.distance_to_boundary(Point::new(0.25, 0.5)).unwrap(), 0.25);
        assert!(matches!(
            sq.distance_to_boundary(Point::new(1.5, 0.5)),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn distance_matches_dense_boundary_sampling() {
        let sq = unit_square();
        let x = Point::new(0.25, 0.5);
        let samples = 4000;
        let mut best = f64::INFINITY;
        for (i, v) in sq.vertices().iter().enumerate() {
            let w = sq.vertices()[(i + 1) % 4];
            for k in 0..=samples {
                let p = *v + (w - *v) * (k as f64 / samples as f64);
                best = best.min((p - x).norm());
            }
        }
        assert_relative_eq!(sq.distance_to_boundary(x).unwrap(), best, epsilon = 1e-12);
    }

    #[test]
    fn gauge_examples() {
        let sq = ConvexPolygon::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        let g = sq.minkowski_gauge(Point::new(0.5, -0.25)).unwrap();
        assert_relative_eq!(g.value, 0.5);
        assert!(!g.tie);
        let g1 = sq.minkowski_gauge(Point::new(0.3, 0.3)).unwrap();
        let g2 = sq.minkowski_gauge(Point::new(0.6, 0.6)).unwrap();
        assert_relative_eq!(g2.value, 2.0 * g1.value);
        assert!(g1.tie);
        // smallest index among tied facets
        assert_eq!(g1.facet, sq
            .halfplanes()
            .iter()
            .position(|h| (h.normal.dot(Point::new(0.3, 0.3)) / h.offset - 0.3).abs() < 1e-15)
            .unwrap());
        for v in sq.vertices() {
            assert_relative_eq!(sq.minkowski_gauge(*v).unwrap().value, 1.0);
        }
        let off = ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            off.minkowski_gauge(Point::new(0.5, 0.5)),
            Err(Error::OriginNotInterior { .. })
        ));
    }

    #[test]
    fn centering_examples() {
        let c = unit_square().center_at_chebyshev();
        let (lo, hi) = c.bounding_box();
        assert_relative_eq!(lo.x, -0.5);
        assert_relative_eq!(lo.y, -0.5);
        assert_relative_eq!(hi.x, 0.5);
        assert_relative_eq!(hi.y, 0.5);

        let hex = ConvexPolygon::regular(6, 1.0).unwrap();
        assert_eq!(hex.center_at_chebyshev().vertices(), hex.vertices());

        // incenter of (0,0),(3,0),(0,3): r = 3 − 3/√2
        let tri = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(0.0, 3.0),
        ])
        .unwrap();
        let r = 3.0 - 3.0 / 2f64.sqrt();
        let c = tri.center_at_chebyshev();
        assert_relative_eq!(c.vertices()[0].x, -r, epsilon = 1e-14);
        assert_relative_eq!(c.vertices()[0].y, -r, epsilon = 1e-14);
        for h in c.halfplanes() {
            assert!(h.offset >= r - 1e-14);
        }
    }

    #[test]
    fn boundary_integral_examples() {
        let sq = ConvexPolygon::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        let bi = sq.boundary_integrals().unwrap();
        assert_relative_eq!(bi.plus, 8.0);
        assert_relative_eq!(bi.minus, 8.0);
        assert_relative_eq!(bi.plus, 2.0 * sq.area());

        let disk = BallShape::new(2, 1.7, vec![]).unwrap().polygonize(256).unwrap();
        let bi = disk.boundary_integrals().unwrap();
        let r: f64 = 1.7;
        assert!((bi.plus / (2.0 * PI * r * r) - 1.0).abs() < 1e-3);
        assert!((bi.minus / (2.0 * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn normal_product_examples() {
        let sq = ConvexPolygon::rectangle(-0.5, 0.5, -0.5, 0.5).unwrap();
        let c = sq.normal_product_check();
        assert_relative_eq!(c.min_offset, 0.5);
        assert!(c.holds && c.circumscribes_inball);

        let rect = ConvexPolygon::rectangle(-1.0, 1.0, -0.5, 0.5).unwrap();
        let c = rect.normal_product_check();
        assert_relative_eq!(c.min_offset, 0.5, epsilon = 1e-14);
        assert!(c.holds);
        assert!(!c.circumscribes_inball);
        assert_eq!(c.tangent_edges.len(), 2);

        let hex = ConvexPolygon::regular(6, 1.0).unwrap();
        let c = hex.normal_product_check();
        assert_relative_eq!(c.min_offset, 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_relative_eq!(c.inradius, 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert!(c.circumscribes_inball);
    }

    #[test]
    fn inner_parallel_examples() {
        let sq = unit_square();
        let ip = sq.inner_parallel(0.25);
        assert_relative_eq!(ip.perimeter(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(ip.area(), 0.25, epsilon = 1e-14);
        assert_eq!(sq.inner_parallel(0.0).polygon.as_ref(), Some(&sq));
        assert!(sq.inner_parallel(0.5).polygon.is_none());
        assert!(sq.inner_parallel(0.7).polygon.is_none());

        // homothety about the incenter with ratio 1/2
        let tri = equilateral(1.0);
        let inr = tri.inradius();
        let half = tri.inner_parallel(0.5 * inr.radius).polygon.unwrap();
        assert_relative_eq!(half.perimeter(), 1.5, epsilon = 1e-13);
        for v in half.vertices() {
            let scaled = inr.center + (*v - inr.center) * 2.0;
            assert!(tri.vertices().iter().any(|w| (*w - scaled).norm() < 1e-12));
        }
    }

    #[test]
    fn ball_validation() {
        assert!(BallShape::new(1, 1.0, vec![]).is_err());
        assert!(BallShape::new(2, 0.0, vec![]).is_err());
        assert!(BallShape::new(2, 1.0, vec![0.0]).is_err());
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, epsilon = 1e-15);
    }
}
