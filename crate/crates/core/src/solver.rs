//! Generalized principal frequencies `λ_{2,q}` of planar shapes.
//!
//! Polygons are discretized on a uniform node grid. Nodes strictly inside the
//! polygon are unknowns; every other node carries the Dirichlet value zero.
//! The energy is the sum over grid edges of `c (u_a − u_b)²` with
//! `c = h_y/h_x` on horizontal and `h_x/h_y` on vertical edges. An edge that
//! leaves the domain is shortened to the exact boundary crossing at fraction
//! `θ` of the step, which turns its weight into `c/θ`. The resulting matrix is
//! a symmetric M-matrix and the scheme is second order for smooth solutions.
//!
//! Balls of any dimension go through the radial solver and are scaled;
//! disjoint unions combine the frequencies of their parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BallShape, ConvexPolygon, Point};
use crate::onedim::{self, DEFAULT_RADIAL_NODES};
use crate::rayleigh::{self, EnergyOperator, IterationOptions};
use crate::shape::Shape;

const NONE: u32 = u32::MAX;
/// Smallest admissible boundary fraction of a cut edge.
const MIN_THETA: f64 = 1e-3;

/// Uniform node lattice `origin + (i h_x, j h_y)`, `0 ≤ i ≤ nx`, `0 ≤ j ≤ ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridFrame {
    pub origin: Point,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridFrame {
    /// Smallest lattice with spacing at most `h` whose corner nodes are `lo` and `hi`.
    pub fn fit(lo: Point, hi: Point, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!("grid spacing must be positive, got {h}")));
        }
        let (w, t) = (hi.x - lo.x, hi.y - lo.y);
        if !(w > 0.0 && t > 0.0) {
            return Err(Error::InvalidInput("degenerate bounding box".into()));
        }
        let nx = ((w / h) - 1e-9).ceil().max(1.0) as usize;
        let ny = ((t / h) - 1e-9).ceil().max(1.0) as usize;
        Ok(Self {
            origin: lo,
            hx: w / nx as f64,
            hy: t / ny as f64,
            nx,
            ny,
        })
    }

    /// Frame fitted to the bounding box of `poly`.
    pub fn around(poly: &ConvexPolygon, h: f64) -> Result<Self> {
        let (lo, hi) = poly.bounding_box();
        Self::fit(lo, hi, h)
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + i as f64 * self.hx,
            self.origin.y + j as f64 * self.hy,
        )
    }

    pub fn nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    /// The larger of the two spacings.
    pub fn spacing(&self) -> f64 {
        self.hx.max(self.hy)
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    fn flat(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }
}

/// Values on every node of a frame, with the mask of interior nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField {
    pub frame: GridFrame,
    /// Row-major over `j`, then `i`.
    pub interior: Vec<bool>,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.frame.flat(i, j)]
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.interior[self.frame.flat(i, j)]
    }

    /// Five-point Laplacian at node `(i, j)`; `None` on the frame border.
    pub fn laplacian(&self, i: usize, j: usize) -> Option<f64> {
        let f = &self.frame;
        if i == 0 || j == 0 || i >= f.nx || j >= f.ny {
            return None;
        }
        let c = self.value(i, j);
        let dxx = (self.value(i - 1, j) - 2.0 * c + self.value(i + 1, j)) / (f.hx * f.hx);
        let dyy = (self.value(i, j - 1) - 2.0 * c + self.value(i, j + 1)) / (f.hy * f.hy);
        Some(dxx + dyy)
    }

    /// Largest five-point Laplacian over interior nodes away from the frame border.
    pub fn max_interior_laplacian(&self) -> Option<f64> {
        let f = &self.frame;
        let mut best: Option<f64> = None;
        for j in 0..=f.ny {
            for i in 0..=f.nx {
                if !self.is_interior(i, j) {
                    continue;
                }
                if let Some(l) = self.laplacian(i, j) {
                    best = Some(best.map_or(l, |b| b.max(l)));
                }
            }
        }
        best
    }

    /// `(Σ m |u|^q)^{1/q}` over interior nodes with the cell-area mass.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let m = self.frame.cell_area();
        let s: f64 = self
            .values
            .iter()
            .zip(&self.interior)
            .filter(|(_, &inside)| inside)
            .map(|(v, _)| m * v.abs().powf(q))
            .sum();
        s.powf(1.0 / q)
    }
}

fn interior_threshold(frame: &GridFrame) -> f64 {
    1e-9 * frame.hx.min(frame.hy)
}

fn interior_mask(poly: &ConvexPolygon, frame: &GridFrame) -> Vec<bool> {
    let tol = interior_threshold(frame);
    let mut mask = Vec::with_capacity(frame.nodes());
    for j in 0..=frame.ny {
        for i in 0..=frame.nx {
            mask.push(poly.min_slack(frame.node(i, j)) > tol);
        }
    }
    mask
}

/// Signed distance `min_i (b_i − ⟨a_i, x⟩)` sampled on every node of `frame`.
///
/// Inside the polygon this is `d_Ω`; outside it continues as the same concave
/// function, so finite differences near the boundary stay meaningful.
pub fn distance_field(poly: &ConvexPolygon, frame: GridFrame) -> GridField {
    let interior = interior_mask(poly, &frame);
    let mut values = Vec::with_capacity(frame.nodes());
    for j in 0..=frame.ny {
        for i in 0..=frame.nx {
            values.push(poly.min_slack(frame.node(i, j)));
        }
    }
    GridField {
        frame,
        interior,
        values,
    }
}

/// Five-point stiffness on the interior nodes of a polygon, with an
/// incomplete-Cholesky preconditioned conjugate-gradient solver.
pub(crate) struct GridOperator {
    frame: GridFrame,
    /// Unknown index of each frame node, `NONE` outside.
    index: Vec<u32>,
    /// Neighbours west, east, south, north; `NONE` when absent.
    nbr: Vec<[u32; 4]>,
    diag: Vec<f64>,
    cx: f64,
    cy: f64,
    mass: Vec<f64>,
    /// Pivots of the `(D + L) D⁻¹ (D + U)` factorization.
    pivots: Vec<f64>,
    rtol: f64,
}

impl GridOperator {
    pub(crate) fn new(poly: &ConvexPolygon, frame: GridFrame) -> Result<Self> {
        let mask = interior_mask(poly, &frame);
        let mut index = vec![NONE; frame.nodes()];
        let mut count = 0u32;
        for (k, inside) in mask.iter().enumerate() {
            if *inside {
                index[k] = count;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::EmptyGrid { h: frame.spacing() });
        }
        let n = count as usize;
        let cx = frame.hy / frame.hx;
        let cy = frame.hx / frame.hy;
        let mut nbr = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        let dirs = [
            (-1i64, 0i64, Point::new(-1.0, 0.0), frame.hx, cx),
            (1, 0, Point::new(1.0, 0.0), frame.hx, cx),
            (0, -1, Point::new(0.0, -1.0), frame.hy, cy),
            (0, 1, Point::new(0.0, 1.0), frame.hy, cy),
        ];
        for j in 0..=frame.ny {
            for i in 0..=frame.nx {
                if index[frame.flat(i, j)] == NONE {
                    continue;
                }
                let p = frame.node(i, j);
                let mut links = [NONE; 4];
                let mut d = 0.0;
                for (slot, &(di, dj, e, step, c)) in dirs.iter().enumerate() {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    let inside = ni >= 0
                        && nj >= 0
                        && ni <= frame.nx as i64
                        && nj <= frame.ny as i64
                        && index[frame.flat(ni as usize, nj as usize)] != NONE;
                    if inside {
                        links[slot] = index[frame.flat(ni as usize, nj as usize)];
                        d += c;
                    } else {
                        d += c / boundary_fraction(poly, p, e, step);
                    }
                }
                nbr.push(links);
                diag.push(d);
            }
        }
        let mut op = Self {
            frame,
            index,
            nbr,
            diag,
            cx,
            cy,
            mass: vec![frame.cell_area(); n],
            pivots: Vec::new(),
            rtol: 1e-12,
        };
        op.factor();
        Ok(op)
    }

    fn factor(&mut self) {
        let n = self.diag.len();
        let mut piv = vec![0.0; n];
        for k in 0..n {
            let [w, _, s, _] = self.nbr[k];
            let mut d = self.diag[k];
            if w != NONE {
                d -= self.cx * self.cx / piv[w as usize];
            }
            if s != NONE {
                d -= self.cy * self.cy / piv[s as usize];
            }
            piv[k] = d;
        }
        self.pivots = piv;
    }

    fn precondition(&self, r: &[f64], z: &mut [f64]) {
        let n = r.len();
        for k in 0..n {
            let [w, _, s, _] = self.nbr[k];
            let mut acc = r[k];
            if w != NONE {
                acc += self.cx * z[w as usize];
            }
            if s != NONE {
                acc += self.cy * z[s as usize];
            }
            z[k] = acc / self.pivots[k];
        }
        for k in (0..n).rev() {
            let [_, e, _, no] = self.nbr[k];
            let mut acc = 0.0;
            if e != NONE {
                acc += self.cx * z[e as usize];
            }
            if no != NONE {
                acc += self.cy * z[no as usize];
            }
            z[k] += acc / self.pivots[k];
        }
    }

    fn scatter(&self, u: &[f64]) -> GridField {
        let mut values = vec![0.0; self.frame.nodes()];
        let mut interior = vec![false; self.frame.nodes()];
        for (k, &idx) in self.index.iter().enumerate() {
            if idx != NONE {
                values[k] = u[idx as usize];
                interior[k] = true;
            }
        }
        GridField {
            frame: self.frame,
            interior,
            values,
        }
    }
}

/// Fraction of the step from `p` along unit direction `e` at which the segment
/// leaves the polygon.
fn boundary_fraction(poly: &ConvexPolygon, p: Point, e: Point, step: f64) -> f64 {
    let mut t = f64::INFINITY;
    for hp in poly.halfplanes() {
        let rate = hp.normal.dot(e);
        if rate > 1e-14 {
            t = t.min(hp.slack(p) / rate);
        }
    }
    (t / step).clamp(MIN_THETA, 1.0)
}

impl EnergyOperator for GridOperator {
    fn len(&self) -> usize {
        self.diag.len()
    }

    fn mass(&self) -> &[f64] {
        &self.mass
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let at = |k: u32| if k == NONE { 0.0 } else { u[k as usize] };
        for (k, o) in out.iter_mut().enumerate() {
            let [w, e, s, n] = self.nbr[k];
            *o = self.diag[k] * u[k] - self.cx * (at(w) + at(e)) - self.cy * (at(s) + at(n));
        }
    }

    fn solve(&self, rhs: &[f64], x: &mut [f64]) -> Result<usize> {
        let n = rhs.len();
        let bnorm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        if bnorm == 0.0 {
            x.iter_mut().for_each(|v| *v = 0.0);
            return Ok(0);
        }
        let mut r = vec![0.0; n];
        self.apply(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(rhs) {
            *ri = bi - *ri;
        }
        let mut z = vec![0.0; n];
        self.precondition(&r, &mut z);
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let max_iter = 20 * n + 1000;
        let mut rel = f64::INFINITY;
        for it in 0..max_iter {
            rel = r.iter().map(|v| v * v).sum::<f64>().sqrt() / bnorm;
            if rel <= self.rtol {
                return Ok(it);
            }
            self.apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            self.precondition(&r, &mut z);
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        // rounding can stall slightly above the target on large grids
        if rel < 1e-9 {
            return Ok(max_iter);
        }
        Err(Error::NoConvergence {
            what: "conjugate gradient",
            iterations: max_iter,
            last_change: rel,
        })
    }
}

/// Solver settings shared by every entry point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Grid spacing for polygons; `None` selects [`default_spacing`].
    pub h: Option<f64>,
    /// Relative change of the quotient that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    pub radial_nodes: usize,
    /// Also solve at spacing `2h` to estimate the discretization error.
    pub estimate_error: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            h: None,
            tol: 1e-11,
            max_iter: 5000,
            radial_nodes: DEFAULT_RADIAL_NODES,
            estimate_error: true,
        }
    }
}

impl SolverConfig {
    pub fn with_h(h: f64) -> Self {
        Self {
            h: Some(h),
            ..Self::default()
        }
    }

    fn iteration(&self) -> IterationOptions {
        IterationOptions {
            tol: self.tol,
            patience: 2,
            max_iter: self.max_iter,
        }
    }
}

/// `min(diameter/256, R/16)`: thin shapes still get 16 steps across their inradius.
pub fn default_spacing(poly: &ConvexPolygon) -> f64 {
    (poly.diameter() / 256.0).min(poly.inradius().radius / 16.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResult {
    pub q: f64,
    pub lambda: f64,
    /// Grid spacing (radial spacing times radius for balls).
    pub h: f64,
    pub iterations: usize,
    /// Relative change of the quotient at the last iteration.
    pub residual: f64,
    /// `‖u‖_{L^q}` of the returned minimizer.
    pub norm_check: f64,
    pub unknowns: usize,
    /// `|λ_h − λ_{2h}| / λ_h`, zero when not requested.
    pub error_estimate: f64,
    /// Relative residual of the discrete Lane–Emden system.
    pub equation_residual: f64,
    /// Inner linear-solver iterations (one per direct solve in 1D).
    pub linear_iterations: usize,
}

fn check_q(q: f64, dim: usize) -> Result<()> {
    let upper = onedim::critical_exponent(dim);
    if !(q >= 1.0) || !q.is_finite() || q >= upper {
        return Err(Error::ExponentOutOfRange {
            q,
            range: format!("[1, {upper})"),
        });
    }
    Ok(())
}

/// `λ(tΩ) = t^{−2−(2−q)N/q} λ(Ω)`
pub fn scaling_exponent(q: f64, dim: usize) -> f64 {
    -2.0 - (2.0 - q) * dim as f64 / q
}

/// Minimizer on a prescribed frame, with the discrete field.
pub fn solve_on_frame(poly: &ConvexPolygon, q: f64, frame: GridFrame, config: &SolverConfig) -> Result<(FrequencyResult, GridField)> {
    check_q(q, 2)?;
    let op = GridOperator::new(poly, frame)?;
    let init = initial_guess(poly, &op);
    let m = rayleigh::minimize(&op, q, init, config.iteration())?;
    let field = op.scatter(&m.u);
    let result = FrequencyResult {
        q,
        lambda: m.lambda,
        h: frame.spacing(),
        iterations: m.iterations,
        residual: m.last_change,
        norm_check: rayleigh::lq_norm(&m.u, op.mass(), q),
        unknowns: op.len(),
        error_estimate: 0.0,
        equation_residual: m.equation_residual,
        linear_iterations: m.inner_iterations,
    };
    Ok((result, field))
}

/// Positive bump: the boundary distance, which vanishes on the boundary.
fn initial_guess(poly: &ConvexPolygon, op: &GridOperator) -> Vec<f64> {
    let f = &op.frame;
    let mut u = Vec::with_capacity(op.len());
    for j in 0..=f.ny {
        for i in 0..=f.nx {
            if op.index[f.flat(i, j)] != NONE {
                u.push(poly.min_slack(f.node(i, j)));
            }
        }
    }
    u
}

fn polygon_lambda(poly: &ConvexPolygon, q: f64, config: &SolverConfig) -> Result<FrequencyResult> {
    let h = config.h.unwrap_or_else(|| default_spacing(poly));
    let (mut fine, _) = solve_on_frame(poly, q, GridFrame::around(poly, h)?, config)?;
    if config.estimate_error {
        let coarse = solve_on_frame(poly, q, GridFrame::around(poly, 2.0 * h)?, config)
            .map(|(r, _)| r.lambda);
        fine.error_estimate = match coarse {
            Ok(c) => (fine.lambda - c).abs() / fine.lambda,
            // too coarse to hold any interior node: no usable estimate
            Err(Error::EmptyGrid { .. }) => 1.0,
            Err(e) => return Err(e),
        };
    }
    Ok(fine)
}

fn ball_lambda(ball: &BallShape, q: f64, config: &SolverConfig) -> Result<FrequencyResult> {
    check_q(q, ball.dim)?;
    let b = onedim::ball_extremal(q, ball.dim, config.radial_nodes)?;
    let scale = ball.radius.powf(scaling_exponent(q, ball.dim));
    Ok(FrequencyResult {
        q,
        lambda: b.lambda * scale,
        h: b.profile.spacing() * ball.radius,
        iterations: b.iterations,
        residual: b.residual,
        norm_check: b.profile.norm,
        unknowns: b.profile.intervals(),
        error_estimate: if config.estimate_error { b.error_estimate() } else { 0.0 },
        equation_residual: onedim::lane_emden_residual(&b),
        linear_iterations: b.iterations,
    })
}

/// `λ_{2,q}` of a polygon, ball or disjoint union.
pub fn lambda_2q(shape: &Shape, q: f64, config: &SolverConfig) -> Result<FrequencyResult> {
    match shape {
        Shape::Polygon(p) => polygon_lambda(p, q, config),
        Shape::Ball(b) => ball_lambda(b, q, config),
        Shape::Union(parts) => {
            check_q(q, shape.dim())?;
            let results = parts
                .iter()
                .map(|p| lambda_2q(p, q, config))
                .collect::<Result<Vec<_>>>()?;
            let lambda = lambda_union(&results, q)?;
            Ok(FrequencyResult {
                q,
                lambda,
                h: results.iter().map(|r| r.h).fold(f64::INFINITY, f64::min),
                iterations: results.iter().map(|r| r.iterations).sum(),
                residual: results.iter().map(|r| r.residual).fold(0.0, f64::max),
                norm_check: 1.0,
                unknowns: results.iter().map(|r| r.unknowns).sum(),
                error_estimate: results.iter().map(|r| r.error_estimate).fold(0.0, f64::max),
                equation_residual: results.iter().map(|r| r.equation_residual).fold(0.0, f64::max),
                linear_iterations: results.iter().map(|r| r.linear_iterations).sum(),
            })
        }
    }
}

/// Frequency of a disjoint union from the frequencies of its parts.
pub fn lambda_union(parts: &[FrequencyResult], q: f64) -> Result<f64> {
    combine_union(&parts.iter().map(|p| p.lambda).collect::<Vec<_>>(), q)
}

/// Splitting the unit `L^q` mass as `s_i^q` gives `min Σ λ_i s_i² / (Σ s_i^q)^{2/q}`:
/// `(Σ λ_i^{−q/(2−q)})^{−(2−q)/q}` for `q < 2` and `min λ_i` for `q ≥ 2`.
pub fn combine_union(lambdas: &[f64], q: f64) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("union of zero parts".into()));
    }
    if lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidInput("part frequencies must be positive".into()));
    }
    if !(q >= 1.0) {
        return Err(Error::ExponentOutOfRange {
            q,
            range: "[1, inf)".into(),
        });
    }
    if q >= 2.0 {
        return Ok(lambdas.iter().copied().fold(f64::INFINITY, f64::min));
    }
    let p = q / (2.0 - q);
    // factor out the smallest value so large exponents cannot overflow
    let lmin = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let s: f64 = lambdas.iter().map(|l| (l / lmin).powf(-p)).sum();
    Ok(lmin * s.powf(-1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsionResult {
    pub torsion: f64,
    pub h: f64,
    pub unknowns: usize,
    pub cg_iterations: usize,
    pub error_estimate: f64,
}

fn polygon_torsion_on(poly: &ConvexPolygon, frame: GridFrame) -> Result<(f64, usize, usize)> {
    let op = GridOperator::new(poly, frame)?;
    let rhs = op.mass.clone();
    let mut w = vec![0.0; op.len()];
    let iters = op.solve(&rhs, &mut w)?;
    let t = w.iter().zip(&rhs).map(|(a, b)| a * b).sum();
    Ok((t, op.len(), iters))
}

/// Torsional rigidity `∫ w` with `−Δw = 1`, `w = 0` on the boundary.
pub fn torsion(shape: &Shape, config: &SolverConfig) -> Result<TorsionResult> {
    match shape {
        Shape::Polygon(p) => {
            let h = config.h.unwrap_or_else(|| default_spacing(p));
            let frame = GridFrame::around(p, h)?;
            let (t, unknowns, cg) = polygon_torsion_on(p, frame)?;
            let error_estimate = if config.estimate_error {
                match polygon_torsion_on(p, GridFrame::around(p, 2.0 * h)?) {
                    Ok((c, _, _)) => (t - c).abs() / t,
                    Err(Error::EmptyGrid { .. }) => 1.0,
                    Err(e) => return Err(e),
                }
            } else {
                0.0
            };
            Ok(TorsionResult {
                torsion: t,
                h: frame.spacing(),
                unknowns,
                cg_iterations: cg,
                error_estimate,
            })
        }
        Shape::Ball(b) => {
            let r = ball_lambda(b, 1.0, config)?;
            Ok(TorsionResult {
                torsion: 1.0 / r.lambda,
                h: r.h,
                unknowns: r.unknowns,
                cg_iterations: 0,
                error_estimate: r.error_estimate,
            })
        }
        Shape::Union(parts) => {
            let rs = parts
                .iter()
                .map(|p| torsion(p, config))
                .collect::<Result<Vec<_>>>()?;
            Ok(TorsionResult {
                torsion: rs.iter().map(|r| r.torsion).sum(),
                h: rs.iter().map(|r| r.h).fold(f64::INFINITY, f64::min),
                unknowns: rs.iter().map(|r| r.unknowns).sum(),
                cg_iterations: rs.iter().map(|r| r.cg_iterations).sum(),
                error_estimate: rs.iter().map(|r| r.error_estimate).fold(0.0, f64::max),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn square() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    fn plain(h: f64) -> SolverConfig {
        SolverConfig {
            estimate_error: false,
            ..SolverConfig::with_h(h)
        }
    }

    #[test]
    fn square_eigenvalue_and_order() {
        let exact = 2.0 * PI * PI;
        let err = |h: f64| {
            let r = lambda_2q(&Shape::Polygon(square()), 2.0, &plain(h)).unwrap();
            assert_relative_eq!(r.norm_check, 1.0, max_relative = 1e-10);
            (r.lambda - exact).abs() / exact
        };
        let (e64, e128) = (err(1.0 / 64.0), err(1.0 / 128.0));
        assert!(e128 < 5e-3);
        assert!((e64 / e128).log2() >= 1.8, "order {}", (e64 / e128).log2());
    }

    #[test]
    fn cut_cells_give_second_order_on_the_disk() {
        let disk = BallShape::unit(2).polygonize(256).unwrap();
        // the 256-gon differs from the disk by about 1e-4 in area
        let exact = PI / 8.0;
        let t = |h: f64| polygon_torsion_on(&disk, GridFrame::around(&disk, h).unwrap()).unwrap().0;
        let (a, b) = (t(1.0 / 32.0), t(1.0 / 64.0));
        assert!((b / exact - 1.0).abs() < 2e-3, "{b}");
        assert!((a - b).abs() < 2e-3 * exact);
    }

    #[test]
    fn torsion_and_q1_frequency_agree() {
        let poly = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(2.0, 0.2), Point::new(0.7, 1.5)]).unwrap();
        let shape = Shape::Polygon(poly);
        let cfg = plain(0.02);
        let t = torsion(&shape, &cfg).unwrap().torsion;
        let l = lambda_2q(&shape, 1.0, &cfg).unwrap().lambda;
        assert_relative_eq!(1.0 / t, l, max_relative = 1e-6);
    }

    #[test]
    fn disk_torsion_radial() {
        let t = torsion(&Shape::Ball(BallShape::unit(2)), &SolverConfig::default()).unwrap();
        assert!((t.torsion / (PI / 8.0) - 1.0).abs() < 2e-3);
    }

    #[test]
    fn slab_torsion_tends_to_one_twelfth() {
        let slab = Shape::Polygon(ConvexPolygon::slab(16.0).unwrap());
        let t = torsion(&slab, &SolverConfig::default()).unwrap().torsion;
        assert!((t / 16.0 * 12.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn dilation_scales_as_predicted() {
        let poly = ConvexPolygon::regular(6, 1.0).unwrap();
        for q in [1.0, 1.5, 2.0, 3.0] {
            let a = lambda_2q(&Shape::Polygon(poly.clone()), q, &plain(0.05)).unwrap();
            let b = lambda_2q(&Shape::Polygon(poly.scale(2.0)), q, &plain(0.1)).unwrap();
            assert_relative_eq!(b.lambda, a.lambda * 2f64.powf(scaling_exponent(q, 2)), max_relative = 1e-8);
        }
        let t1 = torsion(&Shape::Polygon(poly.clone()), &plain(0.05)).unwrap().torsion;
        let t2 = torsion(&Shape::Polygon(poly.scale(3.0)), &plain(0.15)).unwrap().torsion;
        assert_relative_eq!(t2, 81.0 * t1, max_relative = 1e-8);
    }

    #[test]
    fn nested_shapes_are_monotone_on_a_shared_grid() {
        let outer = ConvexPolygon::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        let inner = ConvexPolygon::regular(7, 0.95).unwrap();
        let frame = GridFrame::around(&outer, 0.04).unwrap();
        for q in [1.0, 1.5, 2.0, 4.0] {
            let cfg = SolverConfig::default();
            let (lo, _) = solve_on_frame(&outer, q, frame, &cfg).unwrap();
            let (li, _) = solve_on_frame(&inner, q, frame, &cfg).unwrap();
            assert!(li.lambda >= lo.lambda * (1.0 - 1e-8), "q = {q}");
        }
    }

    #[test]
    fn minimizer_is_positive_and_normalized() {
        let poly = ConvexPolygon::regular(5, 1.0).unwrap();
        let frame = GridFrame::around(&poly, 0.05).unwrap();
        for q in [1.0, 1.3, 2.0, 3.5] {
            let (r, field) = solve_on_frame(&poly, q, frame, &SolverConfig::default()).unwrap();
            assert!(field.values.iter().all(|v| *v >= 0.0));
            assert_relative_eq!(field.lq_norm(q), 1.0, max_relative = 1e-10);
            assert!(r.residual < 1e-11);
        }
    }

    #[test]
    fn lane_emden_residual_is_small_at_every_level() {
        let poly = ConvexPolygon::regular(6, 1.0).unwrap();
        for h in [0.1, 0.05, 0.025] {
            let r = lambda_2q(&Shape::Polygon(poly.clone()), 1.5, &plain(h)).unwrap();
            assert!(r.equation_residual < 1e-5, "h = {h}: {}", r.equation_residual);
        }
    }

    #[test]
    fn ball_scaling() {
        let b1 = lambda_2q(&Shape::Ball(BallShape::unit(3)), 1.5, &SolverConfig::default()).unwrap();
        let b2 = lambda_2q(
            &Shape::Ball(BallShape::new(3, 2.0, vec![]).unwrap()),
            1.5,
            &SolverConfig::default(),
        )
        .unwrap();
        assert_relative_eq!(b2.lambda, b1.lambda * 2f64.powf(scaling_exponent(1.5, 3)), max_relative = 1e-12);
    }

    #[test]
    fn union_rule_examples() {
        assert_relative_eq!(combine_union(&[5.0, 5.0], 1.0).unwrap(), 2.5, max_relative = 1e-14);
        assert_relative_eq!(combine_union(&[5.0, 5.0], 2.0).unwrap(), 5.0);
        assert_relative_eq!(combine_union(&[5.0, 7.0], 3.0).unwrap(), 5.0);
        // brute force: minimize (a1 s1² + a2 s2²) / (s1^q + s2^q)^{2/q} on the unit circle
        let q = 1.5;
        let (a1, a2) = (1.0, 2.0);
        let mut best = f64::INFINITY;
        let n = 200_000;
        for k in 0..=n {
            let th = 0.5 * PI * k as f64 / n as f64;
            let (s1, s2) = (th.cos(), th.sin());
            let v = (a1 * s1 * s1 + a2 * s2 * s2) / (s1.powf(q) + s2.powf(q)).powf(2.0 / q);
            best = best.min(v);
        }
        assert_relative_eq!(combine_union(&[a1, a2], q).unwrap(), best, max_relative = 1e-8);
        assert!(combine_union(&[], 1.0).is_err());
    }

    #[test]
    fn disjoint_disks() {
        let a = Shape::Ball(BallShape::new(2, 1.0, vec![-2.0, 0.0]).unwrap());
        let b = Shape::Ball(BallShape::new(2, 1.0, vec![2.0, 0.0]).unwrap());
        let u = Shape::union(vec![a.clone(), b]).unwrap();
        let cfg = SolverConfig::default();
        let single = lambda_2q(&a, 1.0, &cfg).unwrap().lambda;
        assert_relative_eq!(lambda_2q(&u, 1.0, &cfg).unwrap().lambda, single / 2.0, max_relative = 1e-12);
        assert_relative_eq!(torsion(&u, &cfg).unwrap().torsion, 2.0 / single, max_relative = 1e-12);
    }

    #[test]
    fn distance_field_is_superharmonic() {
        let poly = ConvexPolygon::regular(5, 1.0).unwrap();
        let frame = GridFrame::around(&poly, 0.03).unwrap();
        let d = distance_field(&poly, frame);
        let h = frame.spacing();
        assert!(d.max_interior_laplacian().unwrap() <= 1e-9 / (h * h));
    }

    #[test]
    fn rejects_bad_input() {
        let s = Shape::Polygon(square());
        assert!(lambda_2q(&s, 0.9, &SolverConfig::default()).is_err());
        assert!(lambda_2q(&Shape::Ball(BallShape::unit(3)), 6.0, &SolverConfig::default()).is_err());
        assert!(matches!(
            lambda_2q(&s, 2.0, &plain(2.0)),
            Err(Error::EmptyGrid { .. })
        ));
    }
}
