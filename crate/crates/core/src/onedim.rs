//! One-dimensional problems: the Poincaré–Sobolev constants `π_{2,q}`, the
//! mixed Dirichlet–Neumann profile on `[−1, 0]`, the radial extremal of the
//! unit ball, and the sampled monotone-rearrangement inequality.
//!
//! All three variational problems share one discretization: uniform nodes,
//! forward differences for the energy (with the radial weight `t^{N−1}`
//! taken at cell midpoints) and a diagonal mass from dual-cell integrals of the
//! weight. Zero Dirichlet data is imposed by dropping the node; the Neumann
//! condition at a free end is the natural boundary condition of the discrete
//! energy, equivalent to a mirrored ghost node.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;
use crate::rayleigh::{self, EnergyOperator, IterationOptions};

pub const DEFAULT_FLAT_NODES: usize = 4096;
pub const DEFAULT_RADIAL_NODES: usize = 2048;

/// Symmetric tridiagonal stiffness with a cached `LDLᵀ` factorization.
struct Tridiagonal {
    diag: Vec<f64>,
    /// `off[i]` couples unknowns `i` and `i + 1`.
    off: Vec<f64>,
    mass: Vec<f64>,
    pivots: Vec<f64>,
    lower: Vec<f64>,
}

impl Tridiagonal {
    fn new(diag: Vec<f64>, off: Vec<f64>, mass: Vec<f64>) -> Self {
        let n = diag.len();
        let mut pivots = vec![0.0; n];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        pivots[0] = diag[0];
        for i in 1..n {
            lower[i - 1] = off[i - 1] / pivots[i - 1];
            pivots[i] = diag[i] - lower[i - 1] * off[i - 1];
        }
        Self {
            diag,
            off,
            mass,
            pivots,
            lower,
        }
    }
}

impl EnergyOperator for Tridiagonal {
    fn len(&self) -> usize {
        self.diag.len()
    }

    fn mass(&self) -> &[f64] {
        &self.mass
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n {
            let mut s = self.diag[i] * u[i];
            if i > 0 {
                s += self.off[i - 1] * u[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * u[i + 1];
            }
            out[i] = s;
        }
    }

    fn solve(&self, rhs: &[f64], x: &mut [f64]) -> Result<usize> {
        let n = self.diag.len();
        x[0] = rhs[0];
        for i in 1..n {
            x[i] = rhs[i] - self.lower[i - 1] * x[i - 1];
        }
        for i in 0..n {
            x[i] /= self.pivots[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.lower[i] * x[i + 1];
        }
        Ok(1)
    }
}

/// Builds the weighted chain energy `Σ_e w_e (u_{e+1} − u_e)² / h`.
///
/// `edge_weights[e]` belongs to the edge between nodes `e` and `e + 1` of the
/// full grid `0..=n`; `unknown` marks nodes that are free (others are zero).
fn chain_operator(n: usize, h: f64, edge_weights: &[f64], first: usize, last: usize, mass: Vec<f64>) -> Tridiagonal {
    let count = last - first + 1;
    let mut diag = vec![0.0; count];
    let mut off = vec![0.0; count.saturating_sub(1)];
    for e in 0..n {
        let w = edge_weights[e] / h;
        let (a, b) = (e, e + 1);
        let ia = (first..=last).contains(&a).then(|| a - first);
        let ib = (first..=last).contains(&b).then(|| b - first);
        if let Some(i) = ia {
            diag[i] += w;
        }
        if let Some(j) = ib {
            diag[j] += w;
        }
        if let (Some(i), Some(_)) = (ia, ib) {
            off[i] -= w;
        }
    }
    Tridiagonal::new(diag, off, mass)
}

fn check_exponent(q: f64, upper: f64, inclusive: bool) -> Result<()> {
    let ok = q >= 1.0 && if inclusive { q <= upper } else { q < upper };
    if !ok || !q.is_finite() {
        let close = if inclusive { "]" } else { ")" };
        return Err(Error::ExponentOutOfRange {
            q,
            range: format!("[1, {upper}{close}"),
        });
    }
    Ok(())
}

/// Critical Sobolev exponent `2* = 2N/(N−2)` (infinite for `N ≤ 2`).
pub fn critical_exponent(dim: usize) -> f64 {
    if dim <= 2 {
        f64::INFINITY
    } else {
        2.0 * dim as f64 / (dim as f64 - 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NormKind {
    /// `‖φ‖_{L^q(0,1)}` or `‖φ‖_{L^q(−1,0)}`
    Flat,
    /// `‖f(|x|)‖_{L^q(B_1)} = (N ω_N ∫ f^q t^{N−1})^{1/q}`
    Radial,
}

/// Sampled profile on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub start: f64,
    pub end: f64,
    /// Values at the `n + 1` uniform nodes from `start` to `end`.
    pub samples: Vec<f64>,
    pub q: f64,
    /// 1 for flat profiles, `N ≥ 2` for radial ball profiles.
    pub dimension: usize,
    pub norm_kind: NormKind,
    pub norm: f64,
}

impl RadialProfile {
    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / self.intervals() as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn is_non_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareConstant {
    pub q: f64,
    pub value: f64,
    pub resolution: usize,
    /// Relative change against the half-resolution solve.
    pub residual: f64,
}

fn flat_dirichlet_lambda(q: f64, n: usize) -> Result<f64> {
    let h = 1.0 / n as f64;
    let op = chain_operator(n, h, &vec![1.0; n], 1, n - 1, vec![h; n - 1]);
    let init: Vec<f64> = (1..n)
        .map(|i| (std::f64::consts::PI * i as f64 * h).sin())
        .collect();
    Ok(rayleigh::minimize(&op, q, init, IterationOptions::default())?.lambda)
}

/// `π_{2,q} = min ‖φ'‖_{L²(0,1)} / ‖φ‖_{L^q(0,1)}` over `φ(0) = φ(1) = 0`.
pub fn pi_2q(q: f64, n: usize) -> Result<PoincareConstant> {
    check_exponent(q, 100.0, false)?;
    if q > 10.0 {
        log::warn!("pi_2q: q = {q} is large; the minimizer concentrates and convergence slows");
    }
    let n = n.max(8) & !1;
    let fine = flat_dirichlet_lambda(q, n)?.sqrt();
    let coarse = flat_dirichlet_lambda(q, n / 2)?.sqrt();
    Ok(PoincareConstant {
        q,
        value: fine,
        resolution: n,
        residual: (fine - coarse).abs() / fine,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedProfile {
    /// Nondecreasing on `[−1, 0]`, `v(−1) = 0`, unit `L^q` norm.
    pub profile: RadialProfile,
    /// `min ∫|φ'|²` at unit norm; equals `(π_{2,q}/2)²`.
    pub minimum: f64,
    /// Whether the raw minimizer had to be rearranged to be monotone.
    pub rearranged: bool,
}

/// `w(t) = ∫_{−1}^t |v'|` on samples: `w_0 = v_0`, `w_{i+1} = w_i + |v_{i+1} − v_i|`.
///
/// Keeps every increment's magnitude, so the discrete Dirichlet energy is
/// unchanged and `w ≥ |v|` pointwise when `v_0 = 0`.
pub fn monotone_rearrangement(samples: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = samples.first().copied().unwrap_or(0.0);
    out.push(acc);
    for w in samples.windows(2) {
        acc += (w[1] - w[0]).abs();
        out.push(acc);
    }
    out
}

/// Trapezoid weights of `[−1, 0]` for nodes `1..=n` (the right end has half weight).
fn mixed_mass(n: usize, h: f64) -> Vec<f64> {
    let mut m = vec![h; n];
    m[n - 1] = 0.5 * h;
    m
}

fn discrete_energy(samples: &[f64], h: f64) -> f64 {
    samples.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h
}

/// Minimizes `∫_{−1}^0 |φ'|²` over `φ(−1) = 0`, `‖φ‖_{L^q(−1,0)} = 1`, free at `0`.
pub fn mixed_profile(q: f64, n: usize) -> Result<MixedProfile> {
    check_exponent(q, 2.0, true)?;
    let n = n.max(4);
    let h = 1.0 / n as f64;
    let mass = mixed_mass(n, h);
    let op = chain_operator(n, h, &vec![1.0; n], 1, n, mass.clone());
    let init: Vec<f64> = (1..=n)
        .map(|i| (0.5 * std::f64::consts::PI * i as f64 * h).sin())
        .collect();
    let m = rayleigh::minimize(&op, q, init, IterationOptions::default())?;

    let mut samples = Vec::with_capacity(n + 1);
    samples.push(0.0);
    samples.extend_from_slice(&m.u);
    let rearranged = samples.windows(2).any(|w| w[1] < w[0]);
    if rearranged {
        samples = monotone_rearrangement(&samples);
        let norm = rayleigh::lq_norm(&samples[1..], &mass, q);
        samples.iter_mut().for_each(|s| *s /= norm);
    }
    let minimum = discrete_energy(&samples, h);
    let norm = rayleigh::lq_norm(&samples[1..], &mass, q);
    Ok(MixedProfile {
        profile: RadialProfile {
            start: -1.0,
            end: 0.0,
            samples,
            q,
            dimension: 1,
            norm_kind: NormKind::Flat,
            norm,
        },
        minimum,
        rearranged,
    })
}

/// Radial extremal of `λ_{2,q}(B_1)` in `ℝ^N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallExtremal {
    /// `f` on `[0, 1]`, `f(1) = 0`, nonincreasing, `‖f(|x|)‖_{L^q(B_1)} = 1`.
    pub profile: RadialProfile,
    pub lambda: f64,
    /// Same problem at half the resolution.
    pub lambda_coarse: f64,
    pub iterations: usize,
    /// Relative change of the quotient at the last iteration.
    pub residual: f64,
}

impl BallExtremal {
    /// Relative difference between the two resolutions.
    pub fn error_estimate(&self) -> f64 {
        (self.lambda - self.lambda_coarse).abs() / self.lambda
    }
}

struct RadialSolve {
    samples: Vec<f64>,
    lambda: f64,
    iterations: usize,
    last_change: f64,
    norm: f64,
}

fn radial_solve(q: f64, dim: usize, n: usize) -> Result<RadialSolve> {
    let h = 1.0 / n as f64;
    let nd = dim as f64;
    let sphere = nd * unit_ball_volume(dim);
    let weights: Vec<f64> = (0..n)
        .map(|e| sphere * ((e as f64 + 0.5) * h).powi(dim as i32 - 1))
        .collect();
    // ∫ over the dual cell of t^{N−1}, times |S^{N−1}|
    let cell = |a: f64, b: f64| sphere * (b.powi(dim as i32) - a.powi(dim as i32)) / nd;
    let mass: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 * h;
            cell((t - 0.5 * h).max(0.0), t + 0.5 * h)
        })
        .collect();
    let op = chain_operator(n, h, &weights, 0, n - 1, mass.clone());
    let init: Vec<f64> = (0..n).map(|i| 1.0 - (i as f64 * h).powi(2)).collect();
    let m = rayleigh::minimize(&op, q, init, IterationOptions::default())?;
    let mut samples = m.u;
    samples.push(0.0);
    let norm = rayleigh::lq_norm(&samples[..n], &mass, q);
    Ok(RadialSolve {
        samples,
        lambda: m.lambda,
        iterations: m.iterations,
        last_change: m.last_change,
        norm,
    })
}

/// Minimizes `N ω_N ∫ |f'|² t^{N−1} / (N ω_N ∫ f^q t^{N−1})^{2/q}` over `f(1) = 0`.
pub fn ball_extremal(q: f64, dim: usize, n: usize) -> Result<BallExtremal> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("ball dimension must be >= 2, got {dim}")));
    }
    check_exponent(q, critical_exponent(dim), false)?;
    let n = n.max(8) & !1;
    let fine = radial_solve(q, dim, n)?;
    let coarse = radial_solve(q, dim, n / 2)?;
    Ok(BallExtremal {
        profile: RadialProfile {
            start: 0.0,
            end: 1.0,
            samples: fine.samples,
            q,
            dimension: dim,
            norm_kind: NormKind::Radial,
            norm: fine.norm,
        },
        lambda: fine.lambda,
        lambda_coarse: coarse.lambda,
        iterations: fine.iterations,
        residual: fine.last_change,
    })
}

/// Relative `L²` residual of the strong radial equation
/// `−(t^{N−1} f')' = λ t^{N−1} f^{q−1}` at interior nodes, with the standard
/// three-point stencil and the radial weight evaluated at the nodes.
pub fn lane_emden_residual(ball: &BallExtremal) -> f64 {
    let p = &ball.profile;
    let f = &p.samples;
    let n = p.intervals();
    let h = p.spacing();
    let k = p.dimension as i32 - 1;
    let sphere = p.dimension as f64 * unit_ball_volume(p.dimension);
    // the profile is normalized in L^q(B_1); the multiplier is λ itself
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..n {
        let t = i as f64 * h;
        let tp = (t + 0.5 * h).powi(k);
        let tm = (t - 0.5 * h).powi(k);
        let lhs = -(tp * (f[i + 1] - f[i]) - tm * (f[i] - f[i - 1])) / (h * h) * sphere;
        let rhs = ball.lambda * sphere * t.powi(k) * f[i].max(0.0).powf(p.q - 1.0);
        num += (lhs - rhs).powi(2) * h;
        den += rhs.powi(2) * h;
    }
    (num / den).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevCheck {
    /// `∫_0^a ξ' ψ`
    pub lhs: f64,
    /// `(ξ(a)/a) ∫_0^a ψ`
    pub rhs: f64,
    pub holds: bool,
}

/// Sampled form of `∫_0^a ξ'ψ ≤ (ξ(a)/a) ∫_0^a ψ` for `ξ(0) = 0`, `ξ(t)/t`
/// nondecreasing and `ψ ≥ 0` nonincreasing, on a uniform grid over `[0, a]`.
///
/// Both sides use the trapezoid rule with `ξ'` constant per cell; with this
/// quadrature the inequality holds exactly for admissible samples.
pub fn chebyshev_like_check(xi: &[f64], psi: &[f64], a: f64) -> Result<ChebyshevCheck> {
    if xi.len() != psi.len() || xi.len() < 2 {
        return Err(Error::InvalidInput("xi and psi need the same length >= 2".into()));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("right endpoint must be positive, got {a}")));
    }
    let n = xi.len() - 1;
    let h = a / n as f64;
    let scale = xi.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if xi[0].abs() > 1e-12 * scale {
        return Err(Error::InvalidInput(format!("xi(0) = {} is not zero", xi[0])));
    }
    let ratios: Vec<f64> = (1..=n).map(|i| xi[i] / (i as f64 * h)).collect();
    if let Some(i) = ratios
        .windows(2)
        .position(|w| w[1] < w[0] - 1e-12 * w[0].abs().max(scale / a))
    {
        return Err(Error::InvalidInput(format!("xi(t)/t decreases after node {}", i + 1)));
    }
    let pscale = psi.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if psi.iter().any(|p| *p < 0.0) {
        return Err(Error::InvalidInput("psi must be nonnegative".into()));
    }
    if let Some(i) = psi.windows(2).position(|w| w[1] > w[0] + 1e-12 * pscale) {
        return Err(Error::InvalidInput(format!("psi increases after node {i}")));
    }
    let lhs: f64 = (0..n)
        .map(|i| (xi[i + 1] - xi[i]) * 0.5 * (psi[i] + psi[i + 1]))
        .sum();
    let integral_psi: f64 = (0..n).map(|i| 0.5 * h * (psi[i] + psi[i + 1])).sum();
    let rhs = xi[n] / a * integral_psi;
    Ok(ChebyshevCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn pi_2q_explicit_values() {
        let p1 = pi_2q(1.0, DEFAULT_FLAT_NODES).unwrap();
        assert_relative_eq!(p1.value, 2.0 * 3f64.sqrt(), max_relative = 1e-6);
        let p2 = pi_2q(2.0, DEFAULT_FLAT_NODES).unwrap();
        assert_relative_eq!(p2.value, PI, max_relative = 1e-6);
        assert!(p2.residual < 1e-6);
    }

    /// First-integral quadrature of the extremal: with `φ'² = (2λ/q)(1 − φ^q)`
    /// and maximum 1, half the interval has length `√(q/2λ)·B(1/q, 1/2)/q`.
    fn pi_2q_quadrature(q: f64) -> f64 {
        use statrs::function::beta::beta;
        let lambda = (2.0 / q) * beta(1.0 / q, 0.5).powi(2);
        let mass = 2.0 * (q / (2.0 * lambda)).sqrt() / q * beta(1.0 + 1.0 / q, 0.5);
        (lambda * mass.powf(1.0 - 2.0 / q)).sqrt()
    }

    #[test]
    fn pi_2q_intermediate_exponent() {
        let p = pi_2q(1.5, DEFAULT_FLAT_NODES).unwrap();
        assert!(p.value > PI && p.value < 2.0 * 3f64.sqrt());
        let other = pi_2q(1.5, 2 * DEFAULT_FLAT_NODES).unwrap();
        assert_relative_eq!(p.value, other.value, max_relative = 1e-6);
        assert_relative_eq!(p.value, pi_2q_quadrature(1.5), max_relative = 1e-6);
        assert_relative_eq!(pi_2q_quadrature(1.0), 2.0 * 3f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn pi_2q_non_increasing_on_sample() {
        let vals: Vec<f64> = [1.0, 1.25, 1.5, 1.75, 2.0]
            .iter()
            .map(|&q| pi_2q(q, 1024).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn mixed_minimum_matches_quarter_pi_squared() {
        for q in [1.0, 1.5, 2.0] {
            let m = mixed_profile(q, DEFAULT_FLAT_NODES).unwrap();
            let p = pi_2q(q, DEFAULT_FLAT_NODES).unwrap().value;
            assert_relative_eq!(4.0 * m.minimum, p * p, max_relative = 1e-5);
        }
    }

    #[test]
    fn pi_2q_rejects_bad_exponents() {
        assert!(pi_2q(0.5, 64).is_err());
        assert!(pi_2q(100.0, 64).is_err());
        assert!(pi_2q(f64::NAN, 64).is_err());
    }

    #[test]
    fn mixed_profile_q2_is_the_quarter_cosine() {
        let m = mixed_profile(2.0, 2048).unwrap();
        assert_relative_eq!(m.minimum, (PI / 2.0).powi(2), max_relative = 1e-6);
        let p = &m.profile;
        assert!(p.is_non_decreasing());
        assert!(!m.rearranged);
        for i in (0..=p.intervals()).step_by(128) {
            let t = p.node(i);
            let oracle = 2f64.sqrt() * (PI * t / 2.0).cos();
            assert!((p.samples[i] - oracle).abs() < 1e-5, "t = {t}");
        }
    }

    #[test]
    fn mixed_profile_q1_minimum_is_three() {
        let m = mixed_profile(1.0, 2048).unwrap();
        assert_relative_eq!(m.minimum, 3.0, max_relative = 1e-6);
        assert_relative_eq!(m.profile.norm, 1.0, max_relative = 1e-12);
        assert_eq!(m.profile.samples[0], 0.0);
    }

    #[test]
    fn mixed_profile_rejects_q_above_two() {
        assert!(mixed_profile(2.5, 64).is_err());
    }

    #[test]
    fn rearrangement_preserves_energy_and_dominates() {
        let v = [0.0, 0.4, 0.9, 0.7, 0.2, 0.5];
        let w = monotone_rearrangement(&v);
        assert_relative_eq!(discrete_energy(&v, 0.1), discrete_energy(&w, 0.1), max_relative = 1e-14);
        assert!(w.windows(2).all(|p| p[1] >= p[0]));
        assert!(w.iter().zip(&v).all(|(a, b)| a >= b));
    }

    #[test]
    fn ball_extremal_torsion_identity() {
        // λ_{2,1}(B_1) = N (N + 2) / ω_N
        for dim in [2usize, 3] {
            let b = ball_extremal(1.0, dim, DEFAULT_RADIAL_NODES).unwrap();
            let exact = (dim * (dim + 2)) as f64 / unit_ball_volume(dim);
            assert!((b.lambda / exact - 1.0).abs() < 2e-3, "N = {dim}: {} vs {exact}", b.lambda);
            assert!(b.profile.is_non_increasing());
            assert_eq!(*b.profile.samples.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn ball_extremal_q2_is_bessel_zero_squared() {
        // j_{0,1}² for the unit disk
        let j01: f64 = 2.404_825_557_695_773;
        let b = ball_extremal(2.0, 2, DEFAULT_RADIAL_NODES).unwrap();
        assert_relative_eq!(b.lambda, j01 * j01, max_relative = 1e-5);
    }

    #[test]
    fn strong_form_residual_is_small() {
        for q in [1.0, 1.5, 3.0] {
            for n in [128, 512] {
                let r = lane_emden_residual(&ball_extremal(q, 2, n).unwrap());
                assert!(r < 1e-4, "q = {q}, n = {n}: {r}");
            }
        }
    }

    #[test]
    fn ball_extremal_rejects_supercritical_q() {
        assert!(ball_extremal(6.0, 3, 64).is_err());
        assert!(ball_extremal(5.9, 3, 256).is_ok());
        assert!(ball_extremal(2.0, 1, 64).is_err());
    }

    #[test]
    fn chebyshev_like_examples() {
        let n = 1000;
        let t: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let xi: Vec<f64> = t.iter().map(|s| s * s).collect();
        let ones = vec![1.0; n + 1];
        let c = chebyshev_like_check(&xi, &ones, 1.0).unwrap();
        assert_relative_eq!(c.lhs, 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.rhs, 1.0, max_relative = 1e-12);
        assert!(c.holds);

        let psi: Vec<f64> = t.iter().map(|s| (1.0 - s).powi(3) + 0.1).collect();
        let c = chebyshev_like_check(&t, &psi, 1.0).unwrap();
        assert_relative_eq!(c.lhs, c.rhs, max_relative = 1e-12);

        // ξ(t)/t decreasing: invalid input, not a violation
        let bad: Vec<f64> = t.iter().map(|s| s.sqrt()).collect();
        assert!(chebyshev_like_check(&bad, &ones, 1.0).is_err());
        let rising: Vec<f64> = t.clone();
        assert!(chebyshev_like_check(&xi, &rising, 1.0).is_err());
    }
}
