//! Inequality checks on computed frequencies, the gauge-based upper
//! certificate, exponent scans and slab asymptotics.
//!
//! Every report stores the inequality as it reads: `lhs` is the computed
//! shape quantity and `rhs` the bound it is compared with, joined by
//! `relation`. `slack` is oriented so that it is positive when the inequality
//! holds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, ConvexPolygon};
use crate::onedim::{self, BallExtremal, PoincareConstant, RadialProfile, DEFAULT_FLAT_NODES};
use crate::shape::{GeometrySummary, NamedShape, Shape};
use crate::solver::{self, FrequencyResult, SolverConfig, TorsionResult};

/// Absolute floor added to every tolerance.
pub const BASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InequalityId {
    Fk,
    Hpq,
    Hp,
    Banale,
    Hpweak,
    Hpweakup,
    MpsLower,
    MpsUpper,
    BfntImproved,
    Certificate,
    CertificateChain,
}

impl InequalityId {
    pub const ALL: [InequalityId; 11] = [
        InequalityId::Fk,
        InequalityId::Hpq,
        InequalityId::Hp,
        InequalityId::Banale,
        InequalityId::Hpweak,
        InequalityId::Hpweakup,
        InequalityId::MpsLower,
        InequalityId::MpsUpper,
        InequalityId::BfntImproved,
        InequalityId::Certificate,
        InequalityId::CertificateChain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Fk => "FK",
            InequalityId::Hpq => "HPQ",
            InequalityId::Hp => "HP",
            InequalityId::Banale => "BANALE",
            InequalityId::Hpweak => "HPWEAK",
            InequalityId::Hpweakup => "HPWEAKUP",
            InequalityId::MpsLower => "MPS_LOWER",
            InequalityId::MpsUpper => "MPS_UPPER",
            InequalityId::BfntImproved => "BFNT_IMPROVED",
            InequalityId::Certificate => "CERTIFICATE",
            InequalityId::CertificateChain => "CERTIFICATE_CHAIN",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == up)
            .ok_or_else(|| Error::InvalidInput(format!("unknown inequality id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = ">")]
    Above,
}

impl Relation {
    fn upper(self) -> bool {
        matches!(self, Relation::AtMost | Relation::Below)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::AtLeast => ">=",
            Relation::Above => ">",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    EqualityWithinTolerance,
    Violated,
    /// The hypotheses of the inequality do not cover this shape or exponent.
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::EqualityWithinTolerance => "equality-within-tolerance",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub id: InequalityId,
    pub shape: String,
    pub q: f64,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    /// Positive when the inequality holds.
    pub slack: f64,
    /// `slack / |rhs|`
    pub relative_slack: f64,
    /// Relative tolerance consumed by the verdict.
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    /// Builds a report and classifies it against the relative tolerance.
    pub fn new(id: InequalityId, shape: &str, q: f64, lhs: f64, relation: Relation, rhs: f64, tolerance: f64) -> Self {
        let slack = if relation.upper() { rhs - lhs } else { lhs - rhs };
        let relative_slack = if rhs != 0.0 { slack / rhs.abs() } else { slack };
        let verdict = if !(lhs.is_finite() && rhs.is_finite()) {
            Verdict::Violated
        } else if relative_slack > tolerance {
            Verdict::Holds
        } else if relative_slack >= -tolerance {
            Verdict::EqualityWithinTolerance
        } else {
            Verdict::Violated
        };
        Self {
            id,
            shape: shape.to_string(),
            q,
            lhs,
            relation,
            rhs,
            slack,
            relative_slack,
            tolerance,
            verdict,
            note: None,
        }
    }

    pub fn not_applicable(id: InequalityId, shape: &str, q: f64, reason: &str) -> Self {
        Self {
            id,
            shape: shape.to_string(),
            q,
            lhs: f64::NAN,
            relation: Relation::AtMost,
            rhs: f64::NAN,
            slack: f64::NAN,
            relative_slack: f64::NAN,
            tolerance: 0.0,
            verdict: Verdict::NotApplicable,
            note: Some(reason.to_string()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// `rhs/lhs` for upper bounds, `lhs/rhs` for lower bounds.
    pub fn ratio(&self) -> f64 {
        if self.relation.upper() {
            self.rhs / self.lhs
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Constants of the model problems at one exponent and dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct References {
    pub q: f64,
    pub dim: usize,
    /// `ω_N`
    pub omega: f64,
    /// `λ_{2,q}(B_1)`
    pub ball_lambda: f64,
    pub ball_error: f64,
    /// `π_{2,q}`
    pub poincare: PoincareConstant,
    #[serde(skip)]
    pub ball: BallExtremal,
}

impl References {
    pub fn compute(q: f64, dim: usize, radial_nodes: usize) -> Result<Self> {
        let ball = onedim::ball_extremal(q, dim, radial_nodes)?;
        let poincare = onedim::pi_2q(q, DEFAULT_FLAT_NODES)?;
        Ok(Self {
            q,
            dim,
            omega: unit_ball_volume(dim),
            ball_lambda: ball.lambda,
            ball_error: ball.error_estimate(),
            poincare,
            ball,
        })
    }

    pub fn for_config(q: f64, dim: usize, config: &SolverConfig) -> Result<Self> {
        Self::compute(q, dim, config.radial_nodes)
    }
}

fn tol(parts: &[f64]) -> f64 {
    parts.iter().sum::<f64>() + BASE_TOLERANCE
}

fn check_refs(refs: &References, q: f64, geo: &GeometrySummary) -> Result<()> {
    if refs.q != q || refs.dim != geo.dim {
        return Err(Error::InvalidInput(format!(
            "references for q = {}, N = {} used with q = {q}, N = {}",
            refs.q, refs.dim, geo.dim
        )));
    }
    Ok(())
}

/// `λ |Ω|^{(2−q)/q} > (π_{2,q} / (2 R))²` for convex shapes, `1 ≤ q ≤ 2`.
pub fn check_lower(shape: &str, q: f64, lambda: &FrequencyResult, geo: &GeometrySummary, refs: &References) -> Result<BoundReport> {
    check_refs(refs, q, geo)?;
    if q > 2.0 {
        return Err(Error::ExponentOutOfRange {
            q,
            range: "[1, 2]".into(),
        });
    }
    if !geo.convex {
        return Ok(BoundReport::not_applicable(InequalityId::Hpweak, shape, q, "requires a convex set"));
    }
    let lhs = lambda.lambda * geo.measure.powf((2.0 - q) / q);
    let rhs = (refs.poincare.value / (2.0 * geo.inradius)).powi(2);
    Ok(BoundReport::new(
        InequalityId::Hpweak,
        shape,
        q,
        lhs,
        Relation::Above,
        rhs,
        tol(&[lambda.error_estimate, 2.0 * refs.poincare.residual]),
    ))
}

/// `λ |Ω|^{(2−q)/q} ≤ ω_N^{(2−q)/q} λ(B_1) / R²`; convexity needed only for `q < 2`.
pub fn check_upper(shape: &str, q: f64, lambda: &FrequencyResult, geo: &GeometrySummary, refs: &References) -> Result<BoundReport> {
    check_refs(refs, q, geo)?;
    if q < 2.0 && !geo.convex {
        return Ok(BoundReport::not_applicable(
            InequalityId::Hpweakup,
            shape,
            q,
            "requires a convex set when q < 2",
        ));
    }
    let e = (2.0 - q) / q;
    let lhs = lambda.lambda * geo.measure.powf(e);
    let rhs = refs.omega.powf(e) * refs.ball_lambda / geo.inradius.powi(2);
    Ok(BoundReport::new(
        InequalityId::Hpweakup,
        shape,
        q,
        lhs,
        Relation::AtMost,
        rhs,
        tol(&[lambda.error_estimate, refs.ball_error]),
    ))
}

/// `|Ω| R² / (N(N+2)) ≤ T < |Ω| R² / 3` for convex shapes.
pub fn check_torsion_double(shape: &str, geo: &GeometrySummary, torsion: &TorsionResult) -> [BoundReport; 2] {
    if !geo.convex {
        return [
            BoundReport::not_applicable(InequalityId::MpsLower, shape, 1.0, "requires a convex set"),
            BoundReport::not_applicable(InequalityId::MpsUpper, shape, 1.0, "requires a convex set"),
        ];
    }
    let n = geo.dim as f64;
    let base = geo.measure * geo.inradius.powi(2);
    let t = tol(&[torsion.error_estimate]);
    [
        BoundReport::new(
            InequalityId::MpsLower,
            shape,
            1.0,
            torsion.torsion,
            Relation::AtLeast,
            base / (n * (n + 2.0)),
            t,
        ),
        BoundReport::new(InequalityId::MpsUpper, shape, 1.0, torsion.torsion, Relation::Below, base / 3.0, t),
    ]
}

/// Faber–Krahn, Hersch–Protter (or the empirical `C_{N,q}` value) and inclusion of the inball.
pub fn check_classical(shape: &str, q: f64, lambda: &FrequencyResult, geo: &GeometrySummary, refs: &References) -> Result<Vec<BoundReport>> {
    check_refs(refs, q, geo)?;
    let n = geo.dim as f64;
    let lam = lambda.lambda;
    let t = tol(&[lambda.error_estimate, refs.ball_error]);
    let mut out = Vec::with_capacity(3);

    let fk_exp = 2.0 / n + (2.0 - q) / q;
    out.push(BoundReport::new(
        InequalityId::Fk,
        shape,
        q,
        lam,
        Relation::AtLeast,
        refs.ball_lambda * refs.omega.powf(fk_exp) * geo.measure.powf(-fk_exp),
        t,
    ));

    let r = geo.inradius;
    if q < 2.0 {
        out.push(BoundReport::not_applicable(
            InequalityId::Hpq,
            shape,
            q,
            "no inradius lower bound exists for q < 2: slabs send the frequency to 0 at fixed inradius",
        ));
    } else if !geo.convex {
        let id = if q == 2.0 { InequalityId::Hp } else { InequalityId::Hpq };
        out.push(BoundReport::not_applicable(id, shape, q, "requires a convex set"));
    } else if q == 2.0 {
        out.push(BoundReport::new(
            InequalityId::Hp,
            shape,
            q,
            lam,
            Relation::Above,
            (std::f64::consts::PI / (2.0 * r)).powi(2),
            tol(&[lambda.error_estimate]),
        ));
    } else {
        // sharp constant unknown: report the scale-free value, bounded below by 0
        let value = lam * r.powf(-solver::scaling_exponent(q, geo.dim));
        out.push(
            BoundReport::new(InequalityId::Hpq, shape, q, value, Relation::Above, 0.0, 0.0)
                .with_note("lambda * R^(2+(2-q)N/q); the family minimum estimates the sharp constant from above"),
        );
    }

    out.push(BoundReport::new(
        InequalityId::Banale,
        shape,
        q,
        lam,
        Relation::AtMost,
        refs.ball_lambda * r.powf(solver::scaling_exponent(q, geo.dim)),
        t,
    ));
    Ok(out)
}

/// `λ(Ω) T(Ω) / |Ω| ≥ (π/2)² / (N(N+2))` for convex shapes.
pub fn check_bfnt(shape: &str, lambda2: &FrequencyResult, torsion: &TorsionResult, geo: &GeometrySummary) -> BoundReport {
    if !geo.convex {
        return BoundReport::not_applicable(InequalityId::BfntImproved, shape, 2.0, "requires a convex set");
    }
    let n = geo.dim as f64;
    let lhs = lambda2.lambda * torsion.torsion / geo.measure;
    let rhs = (std::f64::consts::PI / 2.0).powi(2) / (n * (n + 2.0));
    BoundReport::new(
        InequalityId::BfntImproved,
        shape,
        2.0,
        lhs,
        Relation::AtLeast,
        rhs,
        tol(&[lambda2.error_estimate, torsion.error_estimate]),
    )
}

/// Composite Simpson rule on uniform samples (even number of intervals).
fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n % 2 == 0 && n >= 2);
    let mut s = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Second-order derivative samples: central inside, one-sided at the ends.
fn derivative(samples: &[f64], h: f64) -> Vec<f64> {
    let n = samples.len() - 1;
    (0..=n)
        .map(|i| {
            if i == 0 {
                (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * h)
            } else if i == n {
                (3.0 * samples[n] - 4.0 * samples[n - 1] + samples[n - 2]) / (2.0 * h)
            } else {
                (samples[i + 1] - samples[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// Upper bound on `λ_{2,q}` of a polygon from the trial function `f ∘ j_Ω`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub q: f64,
    pub value: f64,
    /// `∫₀¹ |f'|² t dt`
    pub radial_dirichlet: f64,
    /// `∫₀¹ f^q t dt`
    pub radial_mass: f64,
    /// `Σ b_i ℓ_i`
    pub i_plus: f64,
    /// `Σ ℓ_i / b_i`
    pub i_minus: f64,
    /// Ball frequency from the same quadratures, `2π ∫|f'|² t / (2π ∫ f^q t)^{2/q}`.
    pub ball_lambda: f64,
    /// `ω^{2/q−1} |Ω|^{1−2/q} λ(B_1) / R²`
    pub chain_bound: f64,
}

/// Evaluates the Rayleigh quotient of `x ↦ f(j_Ω(x))` in closed form.
///
/// The gradient of the gauge on the cone over edge `i` is `a_i / b_i`, so both
/// integrals split into a radial factor and an exact boundary sum.
pub fn certificate_upper(poly: &ConvexPolygon, q: f64, profile: &RadialProfile) -> Result<Certificate> {
    if !(1.0..2.0).contains(&q) {
        return Err(Error::ExponentOutOfRange {
            q,
            range: "[1, 2)".into(),
        });
    }
    if profile.dimension != 2 || profile.start != 0.0 || profile.end != 1.0 {
        return Err(Error::InvalidInput("certificate needs a planar radial profile on [0, 1]".into()));
    }
    let mut f = profile.samples.clone();
    if f.len() % 2 == 0 {
        return Err(Error::InvalidInput("profile needs an even number of intervals".into()));
    }
    f.iter_mut().for_each(|v| *v = v.max(0.0));
    let h = profile.spacing();
    let df = derivative(&f, h);
    let t = |i: usize| i as f64 * h;
    let dir: Vec<f64> = df.iter().enumerate().map(|(i, d)| d * d * t(i)).collect();
    let mass: Vec<f64> = f.iter().enumerate().map(|(i, v)| v.powf(q) * t(i)).collect();
    let radial_dirichlet = simpson(&dir, h);
    let radial_mass = simpson(&mass, h);

    let bi = poly.boundary_integrals()?;
    let value = radial_dirichlet * bi.minus / (radial_mass * bi.plus).powf(2.0 / q);

    let two_pi = 2.0 * std::f64::consts::PI;
    let ball_lambda = two_pi * radial_dirichlet / (two_pi * radial_mass).powf(2.0 / q);
    let omega = std::f64::consts::PI;
    let r = poly.inradius().radius;
    let chain_bound = omega.powf(2.0 / q - 1.0) * poly.area().powf(1.0 - 2.0 / q) * ball_lambda / (r * r);
    Ok(Certificate {
        q,
        value,
        radial_dirichlet,
        radial_mass,
        i_plus: bi.plus,
        i_minus: bi.minus,
        ball_lambda,
        chain_bound,
    })
}

/// Domination of the solver value and the chain inequality, for a polygon
/// that is first moved to a Chebyshev center.
pub fn check_certificate(shape: &str, poly: &ConvexPolygon, q: f64, lambda: &FrequencyResult, refs: &References) -> Result<(Certificate, [BoundReport; 2])> {
    if refs.q != q || refs.dim != 2 {
        return Err(Error::InvalidInput("certificate needs planar references at the same q".into()));
    }
    let centered = poly.center_at_chebyshev();
    let cert = certificate_upper(&centered, q, &refs.ball.profile)?;
    let domination = BoundReport::new(
        InequalityId::Certificate,
        shape,
        q,
        cert.value,
        Relation::AtLeast,
        lambda.lambda,
        tol(&[lambda.error_estimate]),
    );
    let chain = BoundReport::new(
        InequalityId::CertificateChain,
        shape,
        q,
        cert.value,
        Relation::AtMost,
        cert.chain_bound,
        BASE_TOLERANCE,
    );
    Ok((cert, [domination, chain]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    BoundedBelowPositive,
    Vanishing,
    BlowingUp,
}

/// One scanned shape: its frequency at the scanned `q` and its geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanInput {
    pub id: String,
    pub lambda: f64,
    pub geometry: GeometrySummary,
    /// Slab length when the shape is a slab.
    pub slab_length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaValue {
    pub alpha: f64,
    pub shape: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub beta: f64,
    pub min: f64,
    pub argmin: String,
    pub max: f64,
    pub argmax: String,
    /// Log-log slope of the slab values against `L` over the two longest slabs.
    pub slab_slope: Option<f64>,
    pub trend: Option<Trend>,
    /// Trend predicted from the position of `alpha` relative to the threshold.
    pub expected: Trend,
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaScanResult {
    pub q: f64,
    pub dim: usize,
    pub alphas: Vec<f64>,
    /// `max{(2−q)/q, 0}`
    pub threshold: f64,
    /// Slopes within this band around zero count as bounded.
    pub slope_band: f64,
    pub values: Vec<AlphaValue>,
    pub summaries: Vec<AlphaSummary>,
}

/// `β = 2 − N(α − (2−q)/q)`
pub fn alpha_beta(q: f64, dim: usize, alpha: f64) -> f64 {
    2.0 - dim as f64 * (alpha - (2.0 - q) / q)
}

/// Scanned functional `R^β λ |Ω|^α`.
pub fn alpha_value(q: f64, alpha: f64, lambda: f64, geo: &GeometrySummary) -> f64 {
    geo.inradius.powf(alpha_beta(q, geo.dim, alpha)) * lambda * geo.measure.powf(alpha)
}

/// Parses `lo:hi:step` into an inclusive grid.
pub fn parse_alpha_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidInput(format!("alpha range must be lo:hi:step, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (lo, hi, step) = (v[0], v[1], v[2]);
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 100_000 {
        return Err(Error::InvalidInput("alpha range has too many points".into()));
    }
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

const SLOPE_BAND: f64 = 0.25;

/// Tabulates `R^β λ |Ω|^α` over the family and classifies the slab trend.
pub fn alpha_scan(family: &[ScanInput], q: f64, alphas: &[f64]) -> Result<AlphaScanResult> {
    if !(q >= 1.0) {
        return Err(Error::ExponentOutOfRange {
            q,
            range: "[1, inf)".into(),
        });
    }
    let dim = family.first().map_or(2, |s| s.geometry.dim);
    let threshold = ((2.0 - q) / q).max(0.0);
    let mut values = Vec::with_capacity(family.len() * alphas.len());
    let mut summaries = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mut min = (f64::INFINITY, String::new());
        let mut max = (f64::NEG_INFINITY, String::new());
        let mut slabs: Vec<(f64, f64)> = Vec::new();
        for s in family {
            let v = alpha_value(q, alpha, s.lambda, &s.geometry);
            if v < min.0 {
                min = (v, s.id.clone());
            }
            if v > max.0 {
                max = (v, s.id.clone());
            }
            if let Some(l) = s.slab_length {
                slabs.push((l, v));
            }
            values.push(AlphaValue {
                alpha,
                shape: s.id.clone(),
                value: v,
            });
        }
        slabs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let slab_slope = (slabs.len() >= 2).then(|| {
            let (l0, v0) = slabs[slabs.len() - 2];
            let (l1, v1) = slabs[slabs.len() - 1];
            (v1 / v0).ln() / (l1 / l0).ln()
        });
        let trend = slab_slope.map(|s| {
            if s < -SLOPE_BAND {
                Trend::Vanishing
            } else if s > SLOPE_BAND {
                Trend::BlowingUp
            } else {
                Trend::BoundedBelowPositive
            }
        });
        let gap = alpha - threshold;
        let expected = if gap < -1e-12 {
            Trend::Vanishing
        } else if gap > 1e-12 {
            Trend::BlowingUp
        } else {
            Trend::BoundedBelowPositive
        };
        summaries.push(AlphaSummary {
            alpha,
            beta: alpha_beta(q, dim, alpha),
            min: min.0,
            argmin: min.1,
            max: max.0,
            argmax: max.1,
            slab_slope,
            trend,
            expected,
            // slopes near the band edge are ambiguous at finite L
            consistent: trend.map(|t| t == expected || gap.abs() <= SLOPE_BAND),
        });
    }
    Ok(AlphaScanResult {
        q,
        dim,
        alphas: alphas.to_vec(),
        threshold,
        slope_band: SLOPE_BAND,
        values,
        summaries,
    })
}

/// Solves every shape of a family at `q` and scans it.
pub fn alpha_scan_family(family: &[NamedShape], q: f64, alphas: &[f64], config: &SolverConfig) -> Result<AlphaScanResult> {
    let inputs = family
        .iter()
        .map(|s| {
            Ok(ScanInput {
                id: s.id.clone(),
                lambda: solver::lambda_2q(&s.shape, q, config)?.lambda,
                geometry: s.shape.summary(),
                slab_length: slab_length(&s.shape),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    alpha_scan(&inputs, q, alphas)
}

/// Length `L` when the shape is congruent to `(−L/2, L/2) × (0, 1)` up to translation.
pub fn slab_length(shape: &Shape) -> Option<f64> {
    let Shape::Polygon(p) = shape else { return None };
    if p.len() != 4 {
        return None;
    }
    let (lo, hi) = p.bounding_box();
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let rect = (p.area() - w * h).abs() <= 1e-12 * w * h;
    (rect && (h - 1.0).abs() <= 1e-12 && w >= 1.0).then_some(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabRow {
    #[serde(rename = "L")]
    pub length: f64,
    pub lambda: f64,
    /// `L^{(2−q)/q} λ` for `q ≤ 2`, `λ` otherwise.
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabAsymptotics {
    pub q: f64,
    pub rows: Vec<SlabRow>,
    /// `π_{2,q}²` when `q ≤ 2`.
    pub limit: Option<f64>,
    /// For `q ≤ 2`: values stay above the limit and approach it monotonically.
    pub monotone: bool,
    /// Relative gap to the limit at the longest slab.
    pub final_gap: Option<f64>,
    /// For `q > 2`: relative change between the two longest slabs.
    pub stabilization: Option<f64>,
    pub holds: bool,
}

/// Gap criterion at the longest slab for `q ≤ 2`.
pub const SLAB_GAP: f64 = 0.10;
/// Stabilization criterion between the two longest slabs for `q > 2`.
pub const SLAB_STABLE: f64 = 0.02;

/// Normalized slab frequencies for increasing `L`.
pub fn slab_asymptotics(q: f64, lengths: &[f64], config: &SolverConfig) -> Result<SlabAsymptotics> {
    if lengths.is_empty() || lengths.iter().any(|l| !(*l >= 1.0)) {
        return Err(Error::InvalidInput("slab lengths must be >= 1".into()));
    }
    let mut ls = lengths.to_vec();
    ls.sort_by(f64::total_cmp);
    let rows = ls
        .iter()
        .map(|&l| {
            let r = solver::lambda_2q(&Shape::Polygon(ConvexPolygon::slab(l)?), q, config)?;
            let value = if q <= 2.0 { l.powf((2.0 - q) / q) * r.lambda } else { r.lambda };
            Ok(SlabRow {
                length: l,
                lambda: r.lambda,
                value,
                error_estimate: r.error_estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    slab_summary(q, rows)
}

/// Checks precomputed slab rows, sorted by length, against the limits.
pub fn slab_summary(q: f64, rows: Vec<SlabRow>) -> Result<SlabAsymptotics> {
    let last = rows.last().ok_or_else(|| Error::InvalidInput("no slab rows".into()))?;
    if q <= 2.0 {
        let limit = onedim::pi_2q(q, DEFAULT_FLAT_NODES)?.value.powi(2);
        // allow each step to wobble by its own discretization error
        let monotone = rows.iter().all(|r| r.value >= limit * (1.0 - r.error_estimate - BASE_TOLERANCE))
            && rows
                .windows(2)
                .all(|w| w[1].value <= w[0].value * (1.0 + w[1].error_estimate + w[0].error_estimate));
        let gap = (last.value - limit).abs() / limit;
        Ok(SlabAsymptotics {
            q,
            limit: Some(limit),
            monotone,
            final_gap: Some(gap),
            stabilization: None,
            holds: monotone && gap < SLAB_GAP,
            rows,
        })
    } else {
        let stab = (rows.len() >= 2).then(|| {
            let a = rows[rows.len() - 2].value;
            (last.value - a).abs() / a
        });
        let holds = last.value > 0.0 && stab.is_some_and(|s| s < SLAB_STABLE);
        Ok(SlabAsymptotics {
            q,
            limit: None,
            monotone: rows.windows(2).all(|w| w[1].value <= w[0].value * (1.0 + w[1].error_estimate)),
            final_gap: None,
            stabilization: stab,
            holds,
            rows,
        })
    }
}

/// Torsion and principal eigenvalue, when the caller already has them.
#[derive(Debug, Clone, Copy, Default)]
pub struct Precomputed<'a> {
    pub torsion: Option<&'a TorsionResult>,
    pub lambda2: Option<&'a FrequencyResult>,
}

/// Every applicable check for one shape at one exponent.
///
/// Torsion and product checks run at `q = 1`; inputs missing from `pre` are
/// solved on demand.
pub fn verify_shape(
    named: &NamedShape,
    q: f64,
    lambda: &FrequencyResult,
    refs: &References,
    config: &SolverConfig,
    pre: Precomputed<'_>,
    only: Option<&[InequalityId]>,
) -> Result<Vec<BoundReport>> {
    let geo = named.shape.summary();
    let id = named.id.as_str();
    let wanted = |i: InequalityId| only.is_none_or(|o| o.contains(&i));
    let mut out = Vec::new();

    for r in check_classical(id, q, lambda, &geo, refs)? {
        if wanted(r.id) {
            out.push(r);
        }
    }
    if wanted(InequalityId::Hpweak) && q <= 2.0 {
        out.push(check_lower(id, q, lambda, &geo, refs)?);
    }
    if wanted(InequalityId::Hpweakup) {
        out.push(check_upper(id, q, lambda, &geo, refs)?);
    }
    let need_torsion = wanted(InequalityId::MpsLower) || wanted(InequalityId::MpsUpper) || wanted(InequalityId::BfntImproved);
    if need_torsion && q == 1.0 {
        let torsion = match pre.torsion {
            Some(t) => *t,
            None => solver::torsion(&named.shape, config)?,
        };
        for r in check_torsion_double(id, &geo, &torsion) {
            if wanted(r.id) {
                out.push(r);
            }
        }
        if wanted(InequalityId::BfntImproved) {
            let lambda2 = match pre.lambda2 {
                Some(l) => *l,
                None => solver::lambda_2q(&named.shape, 2.0, config)?,
            };
            out.push(check_bfnt(id, &lambda2, &torsion, &geo));
        }
    }
    if (wanted(InequalityId::Certificate) || wanted(InequalityId::CertificateChain)) && q < 2.0 {
        match &named.shape {
            Shape::Polygon(p) => {
                let (_, reports) = check_certificate(id, p, q, lambda, refs)?;
                out.extend(reports.into_iter().filter(|r| wanted(r.id)));
            }
            _ => {
                for c in [InequalityId::Certificate, InequalityId::CertificateChain] {
                    if wanted(c) {
                        out.push(BoundReport::not_applicable(c, id, q, "gauge certificate is defined for polygons"));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Computes the frequency and references, then runs [`verify_shape`].
pub fn verify(named: &NamedShape, q: f64, config: &SolverConfig, only: Option<&[InequalityId]>) -> Result<Vec<BoundReport>> {
    let lambda = solver::lambda_2q(&named.shape, q, config)?;
    let refs = References::for_config(q, named.shape.dim(), config)?;
    verify_shape(named, q, &lambda, &refs, config, Precomputed::default(), only)
}
