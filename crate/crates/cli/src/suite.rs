//! Full verification run: compute, verify, scan, slab asymptotics and property summaries.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use freqbound::bounds::{
    self, AlphaScanResult, BoundReport, InequalityId, Precomputed, References, ScanInput, SlabAsymptotics, SlabRow,
    Verdict,
};
use freqbound::family::generate_family;
use freqbound::properties::{run_properties, PropertySummary};
use freqbound::shape::{NamedShape, Shape};
use freqbound::solver::{self, FrequencyResult, SolverConfig, TorsionResult};

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyRecord {
    pub shape: String,
    #[serde(flatten)]
    pub result: FrequencyResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionRecord {
    pub shape: String,
    #[serde(flatten)]
    pub result: TorsionResult,
}

/// A work item that failed; the rest of the suite still runs.
#[derive(Debug, Clone, Serialize)]
pub struct ItemFailure {
    pub shape: String,
    pub q: Option<f64>,
    pub stage: String,
    pub message: String,
}

/// Smallest scale-free value `λ R^{2+(2−q)N/q}` over the family, for `q > 2`.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalConstant {
    pub q: f64,
    pub value: f64,
    pub shape: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub holds: usize,
    pub equality_within_tolerance: usize,
    pub violated: usize,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub shapes: Vec<String>,
    pub frequencies: Vec<FrequencyRecord>,
    pub torsion: Vec<TorsionRecord>,
    pub bounds: Vec<BoundReport>,
    pub alpha_scans: Vec<AlphaScanResult>,
    pub slabs: Vec<SlabAsymptotics>,
    pub hpq_constants: Vec<EmpiricalConstant>,
    pub properties: Vec<PropertySummary>,
    pub failures: Vec<ItemFailure>,
    pub counts: VerdictCounts,
    pub exit_code: i32,
    pub provenance: Provenance,
}

impl SuiteReport {
    /// Minimum relative slack per inequality over reports that hold.
    pub fn min_slack(&self, id: InequalityId) -> Option<f64> {
        self.bounds
            .iter()
            .filter(|b| b.id == id && b.verdict != Verdict::NotApplicable)
            .map(|b| b.relative_slack)
            .reduce(f64::min)
    }
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// Reads a shape file; the id is the file stem.
pub fn load_shape(path: &Path) -> Result<NamedShape> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading shape {}", path.display()))?;
    let shape = Shape::from_json(&text).with_context(|| format!("parsing shape {}", path.display()))?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "shape".into());
    Ok(NamedShape::new(id, shape))
}

pub fn collect_shapes(config: &RunConfig) -> Result<Vec<NamedShape>> {
    let mut shapes = generate_family(&config.family, config.seed)?;
    for p in &config.shapes {
        shapes.push(load_shape(p)?);
    }
    Ok(shapes)
}

fn q_key(q: f64) -> u64 {
    q.to_bits()
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(f))
}

fn verdict_counts(reports: &[BoundReport]) -> VerdictCounts {
    let mut c = VerdictCounts::default();
    for r in reports {
        match r.verdict {
            Verdict::Holds => c.holds += 1,
            Verdict::EqualityWithinTolerance => c.equality_within_tolerance += 1,
            Verdict::Violated => c.violated += 1,
            Verdict::NotApplicable => c.not_applicable += 1,
        }
    }
    c
}

/// 2 if any inequality is violated, 1 if any item failed, 0 otherwise.
pub fn exit_code(counts: &VerdictCounts, failures: usize) -> i32 {
    if counts.violated > 0 {
        2
    } else if failures > 0 {
        1
    } else {
        0
    }
}

/// Runs the configured matrix. Results are ordered by input, independent of `jobs`.
pub fn run_suite(config: &RunConfig) -> Result<SuiteReport> {
    config.validate()?;
    let started = now_ms();
    let shapes = collect_shapes(config)?;
    let solver_cfg = config.solver();
    let mut failures = Vec::new();

    let (frequencies, torsion, bounds, alpha_scans, slabs, hpq) = if shapes.is_empty() {
        (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new())
    } else {
        in_pool(config.jobs, || run_matrix(config, &shapes, &solver_cfg, &mut failures))??
    };

    let properties = if config.property_trials > 0 && !shapes.is_empty() {
        run_properties(config.seed, config.property_trials)?
    } else {
        Vec::new()
    };
    for p in properties.iter().filter(|p| !p.passed()) {
        failures.push(ItemFailure {
            shape: String::new(),
            q: None,
            stage: "properties".into(),
            message: format!("{}: {} of {} trials failed", p.name, p.failures, p.trials),
        });
    }

    let counts = verdict_counts(&bounds);
    let code = exit_code(&counts, failures.len());
    Ok(SuiteReport {
        config: config.clone(),
        shapes: shapes.iter().map(|s| s.id.clone()).collect(),
        frequencies,
        torsion,
        bounds,
        alpha_scans,
        slabs,
        hpq_constants: hpq,
        properties,
        failures,
        counts,
        exit_code: code,
        provenance: Provenance {
            config_hash: config.hash(),
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: started,
            finished_unix_ms: now_ms(),
        },
    })
}

type Matrix = (
    Vec<FrequencyRecord>,
    Vec<TorsionRecord>,
    Vec<BoundReport>,
    Vec<AlphaScanResult>,
    Vec<SlabAsymptotics>,
    Vec<EmpiricalConstant>,
);

fn run_matrix(config: &RunConfig, shapes: &[NamedShape], cfg: &SolverConfig, failures: &mut Vec<ItemFailure>) -> Result<Matrix> {
    let mut qs = config.q.clone();
    // the product check at q = 1 needs the principal eigenvalue as well
    let extra_q2 = qs.contains(&1.0) && !qs.contains(&2.0);
    if extra_q2 {
        qs.push(2.0);
    }

    let items: Vec<(usize, f64)> = (0..shapes.len()).flat_map(|i| qs.iter().map(move |&q| (i, q))).collect();
    let solved: Vec<_> = items
        .par_iter()
        .map(|&(i, q)| solver::lambda_2q(&shapes[i].shape, q, cfg))
        .collect();
    let mut lambdas: BTreeMap<(usize, u64), FrequencyResult> = BTreeMap::new();
    let mut frequencies = Vec::new();
    for (&(i, q), r) in items.iter().zip(solved) {
        match r {
            Ok(r) => {
                lambdas.insert((i, q_key(q)), r);
                if !(extra_q2 && q == 2.0) {
                    frequencies.push(FrequencyRecord {
                        shape: shapes[i].id.clone(),
                        result: r,
                    });
                }
            }
            Err(e) => failures.push(ItemFailure {
                shape: shapes[i].id.clone(),
                q: Some(q),
                stage: "compute".into(),
                message: e.to_string(),
            }),
        }
    }

    let mut torsion = Vec::new();
    let mut torsions: BTreeMap<usize, TorsionResult> = BTreeMap::new();
    if config.q.contains(&1.0) {
        let solved: Vec<_> = shapes.par_iter().map(|s| solver::torsion(&s.shape, cfg)).collect();
        for (i, r) in solved.into_iter().enumerate() {
            match r {
                Ok(t) => {
                    torsions.insert(i, t);
                    torsion.push(TorsionRecord {
                        shape: shapes[i].id.clone(),
                        result: t,
                    });
                }
                Err(e) => failures.push(ItemFailure {
                    shape: shapes[i].id.clone(),
                    q: Some(1.0),
                    stage: "torsion".into(),
                    message: e.to_string(),
                }),
            }
        }
    }

    let mut dims: Vec<usize> = shapes.iter().map(|s| s.shape.dim()).collect();
    dims.sort_unstable();
    dims.dedup();
    let ref_items: Vec<(f64, usize)> = config.q.iter().flat_map(|&q| dims.iter().map(move |&d| (q, d))).collect();
    let computed: Vec<_> = ref_items
        .par_iter()
        .map(|&(q, d)| References::for_config(q, d, cfg))
        .collect();
    let mut refs: BTreeMap<(u64, usize), References> = BTreeMap::new();
    for (&(q, d), r) in ref_items.iter().zip(computed) {
        match r {
            Ok(r) => {
                refs.insert((q_key(q), d), r);
            }
            Err(e) => failures.push(ItemFailure {
                shape: String::new(),
                q: Some(q),
                stage: format!("references N={d}"),
                message: e.to_string(),
            }),
        }
    }

    let check_items: Vec<(usize, f64)> = (0..shapes.len()).flat_map(|i| config.q.iter().map(move |&q| (i, q))).collect();
    let checked: Vec<_> = check_items
        .par_iter()
        .map(|&(i, q)| {
            let s = &shapes[i];
            let Some(lambda) = lambdas.get(&(i, q_key(q))) else { return Ok(Vec::new()) };
            let Some(r) = refs.get(&(q_key(q), s.shape.dim())) else { return Ok(Vec::new()) };
            let pre = Precomputed {
                torsion: torsions.get(&i),
                lambda2: lambdas.get(&(i, q_key(2.0))),
            };
            bounds::verify_shape(s, q, lambda, r, cfg, pre, None)
        })
        .collect();
    let mut reports = Vec::new();
    for (&(i, q), r) in check_items.iter().zip(checked) {
        match r {
            Ok(v) => reports.extend(v),
            Err(e) => failures.push(ItemFailure {
                shape: shapes[i].id.clone(),
                q: Some(q),
                stage: "verify".into(),
                message: e.to_string(),
            }),
        }
    }

    let alphas = bounds::parse_alpha_range(&config.alpha)?;
    let mut scans = Vec::new();
    for &q in &config.q {
        let inputs: Vec<ScanInput> = shapes
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                lambdas.get(&(i, q_key(q))).map(|l| ScanInput {
                    id: s.id.clone(),
                    lambda: l.lambda,
                    geometry: s.shape.summary(),
                    slab_length: bounds::slab_length(&s.shape),
                })
            })
            .collect();
        if !inputs.is_empty() {
            scans.push(bounds::alpha_scan(&inputs, q, &alphas)?);
        }
    }

    let mut slabs = Vec::new();
    if !config.slab_lengths.is_empty() {
        let mut lengths = config.slab_lengths.clone();
        lengths.sort_by(f64::total_cmp);
        lengths.dedup();
        for &q in &config.q {
            match slab_rows(q, &lengths, shapes, &lambdas, cfg).and_then(|rows| Ok(bounds::slab_summary(q, rows)?)) {
                Ok(s) => slabs.push(s),
                Err(e) => failures.push(ItemFailure {
                    shape: "slabs".into(),
                    q: Some(q),
                    stage: "slab asymptotics".into(),
                    message: e.to_string(),
                }),
            }
        }
    }

    let mut hpq = Vec::new();
    for &q in config.q.iter().filter(|q| **q > 2.0) {
        let best = reports
            .iter()
            .filter(|r| r.id == InequalityId::Hpq && r.q == q && r.verdict != Verdict::NotApplicable)
            .min_by(|a, b| a.lhs.total_cmp(&b.lhs));
        if let Some(b) = best {
            hpq.push(EmpiricalConstant {
                q,
                value: b.lhs,
                shape: b.shape.clone(),
            });
        }
    }

    Ok((frequencies, torsion, reports, scans, slabs, hpq))
}

/// Slab rows at `q`, reusing family solves when the slab is already present.
fn slab_rows(
    q: f64,
    lengths: &[f64],
    shapes: &[NamedShape],
    lambdas: &BTreeMap<(usize, u64), FrequencyResult>,
    cfg: &SolverConfig,
) -> Result<Vec<SlabRow>> {
    let solved: Vec<Result<SlabRow>> = lengths
        .par_iter()
        .map(|&l| {
            let known = shapes
                .iter()
                .enumerate()
                .find(|(_, s)| bounds::slab_length(&s.shape) == Some(l))
                .and_then(|(i, _)| lambdas.get(&(i, q_key(q))).copied());
            let r = match known {
                Some(r) => r,
                None => solver::lambda_2q(&Shape::Polygon(freqbound::geometry::ConvexPolygon::slab(l)?), q, cfg)?,
            };
            let value = if q <= 2.0 { l.powf((2.0 - q) / q) * r.lambda } else { r.lambda };
            Ok(SlabRow {
                length: l,
                lambda: r.lambda,
                value,
                error_estimate: r.error_estimate,
            })
        })
        .collect();
    solved.into_iter().collect()
}
