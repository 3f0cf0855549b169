//! Report files. Floats are written in shortest round-trip form in every format.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use freqbound::bounds::{AlphaScanResult, BoundReport, SlabAsymptotics};

use crate::suite::{FrequencyRecord, SuiteReport, TorsionRecord};

/// NaN marks a missing value and becomes an empty field, matching `null` in JSON.
fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn bounds_csv(reports: &[BoundReport], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "id",
        "shape",
        "q",
        "lhs",
        "relation",
        "rhs",
        "slack",
        "relative_slack",
        "tolerance",
        "verdict",
        "note",
    ])?;
    for r in reports {
        out.write_record([
            r.id.as_str().to_string(),
            r.shape.clone(),
            num(r.q),
            num(r.lhs),
            r.relation.symbol().to_string(),
            num(r.rhs),
            num(r.slack),
            num(r.relative_slack),
            num(r.tolerance),
            r.verdict.to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn frequencies_csv(records: &[FrequencyRecord], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "shape",
        "q",
        "lambda",
        "h",
        "iterations",
        "residual",
        "norm_check",
        "unknowns",
        "error_estimate",
        "equation_residual",
        "linear_iterations",
    ])?;
    for f in records {
        let r = &f.result;
        out.write_record([
            f.shape.clone(),
            num(r.q),
            num(r.lambda),
            num(r.h),
            r.iterations.to_string(),
            num(r.residual),
            num(r.norm_check),
            r.unknowns.to_string(),
            num(r.error_estimate),
            num(r.equation_residual),
            r.linear_iterations.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn torsion_csv(records: &[TorsionRecord], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["shape", "torsion", "h", "unknowns", "cg_iterations", "error_estimate"])?;
    for t in records {
        let r = &t.result;
        out.write_record([
            t.shape.clone(),
            num(r.torsion),
            num(r.h),
            r.unknowns.to_string(),
            r.cg_iterations.to_string(),
            num(r.error_estimate),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Plot table with columns `alpha`, `shape`, `value`.
pub fn alpha_tsv(scan: &AlphaScanResult, mut w: impl Write) -> Result<()> {
    writeln!(w, "alpha\tshape\tvalue")?;
    for v in &scan.values {
        writeln!(w, "{}\t{}\t{}", num(v.alpha), v.shape, num(v.value))?;
    }
    Ok(())
}

/// Columns `q`, `L`, `lambda`, `value`, `error_estimate`, `limit`.
pub fn slabs_tsv(slabs: &[SlabAsymptotics], mut w: impl Write) -> Result<()> {
    writeln!(w, "q\tL\tlambda\tvalue\terror_estimate\tlimit")?;
    for s in slabs {
        for r in &s.rows {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                num(s.q),
                num(r.length),
                num(r.lambda),
                num(r.value),
                num(r.error_estimate),
                opt(s.limit)
            )?;
        }
    }
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<fs::File> {
    let p = dir.join(name);
    fs::File::create(&p).with_context(|| format!("creating {}", p.display()))
}

/// Writes `report.json`, the CSV tables and one TSV plot table per scanned `q`.
pub fn write_suite(report: &SuiteReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    create(dir, "report.json")?.write_all(json.as_bytes())?;
    written.push(dir.join("report.json"));

    bounds_csv(&report.bounds, create(dir, "bounds.csv")?)?;
    written.push(dir.join("bounds.csv"));
    frequencies_csv(&report.frequencies, create(dir, "frequencies.csv")?)?;
    written.push(dir.join("frequencies.csv"));
    torsion_csv(&report.torsion, create(dir, "torsion.csv")?)?;
    written.push(dir.join("torsion.csv"));
    for scan in &report.alpha_scans {
        let name = format!("alpha_scan_q{}.tsv", num(scan.q));
        alpha_tsv(scan, create(dir, &name)?)?;
        written.push(dir.join(name));
    }
    slabs_tsv(&report.slabs, create(dir, "slabs.tsv")?)?;
    written.push(dir.join("slabs.tsv"));
    Ok(written)
}
