//! Configuration, suite orchestration and report writers behind the `freqbound` binary.

pub mod config;
pub mod output;
pub mod suite;

pub use config::RunConfig;
pub use suite::{run_suite, SuiteReport};

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use freqbound::family::generate_family;
use freqbound::shape::{NamedShape, Shape, ShapeSpec};

/// Resolves a shape argument: a JSON file, inline JSON, or a family item naming one shape.
pub fn resolve_shape(arg: &str, seed: u64) -> Result<NamedShape> {
    let path = Path::new(arg);
    if path.is_file() {
        return suite::load_shape(path);
    }
    if arg.trim_start().starts_with('{') {
        return Ok(NamedShape::new("inline", Shape::from_json(arg)?));
    }
    let mut family = generate_family(arg, seed).with_context(|| format!("{arg:?} is neither a file, JSON, nor a family item"))?;
    if family.len() != 1 {
        bail!("{arg:?} describes {} shapes, expected one", family.len());
    }
    Ok(family.remove(0))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyEntry {
    id: String,
    shape: ShapeSpec,
}

/// Resolves a family argument: a JSON file holding `[{"id": .., "shape": {..}}, ..]`,
/// a text file holding a descriptor, or a descriptor.
pub fn resolve_family(arg: &str, seed: u64) -> Result<Vec<NamedShape>> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(generate_family(arg, seed)?);
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        let entries: Vec<FamilyEntry> = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        entries
            .into_iter()
            .map(|e| Ok(NamedShape::new(e.id, Shape::try_from(&e.shape)?)))
            .collect()
    } else {
        Ok(generate_family(text.trim(), seed)?)
    }
}
