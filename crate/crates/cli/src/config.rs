use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use freqbound::family::DEFAULT_SEED;
use freqbound::solver::SolverConfig;

/// Everything a suite run depends on. Missing fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Grid spacing; unset means `min(diameter/256, inradius/16)` per shape.
    pub h: Option<f64>,
    /// Relative change of the quotient that stops the iteration.
    pub tol: f64,
    pub max_iter: usize,
    pub radial_nodes: usize,
    pub q: Vec<f64>,
    /// `lo:hi:step`
    pub alpha: String,
    /// Family descriptor, see `freqbound::family`.
    pub family: String,
    /// Extra shape files in the JSON shape schema.
    pub shapes: Vec<PathBuf>,
    pub slab_lengths: Vec<f64>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub jobs: usize,
    /// Random trials per property in the summary section.
    pub property_trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            h: None,
            tol: s.tol,
            max_iter: s.max_iter,
            radial_nodes: s.radial_nodes,
            q: vec![1.0, 1.5, 2.0, 3.0],
            alpha: "-1:3:0.5".into(),
            family: "default".into(),
            shapes: Vec::new(),
            slab_lengths: vec![2.0, 4.0, 8.0, 16.0],
            out_dir: PathBuf::from("freqbound-out"),
            seed: DEFAULT_SEED,
            jobs: 1,
            property_trials: 1000,
        }
    }
}

impl RunConfig {
    /// Reads TOML (`.toml`) or JSON (anything else).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        } else {
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                bail!("h must be positive, got {h}");
            }
        }
        if let Some(q) = self.q.iter().find(|q| !(**q >= 1.0 && q.is_finite())) {
            bail!("q values must be finite and >= 1, got {q}");
        }
        if !(self.tol > 0.0) {
            bail!("tol must be positive");
        }
        if self.jobs == 0 {
            bail!("jobs must be at least 1");
        }
        if self.slab_lengths.iter().any(|l| !(*l >= 1.0)) {
            bail!("slab lengths must be >= 1");
        }
        freqbound::bounds::parse_alpha_range(&self.alpha)?;
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            h: self.h,
            tol: self.tol,
            max_iter: self.max_iter,
            radial_nodes: self.radial_nodes,
            estimate_error: true,
        }
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg: RunConfig = toml::from_str("q = [2.0]\nseed = 5").unwrap();
        assert_eq!(cfg.q, vec![2.0]);
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.family, "default");
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_and_invalid_fields() {
        assert!(toml::from_str::<RunConfig>("colour = 1").is_err());
        let cfg = RunConfig {
            q: vec![0.5],
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            h: Some(-1.0),
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
