use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use qtorus_core::tiling::DEFAULT_CAP;
use qtorus_core::TorusSpec;

use crate::sweep::{Filters, Sweep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Enumerate,
    Components,
    FluxHistogram,
    Spectrum,
    Verify,
}

/// Everything a run needs. Loaded from JSON or assembled from flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    /// Explicit `T(n,m,r)` strings, kept verbatim so a bad one can be
    /// reported against its own text.
    pub specs: Vec<String>,
    pub sweep: Option<Sweep>,
    pub filters: Filters,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Hard cap on the tilings enumerated for one instance.
    pub cap: usize,
    /// `verify` computes forcing spectra only up to this many tilings.
    pub spectrum_limit: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            task: Task::Verify,
            specs: Vec::new(),
            sweep: None,
            filters: Filters::default(),
            output: None,
            cache_dir: None,
            threads: None,
            cap: DEFAULT_CAP,
            spectrum_limit: 100_000,
        }
    }
}

/// One resolved instance: a parsed spec, or the text that failed to parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Spec(TorusSpec),
    Invalid { text: String, error: String },
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Spec(s) => s.to_string(),
            Target::Invalid { text, .. } => text.clone(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Explicit specs in the given order, then the sweep, without repeats.
    /// Filters apply to both and run before anything is enumerated.
    pub fn targets(&self) -> Vec<Target> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let explicit = self.specs.iter().map(|text| match text.parse::<TorusSpec>() {
            Ok(spec) => Target::Spec(spec),
            Err(e) => Target::Invalid { text: text.clone(), error: e.to_string() },
        });
        let swept = self.sweep.iter().flat_map(|s| s.specs()).map(Target::Spec);
        for t in explicit.chain(swept) {
            if let Target::Spec(spec) = t {
                if !self.filters.admits(spec) || !seen.insert(spec) {
                    continue;
                }
            }
            out.push(t);
        }
        out
    }
}
