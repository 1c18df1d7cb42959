use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use qtorus_core::{CacheStatus, ComponentSummary, Spectrum};

use crate::config::{ExperimentConfig, Task};
use crate::sweep::{Filters, Sweep};

/// Bumped on any incompatible change to the JSON layout.
pub const SCHEMA_VERSION: &str = "qtorus-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub code_version: &'static str,
    pub config: ConfigEcho,
    pub instances: Vec<InstanceRecord>,
}

/// The parts of the config that affect results. Paths and thread counts are
/// left out so that reports from different machines compare equal.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub task: Task,
    pub specs: Vec<String>,
    pub sweep: Option<String>,
    pub filters: Filters,
    pub cap: usize,
    pub spectrum_limit: usize,
}

impl From<&ExperimentConfig> for ConfigEcho {
    fn from(c: &ExperimentConfig) -> Self {
        ConfigEcho {
            task: c.task,
            specs: c.specs.clone(),
            sweep: c.sweep.as_ref().map(Sweep::to_string),
            filters: c.filters,
            cap: c.cap,
            spectrum_limit: c.spectrum_limit,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InstanceRecord {
    pub spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartite: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilings: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux_histogram: Option<Vec<FluxRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    // Both differ between cold and warm runs, so they stay out of the files.
    #[serde(skip)]
    pub cache: Option<CacheStatus>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl InstanceRecord {
    pub fn new(spec: String) -> Self {
        InstanceRecord { spec, ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FluxRow {
    pub a: i64,
    pub b: i64,
    pub tilings: usize,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRecord {
    pub values: Vec<u32>,
    pub gaps: Vec<u32>,
    pub counts: BTreeMap<u32, usize>,
    pub interval: bool,
}

impl From<&Spectrum> for SpectrumRecord {
    fn from(s: &Spectrum) -> Self {
        SpectrumRecord {
            values: s.values(),
            gaps: s.gaps(),
            counts: s.counts.clone(),
            interval: !s.counts.is_empty() && s.gaps().is_empty(),
        }
    }
}

/// Outcome of one claim on one instance. A failure names the claim and, when
/// there is one, the tilings (as hex) that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn pass(claim: &'static str, detail: impl Into<String>) -> Self {
        Check { claim, passed: true, detail: detail.into(), witnesses: Vec::new() }
    }

    pub fn fail(claim: &'static str, detail: impl Into<String>, witnesses: Vec<String>) -> Self {
        Check { claim, passed: false, detail: detail.into(), witnesses }
    }
}

impl VerificationReport {
    pub fn new(config: &ExperimentConfig, instances: Vec<InstanceRecord>) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            code_version: env!("CARGO_PKG_VERSION"),
            config: config.into(),
            instances,
        }
    }

    pub fn passed(&self) -> bool {
        self.instances.iter().all(InstanceRecord::passed)
    }

    pub fn check_count(&self) -> usize {
        self.instances.iter().map(|i| i.checks.len()).sum()
    }

    /// `(spec, message)` for every error and failed check.
    pub fn failures(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for inst in &self.instances {
            if let Some(e) = &inst.error {
                out.push((inst.spec.clone(), format!("error: {e}")));
            }
            for c in inst.checks.iter().filter(|c| !c.passed) {
                out.push((inst.spec.clone(), format!("{}: {}", c.claim, c.detail)));
            }
        }
        out
    }
}
