//! JSON and CSV renderings of a report. Both are pure functions of the
//! report, so identical runs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::config::Task;
use crate::report::{InstanceRecord, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Both files, named after `output` with `.json` and `.csv` extensions.
    Both,
}

pub fn to_json(report: &VerificationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialises") + "\n"
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn base_columns(inst: &InstanceRecord) -> Vec<String> {
    let c = inst.components.as_ref();
    vec![
        inst.spec.clone(),
        opt(inst.tilings),
        opt(c.map(|c| c.components)),
        opt(c.map(|c| c.singletons)),
        opt(c.map(|c| c.largest_component)),
    ]
}

/// One row per instance; the flux histogram gets one row per flux class.
pub fn to_csv(report: &VerificationReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let base = ["spec", "tilings", "components", "singletons", "largest_component"];
    match report.config.task {
        Task::Enumerate | Task::Components => {
            w.write_record(base)?;
            for inst in &report.instances {
                w.write_record(base_columns(inst))?;
            }
        }
        Task::Spectrum => {
            w.write_record(base.iter().chain(&["spectrum", "gaps"]))?;
            for inst in &report.instances {
                let mut row = base_columns(inst);
                let s = inst.spectrum.as_ref();
                row.push(s.map(|s| join(&s.values)).unwrap_or_default());
                row.push(s.map(|s| join(&s.gaps)).unwrap_or_default());
                w.write_record(row)?;
            }
        }
        Task::Verify => {
            w.write_record(base.iter().chain(&["spectrum", "checks", "passed", "failed"]))?;
            for inst in &report.instances {
                let mut row = base_columns(inst);
                row.push(inst.spectrum.as_ref().map(|s| join(&s.values)).unwrap_or_default());
                row.push(inst.checks.len().to_string());
                row.push(inst.passed().to_string());
                let mut failed: Vec<&str> = inst.checks.iter().filter(|c| !c.passed).map(|c| c.claim).collect();
                if inst.error.is_some() {
                    failed.push("error");
                }
                row.push(join(&failed));
                w.write_record(row)?;
            }
        }
        Task::FluxHistogram => {
            w.write_record(["spec", "a", "b", "tilings", "components"])?;
            for inst in &report.instances {
                for row in inst.flux_histogram.iter().flatten() {
                    w.write_record([
                        inst.spec.clone(),
                        row.a.to_string(),
                        row.b.to_string(),
                        row.tilings.to_string(),
                        row.components.to_string(),
                    ])?;
                }
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes the report and returns the paths written.
pub fn emit(report: &VerificationReport, format: Format, output: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let targets: Vec<(PathBuf, bool)> = match format {
        Format::Json => vec![(output.to_path_buf(), true)],
        Format::Csv => vec![(output.to_path_buf(), false)],
        Format::Both => vec![(output.with_extension("json"), true), (output.with_extension("csv"), false)],
    };
    for (path, json) in &targets {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let body = if *json { to_json(report) } else { to_csv(report)? };
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(targets.into_iter().map(|(p, _)| p).collect())
}
