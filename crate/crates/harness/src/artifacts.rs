//! Output directory layout: `manifest.json`, `report.txt`, `diagnostics.csv`,
//! study tables and `checkpoints/`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rarefaction::diagnostics::write_csv;
use rarefaction::solver::worker_threads;
use serde_json::{json, Value};

use crate::config::Experiment;
use crate::study::{run_study, Check, StudyOutput};

/// Thread-count variable read by the solver's thread pool.
pub const THREADS_ENV: &str = "RAYON_NUM_THREADS";

pub const MANIFEST: &str = "manifest.json";
pub const REPORT: &str = "report.txt";
pub const DIAGNOSTICS: &str = "diagnostics.csv";

#[derive(Debug)]
pub struct Execution {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub manifest: Value,
    pub artifacts: Vec<PathBuf>,
}

fn derived(exp: &Experiment) -> Value {
    let Ok(d) = exp.riemann_data() else { return Value::Null };
    json!({
        "alpha": d.alpha,
        "w_minus": d.w_minus,
        "w_plus": d.w_plus,
        "dx": 2.0 * exp.grid.lx / exp.grid.nx as f64,
        "dy": 1.0 / exp.grid.ny as f64,
    })
}

/// Runs the experiment's study and writes every artifact under `out`.
/// Study failures are recorded in the manifest rather than returned.
pub fn execute(exp: &Experiment, out: &Path) -> Result<Execution> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let (output, error) = match run_study(exp, Some(out)) {
        Ok(o) => {
            let e = o.error.clone();
            (o, e)
        }
        Err(e) => (StudyOutput::default(), Some(format!("{e:#}"))),
    };

    let mut artifacts = Vec::new();
    for t in &output.tables {
        let p = out.join(&t.file);
        fs::write(&p, &t.contents).with_context(|| format!("writing {}", p.display()))?;
        artifacts.push(p);
    }
    if !output.records.is_empty() {
        let p = out.join(DIAGNOSTICS);
        let mut buf = Vec::new();
        write_csv(&output.records, &mut buf)?;
        fs::write(&p, buf).with_context(|| format!("writing {}", p.display()))?;
        artifacts.push(p);
    }
    artifacts.extend(output.checkpoints.iter().cloned());

    let passed = error.is_none() && !output.checks.is_empty() && output.checks.iter().all(|c| c.passed);
    let report_path = out.join(REPORT);
    fs::write(&report_path, report(exp, &output.checks, error.as_deref()))?;
    artifacts.push(report_path);

    let rel = |p: &PathBuf| p.strip_prefix(out).unwrap_or(p).display().to_string();
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "preset": exp.preset,
        "study": exp.run.study,
        "config": exp,
        "derived": derived(exp),
        "threads": {
            "env": THREADS_ENV,
            "value": std::env::var(THREADS_ENV).ok(),
            "workers": worker_threads(),
        },
        "status": if error.is_some() { "error" } else if passed { "passed" } else { "failed" },
        "error": error,
        "checks": output.checks,
        "summary": output.summary,
        "artifacts": artifacts.iter().map(rel).chain([MANIFEST.to_string()]).collect::<Vec<_>>(),
    });
    let manifest_path = out.join(MANIFEST);
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    artifacts.push(manifest_path);
    Ok(Execution { passed, checks: output.checks, error, manifest, artifacts })
}

pub fn report(exp: &Experiment, checks: &[Check], error: Option<&str>) -> String {
    let mut s = format!("study: {} (preset {})\n", exp.run.study, exp.preset);
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        s += &format!("[{tag}] {}: {} (expected {})\n", c.name, c.measured, c.expected);
    }
    if let Some(e) = error {
        s += &format!("[FAIL] run error: {e}\n");
    }
    let n = checks.iter().filter(|c| c.passed).count();
    s += &format!("{n}/{} checks passed\n", checks.len());
    s
}
