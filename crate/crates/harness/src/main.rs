use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rarefaction::diagnostics::decay_rate_fit;
use rarelab::config::{parse_file, resolve, ConfigFile};
use rarelab::{execute, Preset};

#[derive(Parser)]
#[command(name = "rarelab", version, about = "Rarefaction-wave stability laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a study and write its artifacts.
    Run {
        /// TOML config, or a manifest.json from an earlier run.
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<Preset>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the effective defaults of a preset (all presets if omitted).
    Describe {
        #[arg(long)]
        preset: Option<Preset>,
    },
    /// Fit a power-law decay rate to one column of a CSV table.
    Fit {
        #[arg(long, default_value = "diagnostics.csv")]
        input: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Vec<f64>,
    },
}

fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(&text).context("parsing manifest")?;
        let cfg = v.get("config").ok_or_else(|| anyhow!("manifest has no `config` object"))?;
        return serde_json::from_value(cfg.clone()).context("manifest config");
    }
    parse_file(&text)
}

fn fit(input: &Path, column: &str, window: &[f64]) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| anyhow!("empty file"))?.split(',').collect();
    let col = header
        .iter()
        .position(|h| *h == column)
        .ok_or_else(|| anyhow!("no column `{column}` in {}", header.join(",")))?;
    let mut series = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cells: Vec<&str> = line.split(',').collect();
        let get = |k: usize| -> Result<f64> {
            cells
                .get(k)
                .ok_or_else(|| anyhow!("line {}: missing cell", n + 2))?
                .trim()
                .parse()
                .map_err(|e| anyhow!("line {}: {e}", n + 2))
        };
        series.push((get(0)?, get(col)?));
    }
    let [lo, hi] = window else { bail!("--window takes two values") };
    let f = decay_rate_fit(&series, (*lo, *hi))?;
    println!(
        "column {column}: slope {:.6}, intercept {:.6}, r2 {:.8}, points {}",
        f.slope, f.intercept, f.r2, f.points
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, preset, out } => {
            let file = match (config, preset) {
                (Some(p), _) => load_config(&p),
                (None, p) => Ok(ConfigFile { preset: Some(p.unwrap_or(Preset::Stability)), ..Default::default() }),
            };
            file.and_then(|f| resolve(&f)).and_then(|exp| execute(&exp, &out)).map(|ex| {
                for c in &ex.checks {
                    println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured);
                }
                if let Some(e) = &ex.error {
                    eprintln!("error: {e}");
                }
                println!("artifacts in {}", out.display());
                match (&ex.error, ex.passed) {
                    (Some(_), _) => 2,
                    (None, true) => 0,
                    (None, false) => 1,
                }
            })
        }
        Command::Describe { preset } => {
            let list = preset.map_or(Preset::ALL.to_vec(), |p| vec![p]);
            list.into_iter()
                .map(|p| {
                    let e = resolve(&ConfigFile { preset: Some(p), ..Default::default() })?;
                    println!("# {}: {}\n{}", p, p.summary(), e.to_toml());
                    Ok(())
                })
                .collect::<Result<Vec<_>>>()
                .map(|_| 0)
        }
        Command::Fit { input, column, window } => fit(&input, &column, &window).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
