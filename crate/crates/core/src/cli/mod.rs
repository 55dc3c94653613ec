//! Command-line front end.

mod analyze;
mod config;

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::classify::{sweep, GridSpec, SweepRow};
use crate::error::{LabError, Result};
use crate::map::{periodic_orbits, MAX_PERIOD};

pub use analyze::analyze;
pub use config::{parse_config_text, CommonArgs, Format, RunConfig, THREADS_ENV};

/// Output files as `(name, contents)` in emission order.
pub type Artifacts = Vec<(String, String)>;

#[derive(Parser, Debug)]
#[command(name = "lozi-lab", version, about = "Exact computations for the Lozi map")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Manifolds, classification, trapping polygon and figures for one (a, b).
    Analyze(CommonArgs),
    /// Periodic orbits up to a period.
    Orbits {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest period listed (defaults to the orbit cap).
        #[arg(long, short = 'n')]
        period: Option<usize>,
    },
    /// Classification over a rational grid, resumable.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// `start:step:count` for a.
        #[arg(long, allow_hyphen_values = true)]
        a_grid: Option<String>,
        /// `start:step:count` for b.
        #[arg(long, allow_hyphen_values = true)]
        b_grid: Option<String>,
    },
}

pub fn write_artifacts(dir: &Path, files: &Artifacts) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (name, text) in files {
        let p = dir.join(name);
        fs::write(&p, text)?;
        out.push(p);
    }
    Ok(out)
}

/// `analyze`: writes the report and figures; returns the exit code.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<i32> {
    let (report, files, code) = analyze(cfg);
    for p in write_artifacts(&cfg.out, &files)? {
        println!("wrote {}", p.display());
    }
    if let Some(r) = report["verdict"]["regime"].as_str() {
        println!("regime: {r}");
    }
    if let Some(msg) = report["error"]["message"].as_str() {
        eprintln!("error: {msg}");
    }
    Ok(code)
}

/// `orbits`: writes `orbits.json`.
pub fn cmd_orbits(cfg: &RunConfig, period: Option<usize>) -> Result<i32> {
    let cap = cfg.orbit_cap.min(MAX_PERIOD);
    let n = match period.or(cfg.extra.get("period").map(|s| s.parse()).transpose().map_err(|_| LabError::Config("bad period".into()))?) {
        Some(n) => n,
        None => cap,
    };
    if n == 0 || n > cap {
        return Err(LabError::Config(format!("period {n} is outside 1..={cap} (orbit cap)")));
    }
    let params = cfg.params()?;
    let orbits = periodic_orbits(&params, n)?;
    let doc = json!({
        "parameters": { "a": params.a_rational().to_string(), "b": params.b_rational().to_string() },
        "max_period": n,
        "count": orbits.len(),
        "orbits": orbits,
    });
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    for p in write_artifacts(&cfg.out, &vec![("orbits.json".into(), text)])? {
        println!("wrote {}", p.display());
    }
    println!("{} orbits of period ≤ {n}", orbits.len());
    Ok(0)
}

pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_MANIFEST: &str = "sweep.manifest.jsonl";

fn grid_key(a: &str, b: &str, cfg: &RunConfig) -> String {
    format!("a={a};b={b};mode={:?};classify_depth={};homoclinic_depth={}", cfg.mode, cfg.classify_depth, cfg.homoclinic_depth)
}

/// Completed rows of an earlier run with the same grid.
fn read_manifest(path: &Path, key: &str) -> Result<Vec<SweepRow>> {
    let Ok(f) = fs::File::open(path) else { return Ok(Vec::new()) };
    let mut lines = std::io::BufReader::new(f).lines();
    match lines.next() {
        Some(Ok(first)) if serde_json::from_str::<serde_json::Value>(&first).ok().and_then(|v| v["grid"].as_str().map(String::from)).as_deref() == Some(key) => {}
        Some(_) => return Err(LabError::Config(format!("{} belongs to a different sweep", path.display()))),
        None => return Ok(Vec::new()),
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        // a torn final line from an interrupted run is dropped
        if let Ok(r) = serde_json::from_str::<SweepRow>(&line) {
            rows.push(r);
        }
    }
    Ok(rows)
}

/// `sweep`: classifies the grid, appending each row to the manifest as it
/// completes, then writes `sweep.csv` in grid order.
pub fn cmd_sweep(cfg: &RunConfig, a_grid: Option<&str>, b_grid: Option<&str>) -> Result<i32> {
    let a = a_grid.or(cfg.extra.get("a_grid").map(String::as_str)).ok_or_else(|| LabError::Config("--a-grid is required".into()))?;
    let b = b_grid.or(cfg.extra.get("b_grid").map(String::as_str)).ok_or_else(|| LabError::Config("--b-grid is required".into()))?;
    let grid = GridSpec::parse(a, b)?;
    fs::create_dir_all(&cfg.out)?;
    let manifest = cfg.out.join(SWEEP_MANIFEST);
    let key = grid_key(a, b, cfg);
    let mut rows = read_manifest(&manifest, &key)?;
    rows.retain(|r| r.index < grid.len());
    let done: HashSet<usize> = rows.iter().map(|r| r.index).collect();
    let mut file = fs::OpenOptions::new().create(true).append(true).open(&manifest)?;
    if rows.is_empty() {
        file.set_len(0)?;
        writeln!(file, "{}", json!({ "grid": key }))?;
    }
    let skipped = done.len();
    sweep(&grid, cfg.mode, &cfg.classify_budgets(), cfg.threads, &done, |row| {
        writeln!(file, "{}", serde_json::to_string(&row).expect("serializable"))?;
        file.flush()?;
        rows.push(row);
        Ok(())
    })?;
    rows.sort_by_key(|r| r.index);
    rows.dedup_by_key(|r| r.index);
    let mut csv = String::from(SweepRow::HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    let path = cfg.out.join(SWEEP_CSV);
    fs::write(&path, csv)?;
    println!("wrote {} ({} rows, {} resumed)", path.display(), rows.len(), skipped);
    Ok(0)
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let threads_env = std::env::var(THREADS_ENV).ok();
    let outcome = match &cli.command {
        Command::Analyze(common) => RunConfig::resolve(common, threads_env.as_deref()).and_then(|cfg| cmd_analyze(&cfg)),
        Command::Orbits { common, period } => {
            RunConfig::resolve(common, threads_env.as_deref()).and_then(|cfg| cmd_orbits(&cfg, *period))
        }
        Command::Sweep { common, a_grid, b_grid } => RunConfig::resolve(common, threads_env.as_deref())
            .and_then(|cfg| cmd_sweep(&cfg, a_grid.as_deref(), b_grid.as_deref())),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
