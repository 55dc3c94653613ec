use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use crate::budget::Budget;
use crate::classify::ClassifyBudgets;
use crate::error::{LabError, Result};
use crate::map::{NumericMode, Params};

pub const THREADS_ENV: &str = "LOZI_LAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Svg,
    Csv,
    Json,
}

impl Format {
    fn parse_list(text: &str) -> Result<Vec<Format>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            out.push(match part.to_ascii_lowercase().as_str() {
                "svg" => Format::Svg,
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => return Err(LabError::Config(format!("unknown format `{other}`"))),
            });
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to built-in defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// `exact` or `float`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Arc depth of the computed manifolds.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Number of `L²` iterates of the trapping polygon.
    #[arg(long)]
    pub iterates: Option<usize>,
    #[arg(long)]
    pub orbit_cap: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated list of svg, csv, json.
    #[arg(long)]
    pub format: Option<String>,
    /// File of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub homoclinic_depth: Option<usize>,
    #[arg(long)]
    pub classify_depth: Option<usize>,
    #[arg(long)]
    pub max_bits: Option<u64>,
    #[arg(long)]
    pub max_vertices: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub a: String,
    pub b: String,
    pub mode: NumericMode,
    pub depth: usize,
    pub iterates: usize,
    pub orbit_cap: usize,
    pub homoclinic_depth: usize,
    pub classify_depth: usize,
    pub max_bits: u64,
    pub max_vertices: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub formats: Vec<Format>,
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub extra: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "a",
    "b",
    "mode",
    "precision_bits",
    "depth",
    "iterates",
    "orbit_cap",
    "out",
    "format",
    "homoclinic_depth",
    "classify_depth",
    "max_bits",
    "max_vertices",
    "threads",
    "a_grid",
    "b_grid",
    "period",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(LabError::Config(format!("line {}: expected key = value", n + 1)));
        };
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(LabError::Config(format!("line {}: unknown key `{key}`", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn pick<T: std::str::FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(s) => s.parse().map_err(|_| LabError::Config(format!("bad value `{s}` for {key}"))),
        None => Ok(default),
    }
}

fn positive(v: usize, key: &str) -> Result<usize> {
    if v == 0 {
        return Err(LabError::Config(format!("{key} must be positive")));
    }
    Ok(v)
}

impl RunConfig {
    /// Merges flags over the config file over defaults; `threads_env` is the
    /// value of the thread-count environment variable, if set.
    pub fn resolve(args: &CommonArgs, threads_env: Option<&str>) -> Result<Self> {
        let file = match &args.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let a = pick(args.a.clone(), &file, "a", String::new())?;
        let b = pick(args.b.clone(), &file, "b", String::new())?;
        let mode_name = pick(args.mode.clone(), &file, "mode", "exact".to_string())?;
        let mode = match mode_name.to_ascii_lowercase().as_str() {
            "exact" => NumericMode::Exact,
            "float" => NumericMode::Float { precision_bits: pick(args.precision_bits, &file, "precision_bits", 64)? },
            other => return Err(LabError::Config(format!("unknown mode `{other}`"))),
        };
        if let NumericMode::Float { precision_bits } = mode {
            if precision_bits < 53 {
                return Err(LabError::Config("precision_bits must be at least 53".into()));
            }
        }
        let default_threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let threads = match threads_env {
            Some(s) => s.trim().parse().map_err(|_| LabError::Config(format!("bad {THREADS_ENV} value `{s}`")))?,
            None => pick(None, &file, "threads", default_threads)?,
        };
        let formats = Format::parse_list(&pick(args.format.clone(), &file, "format", "svg,csv,json".to_string())?)?;
        let mut extra = BTreeMap::new();
        for k in ["a_grid", "b_grid", "period"] {
            if let Some(v) = file.get(k) {
                extra.insert(k.to_string(), v.clone());
            }
        }
        Ok(RunConfig {
            a,
            b,
            mode,
            depth: positive(pick(args.depth, &file, "depth", 12)?, "depth")?,
            iterates: positive(pick(args.iterates, &file, "iterates", 10)?, "iterates")?,
            orbit_cap: positive(pick(args.orbit_cap, &file, "orbit_cap", 14)?, "orbit_cap")?,
            homoclinic_depth: positive(pick(args.homoclinic_depth, &file, "homoclinic_depth", 30)?, "homoclinic_depth")?,
            classify_depth: positive(pick(args.classify_depth, &file, "classify_depth", 40)?, "classify_depth")?,
            max_bits: pick(args.max_bits, &file, "max_bits", Budget::default().max_bits)?,
            max_vertices: positive(pick(args.max_vertices, &file, "max_vertices", Budget::default().max_vertices)?, "max_vertices")?,
            out: pick(args.out.clone(), &file, "out", PathBuf::from("."))?,
            formats,
            threads: positive(threads, "threads")?,
            extra,
        })
    }

    pub fn params(&self) -> Result<Params> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(LabError::Config("both --a and --b are required".into()));
        }
        Params::from_text(&self.a, &self.b, self.mode)
    }

    pub fn budget(&self) -> Budget {
        Budget { max_vertices: self.max_vertices, max_bits: self.max_bits }
    }

    pub fn classify_budgets(&self) -> ClassifyBudgets {
        let d = ClassifyBudgets::default();
        ClassifyBudgets {
            crossing_depth: self.classify_depth,
            homoclinic_u_depth: self.homoclinic_depth,
            homoclinic_s_depth: self.homoclinic_depth,
            orbit_cap: self.orbit_cap.min(d.orbit_cap),
            budget: Budget { max_vertices: self.max_vertices.min(d.budget.max_vertices), max_bits: self.max_bits },
            ..d
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}
