use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use basins::basins::Semantics;
use basins::ensemble::TargetSpec;
use basins::model::parse_cost;
use basins::{BudgetMode, Cost};
use clap::Args;

/// Options shared by every subcommand. Each can also come from `--config`.
#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    /// System JSON (`.json`) or ensemble track CSV
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// How track data becomes a system: pointcloud | timeext
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// max | sum | both
    #[arg(long, global = true)]
    pub budget: Option<String>,
    /// Negative-basin semantics: deadend | horizon
    #[arg(long, global = true)]
    pub semantics: Option<String>,
    /// `auto` or comma-separated budgets
    #[arg(long, global = true)]
    pub eps_grid: Option<String>,
    /// Number of k-means clusters
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Good target: `states:..`, `members:..` or `cluster:N`
    #[arg(long, global = true)]
    pub good: Option<String>,
    /// Bad target, same syntax as --good
    #[arg(long, global = true)]
    pub bad: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated export formats: csv, json, svg
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Flat `key = value` file; flags win over its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Reference track CSV (timestamp,lon,lat)
    #[arg(long, global = true)]
    pub best_track: Option<PathBuf>,
    /// Great-circle distances in km instead of Euclidean degrees
    #[arg(long, global = true)]
    pub haversine: bool,
}

const KEYS: [&str; 13] =
    ["input", "mode", "budget", "semantics", "eps-grid", "k", "seed", "good", "bad", "out", "format", "best-track", "haversine"];

/// Parses `key = value` lines; `#` starts a comment. Keys use the flag
/// spelling, with `_` accepted for `-`.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("config line {}: expected key = value", i + 1))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?}", i + 1);
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

impl Opts {
    /// Fills unset options from the config file, if any.
    pub fn merged(&self) -> Result<Opts> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut file = parse_config(&text)?;
        let mut take = |key: &str| file.remove(key);
        let number = |key: &str, v: Option<String>| -> Result<Option<u64>> {
            v.map(|s| s.parse::<u64>().map_err(|_| anyhow!("config: {key} must be a non-negative integer"))).transpose()
        };
        let haversine = match take("haversine").as_deref() {
            None | Some("false") => false,
            Some("true") => true,
            Some(other) => bail!("config: haversine must be true or false, got {other:?}"),
        };
        Ok(Opts {
            input: self.input.clone().or(take("input").map(PathBuf::from)),
            mode: self.mode.clone().or(take("mode")),
            budget: self.budget.clone().or(take("budget")),
            semantics: self.semantics.clone().or(take("semantics")),
            eps_grid: self.eps_grid.clone().or(take("eps-grid")),
            k: self.k.or(number("k", take("k"))?.map(|k| k as usize)),
            seed: self.seed.or(number("seed", take("seed"))?),
            good: self.good.clone().or(take("good")),
            bad: self.bad.clone().or(take("bad")),
            out: self.out.clone().or(take("out").map(PathBuf::from)),
            format: self.format.clone().or(take("format")),
            config: None,
            best_track: self.best_track.clone().or(take("best-track").map(PathBuf::from)),
            haversine: self.haversine || haversine,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputMode {
    PointCloud,
    TimeExtended,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Auto,
    Values(Vec<Cost>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

/// Fully resolved settings of one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub mode: InputMode,
    pub budgets: Vec<BudgetMode>,
    pub semantics: Semantics,
    pub grid: Grid,
    pub k: Option<usize>,
    pub seed: u64,
    pub good: Option<TargetSpec>,
    pub bad: Option<TargetSpec>,
    pub out: PathBuf,
    pub formats: Formats,
    pub best_track: Option<PathBuf>,
    pub haversine: bool,
}

pub fn parse_grid(text: &str) -> Result<Grid> {
    if text.trim() == "auto" {
        return Ok(Grid::Auto);
    }
    let mut values = text
        .split(',')
        .map(|v| parse_cost(v).ok_or_else(|| anyhow!("eps grid: {:?} is not a budget in [0, inf]", v.trim())))
        .collect::<Result<Vec<Cost>>>()?;
    values.sort();
    values.dedup();
    Ok(Grid::Values(values))
}

pub fn parse_formats(text: &str) -> Result<Formats> {
    let mut formats = Formats::default();
    for f in text.split(',').map(str::trim) {
        match f {
            "csv" => formats.csv = true,
            "json" => formats.json = true,
            "svg" => formats.svg = true,
            other => bail!("unknown format {other:?} (expected csv, json or svg)"),
        }
    }
    Ok(formats)
}

fn parse_target(flag: &str, text: Option<&String>) -> Result<Option<TargetSpec>> {
    text.map(|t| t.parse::<TargetSpec>().map_err(|e| anyhow!("--{flag}: {e}"))).transpose()
}

impl RunConfig {
    pub fn resolve(opts: &Opts) -> Result<RunConfig> {
        let opts = opts.merged()?;
        let input = opts.input.clone().ok_or_else(|| anyhow!("--input is required"))?;
        let mode = match opts.mode.as_deref().unwrap_or("timeext") {
            "pointcloud" => InputMode::PointCloud,
            "timeext" => InputMode::TimeExtended,
            other => bail!("--mode: expected pointcloud or timeext, got {other:?}"),
        };
        let budgets = match opts.budget.as_deref().unwrap_or("both") {
            "both" => BudgetMode::ALL.to_vec(),
            other => vec![other.parse::<BudgetMode>().map_err(|e| anyhow!("--budget: {e}"))?],
        };
        let semantics = opts.semantics.as_deref().unwrap_or("deadend").parse::<Semantics>().map_err(|e| anyhow!("--semantics: {e}"))?;
        Ok(RunConfig {
            input,
            mode,
            budgets,
            semantics,
            grid: parse_grid(opts.eps_grid.as_deref().unwrap_or("auto"))?,
            k: opts.k,
            seed: opts.seed.unwrap_or(0),
            good: parse_target("good", opts.good.as_ref())?,
            bad: parse_target("bad", opts.bad.as_ref())?,
            out: opts.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            formats: parse_formats(opts.format.as_deref().unwrap_or("csv"))?,
            best_track: opts.best_track.clone(),
            haversine: opts.haversine,
        })
    }

    pub fn is_json_input(&self) -> bool {
        is_json(&self.input)
    }
}

pub fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let map = parse_config("# sweep\ninput = a.csv\neps_grid = 0, 0.5 # inline\n\nk=3\n").unwrap();
        assert_eq!(map["input"], "a.csv");
        assert_eq!(map["eps-grid"], "0, 0.5");
        assert_eq!(map["k"], "3");
        assert!(parse_config("colour = red").is_err());
        assert!(parse_config("input").is_err());
    }

    #[test]
    fn grid_values() {
        assert_eq!(parse_grid("auto").unwrap(), Grid::Auto);
        assert_eq!(parse_grid("1, 0.5,inf,0.5").unwrap(), Grid::Values(vec![Cost::of(0.5), Cost::of(1.0), Cost::INFINITY]));
        assert!(parse_grid("-1").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(parse_formats("svg,csv").unwrap(), Formats { csv: true, json: false, svg: true });
        assert!(parse_formats("png").is_err());
    }
}
