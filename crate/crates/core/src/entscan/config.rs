//! Sweep configuration files.
//!
//! One `key = value` pair per line; `#` starts a comment. Keys:
//!
//! | key | value |
//! |-----|-------|
//! | `model` | `xyz`, `xxz`, `xy` or `tfi` (required) |
//! | `jx`, `jy`, `jz`, `j`, `delta`, `gamma`, `lambda` | couplings of the chosen model |
//! | `temp` | temperature, required unless it is the swept axis |
//! | `axis` | `temp` or one of the model's coupling names (required) |
//! | `grid` | `linspace(start, stop, n)` or a comma-separated list (required) |
//! | `alphas` | comma-separated `α` or `α:variant`, variant `trad` or `sand` (required) |
//! | `seed` | base seed, default 0 |
//! | `restarts`, `max_iters`, `grad_step`, `tol_objective`, `floor`, `components` | optimizer options |
//! | `output` | CSV path |
//! | `cache_dir` | cache directory |
//! | `workers` | worker threads, default: all cores |
//! | `max_unconverged_fraction` | tolerated share of unconverged rows, default 0.5 |
//!
//! Every key may appear at most once. The swept coupling need not be given.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::renyi::RenyiParameter;
use crate::sepstates::OptimizerOptions;
use crate::spinchain::ModelParams;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Explicit(Vec<f64>),
    Linspace { start: f64, stop: f64, n: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::Explicit(ref v) => v.clone(),
            Grid::Linspace { start, stop, n } => match n {
                0 => vec![],
                1 => vec![start],
                _ => (0..n)
                    .map(|i| if i + 1 == n { stop } else { start + (stop - start) * i as f64 / (n - 1) as f64 })
                    .collect(),
            },
        }
    }

    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("linspace(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err("linspace takes (start, stop, n)".into());
            }
            let start = number(parts[0])?;
            let stop = number(parts[1])?;
            let n: usize = parts[2].parse().map_err(|_| format!("bad point count {:?}", parts[2]))?;
            if n == 0 {
                return Err("grid is empty".into());
            }
            return Ok(Grid::Linspace { start, stop, n });
        }
        let values = s.split(',').map(|v| number(v.trim())).collect::<std::result::Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err("grid is empty".into());
        }
        Ok(Grid::Explicit(values))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Base couplings; the swept one is overwritten per grid point.
    pub model: ModelParams,
    pub axis: String,
    pub grid: Grid,
    pub temp: Option<f64>,
    pub alphas: Vec<RenyiParameter>,
    pub optimizer: OptimizerOptions,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub max_unconverged_fraction: f64,
}

const KEYS: &[&str] = &[
    "model",
    "jx",
    "jy",
    "jz",
    "j",
    "delta",
    "gamma",
    "lambda",
    "temp",
    "axis",
    "grid",
    "alphas",
    "seed",
    "restarts",
    "max_iters",
    "grad_step",
    "tol_objective",
    "floor",
    "components",
    "output",
    "cache_dir",
    "workers",
    "max_unconverged_fraction",
];

fn number(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("not a finite number: {s:?}"))
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config { line: line_no, msg: format!("expected `key = value`, got {line:?}") });
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config { line: line_no, msg: format!("unknown key {key:?}") });
            }
            if let Some((prev, _)) = entries.insert(key, (line_no, value)) {
                return Err(Error::Config { line: line_no, msg: format!("key {key:?} already set on line {prev}") });
            }
        }
        let end = text.lines().count().max(1);
        let fail = |line: usize, msg: String| Error::Config { line, msg };
        let required = |key: &str| -> Result<(usize, &str)> {
            entries.get(key).copied().ok_or_else(|| fail(end, format!("missing required key {key:?}")))
        };
        let num = |key: &str| -> Result<Option<(usize, f64)>> {
            match entries.get(key) {
                None => Ok(None),
                Some(&(line, v)) => number(v).map(|x| Some((line, x))).map_err(|m| fail(line, format!("{key}: {m}"))),
            }
        };
        let int = |key: &str| -> Result<Option<u64>> {
            match entries.get(key) {
                None => Ok(None),
                Some(&(line, v)) => {
                    v.parse::<u64>().map(Some).map_err(|_| fail(line, format!("{key}: not a non-negative integer: {v:?}")))
                }
            }
        };

        let (model_line, model_name) = required("model")?;
        let (axis_line, axis) = required("axis")?;
        let coupling = |key: &str| -> Result<f64> {
            match num(key)? {
                Some((_, v)) => Ok(v),
                // A swept coupling gets its value from the grid.
                None if key == axis => Ok(0.0),
                None => Err(fail(model_line, format!("model {model_name} needs key {key:?}"))),
            }
        };
        let model = match model_name {
            "xyz" => ModelParams::Xyz { jx: coupling("jx")?, jy: coupling("jy")?, jz: coupling("jz")? },
            "xxz" => ModelParams::Xxz { j: coupling("j")?, delta: coupling("delta")? },
            "xy" => ModelParams::Xy { j: coupling("j")?, gamma: coupling("gamma")? },
            "tfi" => ModelParams::Tfi { lambda: coupling("lambda")? },
            other => return Err(fail(model_line, format!("unknown model {other:?}"))),
        };
        for key in ["jx", "jy", "jz", "j", "delta", "gamma", "lambda"] {
            if let Some(&(line, _)) = entries.get(key) {
                if !model.param_names().contains(&key) {
                    return Err(fail(line, format!("model {model_name} has no coupling {key:?}")));
                }
            }
        }
        if axis != "temp" && !model.param_names().contains(&axis) {
            return Err(fail(axis_line, format!("axis must be temp or one of {:?}", model.param_names())));
        }

        let (grid_line, grid_text) = required("grid")?;
        let grid = Grid::parse(grid_text).map_err(|m| fail(grid_line, format!("grid: {m}")))?;
        let temp = num("temp")?;
        if axis != "temp" && temp.is_none() {
            return Err(fail(end, "missing required key \"temp\"".into()));
        }
        if let Some((line, t)) = temp {
            if t <= 0.0 {
                return Err(fail(line, format!("temp must be positive, got {t}")));
            }
        }
        for v in grid.values() {
            let check = if axis == "temp" {
                if v > 0.0 { Ok(()) } else { Err(Error::NonPositiveTemperature(v)) }
            } else {
                model.with(axis, v).map(|_| ())
            };
            check.map_err(|e| fail(grid_line, format!("grid value {v}: {e}")))?;
        }
        if axis == "temp" {
            model.validate().map_err(|e| fail(model_line, e.to_string()))?;
        }

        let (alpha_line, alpha_text) = required("alphas")?;
        let alphas = alpha_text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<RenyiParameter>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| fail(alpha_line, format!("alphas: {e}")))?;
        if alphas.is_empty() {
            return Err(fail(alpha_line, "alphas: list is empty".into()));
        }

        let mut optimizer = OptimizerOptions::default();
        if let Some(v) = int("restarts")? {
            optimizer.restarts = v as usize;
        }
        if let Some(v) = int("max_iters")? {
            optimizer.max_iters = v as usize;
        }
        if let Some((_, v)) = num("grad_step")? {
            optimizer.grad_step = v;
        }
        if let Some((_, v)) = num("tol_objective")? {
            optimizer.tol_objective = v;
        }
        if let Some((_, v)) = num("floor")? {
            optimizer.floor = v;
        }
        if let Some(v) = int("components")? {
            optimizer.components = Some(v as usize);
        }
        let seed = int("seed")?.unwrap_or(0);
        optimizer.seed = seed;
        optimizer.validate().map_err(|e| fail(end, e.to_string()))?;

        let workers = int("workers")?.map(|w| w as usize);
        if workers == Some(0) {
            return Err(fail(entries["workers"].0, "workers must be positive".into()));
        }
        let max_unconverged_fraction = match num("max_unconverged_fraction")? {
            None => 0.5,
            Some((line, f)) if !(0.0..=1.0).contains(&f) => {
                return Err(fail(line, format!("max_unconverged_fraction must lie in [0, 1], got {f}")));
            }
            Some((_, f)) => f,
        };
        Ok(Self {
            model,
            axis: axis.to_string(),
            grid,
            temp: temp.map(|(_, t)| t),
            alphas,
            optimizer,
            seed,
            output: entries.get("output").map(|&(_, v)| PathBuf::from(v)),
            cache_dir: entries.get("cache_dir").map(|&(_, v)| PathBuf::from(v)),
            workers,
            max_unconverged_fraction,
        })
    }

    /// Model and temperature at one grid value.
    pub fn point(&self, value: f64) -> Result<(ModelParams, f64)> {
        if self.axis == "temp" {
            Ok((self.model, value))
        } else {
            Ok((self.model.with(&self.axis, value)?, self.temp.expect("validated")))
        }
    }
}
