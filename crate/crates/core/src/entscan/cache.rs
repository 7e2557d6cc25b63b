//! On-disk cache of sweep rows.
//!
//! Each run appends records to its own `run-*.jsonl` file; `index.tsv` maps
//! cache keys to the file holding them. Records carry a SHA-256 checksum of
//! the row; anything that fails to parse or verify is skipped with a
//! warning. Lines are written with a single `write` each, so a concurrent
//! reader sees at worst a truncated last line, which it skips.

use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use log::warn;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::SweepRow;
use crate::renyi::RenyiParameter;
use crate::sepstates::{GradientMode, OptimizerOptions};
use crate::spinchain::ModelParams;
use crate::{Error, Result};

const INDEX: &str = "index.tsv";

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    checksum: String,
    row: SweepRow,
}

fn checksum(row: &SweepRow) -> String {
    let json = serde_json::to_string(row).expect("rows serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// Key of one sweep point: everything that determines its result.
pub fn cache_key(model: &ModelParams, temp: f64, p: RenyiParameter, opts: &OptimizerOptions) -> String {
    let gradient = match opts.gradient {
        GradientMode::Analytic => "analytic",
        GradientMode::FiniteDifference => "fd",
    };
    let canonical = format!(
        "v1|{}|temp={:e}|alpha={:e}|variant={}|restarts={}|max_iters={}|grad_step={:e}|tol={:e}|floor={:e}|components={:?}|gradient={}|seed={}",
        serde_json::to_string(model).expect("params serialize"),
        temp,
        p.alpha,
        p.variant.short_name(),
        opts.restarts,
        opts.max_iters,
        opts.grad_step,
        opts.tol_objective,
        opts.floor,
        opts.components,
        gradient,
        opts.seed,
    );
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
    entries: HashMap<String, SweepRow>,
    run: Option<(String, File)>,
    index: Option<File>,
}

impl Cache {
    /// Opens (creating if needed) the cache in `dir` and loads every valid
    /// record.
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut cache = Self { dir: dir.to_path_buf(), entries: HashMap::new(), run: None, index: None };
        cache.load()?;
        Ok(cache)
    }

    fn load(&mut self) -> Result<()> {
        let index_path = self.dir.join(INDEX);
        let text = match std::fs::read_to_string(&index_path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
            Err(e) => return Err(Error::io(index_path, e)),
        };
        let mut wanted: HashMap<String, HashSet<String>> = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            match line.split_once('\t') {
                Some((key, file)) if is_hex_key(key) && is_run_file(file) => {
                    wanted.entry(file.to_string()).or_default().insert(key.to_string());
                }
                _ => warn!("cache index line {} is malformed; skipped", n + 1),
            }
        }
        for (file, keys) in wanted {
            let path = self.dir.join(&file);
            let body = match std::fs::read_to_string(&path) {
                Ok(b) => b,
                Err(e) => {
                    warn!("cache file {} unreadable ({e}); skipped", path.display());
                    continue;
                }
            };
            for (n, line) in body.lines().enumerate() {
                let Ok(rec) = serde_json::from_str::<Record>(line) else {
                    warn!("cache record {}:{} does not parse; skipped", file, n + 1);
                    continue;
                };
                if rec.checksum != checksum(&rec.row) {
                    warn!("cache record {}:{} fails its checksum; skipped", file, n + 1);
                    continue;
                }
                if keys.contains(&rec.key) {
                    self.entries.insert(rec.key, rec.row);
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&SweepRow> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, key: String, row: SweepRow) -> Result<()> {
        if self.run.is_none() {
            let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
            let name = format!("run-{stamp}-{}.jsonl", std::process::id());
            let path = self.dir.join(&name);
            let file = OpenOptions::new().create(true).append(true).open(&path).map_err(|e| Error::io(&path, e))?;
            self.run = Some((name, file));
        }
        if self.index.is_none() {
            let path = self.dir.join(INDEX);
            let file = OpenOptions::new().create(true).append(true).open(&path).map_err(|e| Error::io(&path, e))?;
            self.index = Some(file);
        }
        let (name, file) = self.run.as_mut().expect("opened above");
        let rec = Record { key: key.clone(), checksum: checksum(&row), row: row.clone() };
        let mut line = serde_json::to_string(&rec).expect("records serialize");
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(|e| Error::io(self.dir.join(name.as_str()), e))?;
        let entry = format!("{key}\t{name}\n");
        let index = self.index.as_mut().expect("opened above");
        index.write_all(entry.as_bytes()).map_err(|e| Error::io(self.dir.join(INDEX), e))?;
        self.entries.insert(key, row);
        Ok(())
    }
}

fn is_hex_key(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| b.is_ascii_hexdigit())
}

fn is_run_file(s: &str) -> bool {
    s.starts_with("run-") && s.ends_with(".jsonl") && !s.contains(['/', '\\'])
}
