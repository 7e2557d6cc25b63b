use std::sync::Mutex;
use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;

use super::cache::{cache_key, Cache};
use super::{monogamy, to_csv, SweepConfig, SweepRow};
use crate::sepstates::{derive_seed, OptimizerOptions};
use crate::spinchain::model_thermal_state;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    /// Ordered by grid point, then by the order of `alphas`.
    pub rows: Vec<SweepRow>,
    pub cache_hits: usize,
    pub computed: usize,
}

impl SweepOutcome {
    pub fn unconverged(&self) -> usize {
        self.rows.iter().filter(|r| !r.converged).count()
    }

    pub fn unconverged_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            0.0
        } else {
            self.unconverged() as f64 / self.rows.len() as f64
        }
    }

    /// Fails when more rows than `max_fraction` did not converge.
    pub fn check(&self, max_fraction: f64) -> Result<()> {
        let frac = self.unconverged_fraction();
        if frac > max_fraction {
            return Err(Error::Numeric(format!(
                "{} of {} rows did not converge ({:.0}% > {:.0}%)",
                self.unconverged(),
                self.rows.len(),
                100.0 * frac,
                100.0 * max_fraction
            )));
        }
        Ok(())
    }
}

/// Runs every (grid point, α) job, reusing cached rows, and writes the CSV
/// to `config.output` if set. Job `k` optimizes with seed
/// `derive_seed(config.seed, k)`, so results do not depend on scheduling.
pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let values = config.grid.values();
    let cache = match &config.cache_dir {
        Some(dir) => Some(Mutex::new(Cache::open(dir)?)),
        None => None,
    };
    let jobs: Vec<(usize, f64, usize)> = values
        .iter()
        .enumerate()
        .flat_map(|(gi, &v)| (0..config.alphas.len()).map(move |ai| (gi, v, ai)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    info!("sweep: {} jobs over {} grid points", jobs.len(), values.len());

    let results: Vec<Result<(SweepRow, bool)>> = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(k, &(_, value, ai))| {
                let (model, temp) = config.point(value)?;
                let p = config.alphas[ai];
                let opts = OptimizerOptions { seed: derive_seed(config.seed, k as u64), ..config.optimizer.clone() };
                let key = cache_key(&model, temp, p, &opts);
                if let Some(c) = &cache {
                    if let Some(row) = c.lock().expect("cache lock").get(&key) {
                        return Ok((row.clone(), true));
                    }
                }
                let start = Instant::now();
                let th = model_thermal_state(&model, temp)?;
                let mono = monogamy(&th.rho, p, &opts)?;
                let row = SweepRow {
                    model: model.name().to_string(),
                    param_name: config.axis.clone(),
                    param_value: value,
                    temp,
                    alpha: p.alpha,
                    variant: p.variant,
                    e_1_23: mono.e_1_23.nats,
                    e_1_2: mono.e_1_2.nats,
                    e_1_3: mono.e_1_3.nats,
                    m: mono.m,
                    converged: mono.converged(),
                    restarts_used: opts.restarts,
                    seed: opts.seed,
                    walltime_ms: start.elapsed().as_millis() as u64,
                }
                .quantized();
                debug!("{}", row.to_csv_line());
                if let Some(c) = &cache {
                    c.lock().expect("cache lock").insert(key, row.clone())?;
                }
                Ok((row, false))
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut cache_hits = 0;
    for r in results {
        let (row, hit) = r?;
        cache_hits += usize::from(hit);
        rows.push(row);
    }
    let outcome = SweepOutcome { computed: rows.len() - cache_hits, cache_hits, rows };
    if let Some(path) = &config.output {
        std::fs::write(path, to_csv(&outcome.rows)).map_err(|e| Error::io(path, e))?;
    }
    info!("sweep: {} computed, {} from cache", outcome.computed, outcome.cache_hits);
    Ok(outcome)
}
