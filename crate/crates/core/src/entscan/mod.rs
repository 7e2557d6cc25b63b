//! Monogamy of entanglement, parameter sweeps and critical temperatures.

mod cache;
mod config;
mod rows;
mod sweep;

pub use cache::{cache_key, Cache};
pub use config::{Grid, SweepConfig};
pub use rows::{format_float, parse_csv, parse_float, to_csv, SweepRow, CSV_HEADER};
pub use sweep::{sweep, SweepOutcome};

use serde::Serialize;

use crate::qmat::{partial_trace, Bipartition, DensityMatrix};
use crate::renyi::{EntropyValue, RenyiParameter};
use crate::sepstates::{derive_seed, ree, OptimizerOptions, REEResult};
use crate::spinchain::{model_thermal_state, ModelParams};
use crate::{Error, Result};

/// `M = E(1:23) − E(1:2) − E(1:3)`; positive is monogamous, negative
/// polygamous.
#[derive(Clone, Debug)]
pub struct MonogamyResult {
    pub e_1_23: EntropyValue,
    pub e_1_2: EntropyValue,
    pub e_1_3: EntropyValue,
    pub m: f64,
    pub ree_1_23: REEResult,
    pub ree_1_2: REEResult,
    pub ree_1_3: REEResult,
}

impl MonogamyResult {
    pub fn converged(&self) -> bool {
        self.ree_1_23.converged && self.ree_1_2.converged && self.ree_1_3.converged
    }

    pub fn summary(&self) -> MonogamySummary {
        MonogamySummary {
            e_1_23: self.e_1_23.nats,
            e_1_2: self.e_1_2.nats,
            e_1_3: self.e_1_3.nats,
            m: self.m,
            converged: self.converged(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonogamySummary {
    pub e_1_23: f64,
    pub e_1_2: f64,
    pub e_1_3: f64,
    pub m: f64,
    pub converged: bool,
}

/// Each cut gets its own restart seed stream derived from `opts.seed`.
pub fn monogamy(rho3: &DensityMatrix, p: RenyiParameter, opts: &OptimizerOptions) -> Result<MonogamyResult> {
    if rho3.dim() != 8 {
        return Err(Error::DimensionMismatch(format!("monogamy needs a three-qubit state, got dimension {}", rho3.dim())));
    }
    p.validate()?;
    let dims = [2, 2, 2];
    let with_seed = |k: u64| OptimizerOptions { seed: derive_seed(opts.seed, k), ..opts.clone() };
    let r123 = ree(rho3, Bipartition::one_vs_two(), p, &with_seed(0))?;
    let rho12 = partial_trace(rho3, &dims, &[0, 1])?;
    let r12 = ree(&rho12, Bipartition::two_qubit(), p, &with_seed(1))?;
    let rho13 = partial_trace(rho3, &dims, &[0, 2])?;
    let r13 = ree(&rho13, Bipartition::two_qubit(), p, &with_seed(2))?;
    let m = r123.value.nats - r12.value.nats - r13.value.nats;
    Ok(MonogamyResult {
        e_1_23: r123.value,
        e_1_2: r12.value,
        e_1_3: r13.value,
        m,
        ree_1_23: r123,
        ree_1_2: r12,
        ree_1_3: r13,
    })
}

/// `E(1:23)` of a model's thermal state.
pub fn thermal_entanglement(params: &ModelParams, t: f64, p: RenyiParameter, opts: &OptimizerOptions) -> Result<REEResult> {
    let th = model_thermal_state(params, t)?;
    ree(&th.rho, Bipartition::one_vs_two(), p, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CriticalTemperature {
    Found(f64),
    NoneInRange,
}

impl std::fmt::Display for CriticalTemperature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CriticalTemperature::Found(t) => write!(f, "{}", format_float(*t)),
            CriticalTemperature::NoneInRange => write!(f, "none-in-range"),
        }
    }
}

/// Smallest temperature in `t_range` with `E(1:23) < threshold`, located on
/// a uniform grid of `resolution` points and refined by bisection to
/// `(t_max − t_min)/2¹⁰`.
pub fn critical_temperature(
    params: &ModelParams,
    p: RenyiParameter,
    opts: &OptimizerOptions,
    threshold: f64,
    t_range: (f64, f64),
    resolution: usize,
) -> Result<CriticalTemperature> {
    let (lo, hi) = t_range;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!("temperature range ({lo}, {hi}) must be positive and ascending")));
    }
    if resolution < 4 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 4, got {resolution}")));
    }
    params.validate()?;
    p.validate()?;
    let below = |t: f64| -> Result<bool> { Ok(thermal_entanglement(params, t, p, opts)?.value.nats < threshold) };
    let step = (hi - lo) / (resolution - 1) as f64;
    let grid: Vec<f64> = (0..resolution).map(|i| if i + 1 == resolution { hi } else { lo + step * i as f64 }).collect();
    let mut first = None;
    for (i, &t) in grid.iter().enumerate() {
        if below(t)? {
            first = Some(i);
            break;
        }
    }
    let Some(first) = first else {
        return Ok(CriticalTemperature::NoneInRange);
    };
    if first == 0 {
        return Ok(CriticalTemperature::Found(lo));
    }
    let (mut a, mut b) = (grid[first - 1], grid[first]);
    let target = (hi - lo) / 1024.0;
    while b - a > target {
        let mid = 0.5 * (a + b);
        if below(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(CriticalTemperature::Found(b))
}

#[cfg(test)]
mod tests;
