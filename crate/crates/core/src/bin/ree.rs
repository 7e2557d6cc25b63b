use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ree_core::entscan::{
    critical_temperature, format_float, monogamy, sweep, to_csv, CriticalTemperature, SweepConfig,
};
use ree_core::qmat::{partial_trace, random_density_matrix, Bipartition, DensityMatrix};
use ree_core::renyi::{
    collision_entropy, kl_rel_entropy, max_entropy, min_entropy, rel_entropy, renyi_entropy, sand_rel_entropy,
    trad_rel_entropy, von_neumann_entropy, RenyiParameter, Variant,
};
use ree_core::sepstates::{ree, OptimizerOptions};
use ree_core::spinchain::{model_thermal_state, tfi_analytic, xxz_partition_function, xyz_analytic, ModelParams};
use ree_core::statezoo::{ghz, star, w, wbar, PureState3};
use ree_core::{Error, Result};

#[derive(Parser)]
#[command(name = "ree", version, about = "Rényi relative entropy of entanglement for three-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a canonical state and its two-qubit reductions.
    State {
        #[arg(value_enum)]
        name: Named,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Relative entropy of entanglement across one cut.
    Ree {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "1:23")]
        cut: Cut,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Monogamy `E(1:23) − E(1:2) − E(1:3)`.
    Monogamy {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a sweep configuration file.
    Sweep {
        config: PathBuf,
        /// Overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        restarts: Option<usize>,
        /// Also print the rows to stdout.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Critical temperature above which `E(1:23)` vanishes.
    Tc {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
        threshold: f64,
        #[arg(long, default_value_t = 0.05)]
        t_min: f64,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Closed-form vs numeric thermal states and entropy inequalities.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Named {
    Ghz,
    W,
    Star,
    Wbar,
}

impl Named {
    fn state(self) -> PureState3 {
        match self {
            Named::Ghz => ghz(),
            Named::W => w(),
            Named::Star => star(),
            Named::Wbar => wbar(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Xyz,
    Xxz,
    Xy,
    Tfi,
}

#[derive(Clone, Copy)]
enum Cut {
    Block,
    Pair12,
    Pair13,
}

impl std::str::FromStr for Cut {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "1:23" => Ok(Cut::Block),
            "1:2" => Ok(Cut::Pair12),
            "1:3" => Ok(Cut::Pair13),
            _ => Err(format!("cut must be 1:23, 1:2 or 1:3, got {s:?}")),
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    #[arg(long, allow_negative_numbers = true)]
    jx: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    jy: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    jz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    j: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    temp: Option<f64>,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required for this model")))
        };
        let given: Vec<&str> = [
            ("jx", self.jx),
            ("jy", self.jy),
            ("jz", self.jz),
            ("j", self.j),
            ("delta", self.delta),
            ("gamma", self.gamma),
            ("lambda", self.lambda),
        ]
        .into_iter()
        .filter_map(|(n, v)| v.map(|_| n))
        .collect();
        let model = self.model.ok_or_else(|| Error::InvalidArgument("--model is required".into()))?;
        let params = match model {
            ModelName::Xyz => ModelParams::Xyz { jx: need(self.jx, "jx")?, jy: need(self.jy, "jy")?, jz: need(self.jz, "jz")? },
            ModelName::Xxz => ModelParams::Xxz { j: need(self.j, "j")?, delta: need(self.delta, "delta")? },
            ModelName::Xy => ModelParams::Xy { j: need(self.j, "j")?, gamma: need(self.gamma, "gamma")? },
            ModelName::Tfi => ModelParams::Tfi { lambda: need(self.lambda, "lambda")? },
        };
        if let Some(extra) = given.iter().find(|n| !params.param_names().contains(n)) {
            return Err(Error::InvalidArgument(format!("--{extra} does not apply to model {}", params.name())));
        }
        params.validate()?;
        Ok(params)
    }
}

/// Either a named pure state or a thermal state of a model.
#[derive(Args)]
struct Source {
    #[arg(long, value_enum, conflicts_with = "model")]
    state: Option<Named>,
    #[command(flatten)]
    model: ModelArgs,
}

impl Source {
    fn density(&self) -> Result<DensityMatrix> {
        if let Some(name) = self.state {
            return Ok(name.state().density());
        }
        let params = self.model.params()?;
        let t = self.model.temp.ok_or_else(|| Error::InvalidArgument("--temp is required with --model".into()))?;
        Ok(model_thermal_state(&params, t)?.rho)
    }
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value = "trad")]
    variant: Variant,
}

impl AlphaArgs {
    fn param(&self) -> Result<RenyiParameter> {
        RenyiParameter::new(self.alpha, self.variant)
    }
}

#[derive(Args)]
struct OptArgs {
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl OptArgs {
    fn options(&self) -> Result<OptimizerOptions> {
        let mut o = OptimizerOptions::default();
        if let Some(r) = self.restarts {
            o.restarts = r;
        }
        if let Some(s) = self.seed {
            o.seed = s;
        }
        o.validate()?;
        Ok(o)
    }
}

fn print_record(format: Format, fields: &[(&str, String)]) {
    match format {
        Format::Csv => {
            println!("{}", fields.iter().map(|f| f.0).collect::<Vec<_>>().join(","));
            println!("{}", fields.iter().map(|f| f.1.as_str()).collect::<Vec<_>>().join(","));
        }
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| {
                    let val = if let Ok(n) = v.parse::<u64>() {
                        json!(n)
                    } else {
                        match v.parse::<f64>() {
                            Ok(x) if x.is_finite() => json!(x),
                            _ => match v.as_str() {
                                "true" => json!(true),
                                "false" => json!(false),
                                _ => json!(v),
                            },
                        }
                    };
                    (k.to_string(), val)
                })
                .collect();
            println!("{}", serde_json::Value::Object(obj));
        }
    }
}

fn run_state(name: Named, format: Format) -> Result<()> {
    let psi = name.state();
    let r12 = psi.reduced(&[0, 1])?;
    let r13 = psi.reduced(&[0, 2])?;
    let eig = |r: &DensityMatrix| {
        let mut e = r.spectrum().eigenvalues.clone();
        e.sort_by(|a, b| b.total_cmp(a));
        e
    };
    match format {
        Format::Json => {
            let amps: Vec<[f64; 2]> = psi.amplitudes().iter().map(|a| [a.re, a.im]).collect();
            let out = json!({
                "amplitudes": amps,
                "rho_12": { "eigenvalues": eig(&r12), "purity": r12.purity() },
                "rho_13": { "eigenvalues": eig(&r13), "purity": r13.purity() },
            });
            println!("{out}");
        }
        Format::Csv => {
            println!("index,re,im");
            for (i, a) in psi.amplitudes().iter().enumerate() {
                println!("{i},{},{}", format_float(a.re), format_float(a.im));
            }
        }
    }
    Ok(())
}

fn run_ree(source: &Source, cut: Cut, alpha: &AlphaArgs, opt: &OptArgs, format: Format) -> Result<bool> {
    let rho = source.density()?;
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch("expected a three-qubit state".into()));
    }
    let p = alpha.param()?;
    let opts = opt.options()?;
    let (state, bip) = match cut {
        Cut::Block => (rho, Bipartition::one_vs_two()),
        Cut::Pair12 => (partial_trace(&rho, &[2, 2, 2], &[0, 1])?, Bipartition::two_qubit()),
        Cut::Pair13 => (partial_trace(&rho, &[2, 2, 2], &[0, 2])?, Bipartition::two_qubit()),
    };
    let r = ree(&state, bip, p, &opts)?;
    print_record(
        format,
        &[
            ("alpha", format_float(p.alpha)),
            ("variant", p.variant.to_string()),
            ("ree", format_float(r.value.nats)),
            ("converged", r.converged.to_string()),
            ("restarts_used", r.restarts_used.to_string()),
            ("iterations", r.iterations.to_string()),
        ],
    );
    Ok(r.converged)
}

fn run_monogamy(source: &Source, alpha: &AlphaArgs, opt: &OptArgs, format: Format) -> Result<bool> {
    let rho = source.density()?;
    let p = alpha.param()?;
    let r = monogamy(&rho, p, &opt.options()?)?;
    print_record(
        format,
        &[
            ("alpha", format_float(p.alpha)),
            ("variant", p.variant.to_string()),
            ("e_1_23", format_float(r.e_1_23.nats)),
            ("e_1_2", format_float(r.e_1_2.nats)),
            ("e_1_3", format_float(r.e_1_3.nats)),
            ("m", format_float(r.m)),
            ("converged", r.converged().to_string()),
        ],
    );
    Ok(r.converged())
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    path: &Path,
    out: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
    workers: Option<usize>,
    seed: Option<u64>,
    restarts: Option<usize>,
    format: Option<Format>,
) -> Result<()> {
    let mut cfg = SweepConfig::from_file(path)?;
    cfg.output = out.or(cfg.output);
    cfg.cache_dir = cache_dir.or(cfg.cache_dir);
    cfg.workers = workers.or(cfg.workers);
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(r) = restarts {
        cfg.optimizer.restarts = r;
        cfg.optimizer.validate()?;
    }
    let outcome = sweep(&cfg)?;
    match format {
        Some(Format::Csv) => print!("{}", to_csv(&outcome.rows)),
        Some(Format::Json) => println!("{}", serde_json::to_string(&outcome.rows).expect("rows serialize")),
        None => {}
    }
    eprintln!(
        "{} rows ({} computed, {} cached, {} unconverged)",
        outcome.rows.len(),
        outcome.computed,
        outcome.cache_hits,
        outcome.unconverged()
    );
    outcome.check(cfg.max_unconverged_fraction)
}

fn run_tc(cmd: &Command) -> Result<()> {
    let Command::Tc { model, alpha, opt, threshold, t_min, t_max, resolution, format } = cmd else {
        unreachable!()
    };
    let params = model.params()?;
    let p = alpha.param()?;
    let tc = critical_temperature(&params, p, &opt.options()?, *threshold, (*t_min, *t_max), *resolution)?;
    let value = match tc {
        CriticalTemperature::Found(t) => format_float(t),
        CriticalTemperature::NoneInRange => tc.to_string(),
    };
    print_record(
        *format,
        &[
            ("model", params.to_string().replace(',', ";")),
            ("alpha", format_float(p.alpha)),
            ("variant", p.variant.to_string()),
            ("threshold", format_float(*threshold)),
            ("t_c", value),
        ],
    );
    Ok(())
}

struct Checker {
    failures: usize,
}

impl Checker {
    fn report(&mut self, name: &str, worst: f64, tol: f64) {
        let ok = worst <= tol;
        if !ok {
            self.failures += 1;
        }
        println!("{} {name}: worst {:.3e} (tolerance {:.0e})", if ok { "PASS" } else { "FAIL" }, worst, tol);
    }
}

fn run_check(seed: u64, points: usize) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Checker { failures: 0 };

    let (mut z_err, mut m_err) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let t = rng.random_range(0.2..3.0);
        let xyz = ModelParams::Xyz {
            jx: rng.random_range(-1.5..1.5),
            jy: rng.random_range(-1.5..1.5),
            jz: rng.random_range(-1.5..1.5),
        };
        let tfi = ModelParams::Tfi { lambda: rng.random_range(0.0..3.0) };
        let xxz = ModelParams::Xxz { j: rng.random_range(-1.5..1.5), delta: rng.random_range(-0.9..3.0) };
        let (rho, info) = xyz_analytic(&xyz, t)?;
        let num = model_thermal_state(&xyz, t)?;
        m_err = m_err.max(rho.matrix().max_abs_diff(num.rho.matrix()));
        z_err = z_err.max((info.partition_function.ln() - num.ln_partition_function).abs());
        let (rho, info) = tfi_analytic(&tfi, t)?;
        let num = model_thermal_state(&tfi, t)?;
        m_err = m_err.max(rho.matrix().max_abs_diff(num.rho.matrix()));
        z_err = z_err.max((info.partition_function.ln() - num.ln_partition_function).abs());
        let z = xxz_partition_function(&xxz, t)?;
        z_err = z_err.max((z.ln() - model_thermal_state(&xxz, t)?.ln_partition_function).abs());
    }
    c.report("closed-form thermal matrices", m_err, 1e-8);
    c.report("partition functions (relative)", z_err, 1e-10);

    let (mut alt, mut limits, mut kl) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..points {
        let d = [2, 4, 8][i % 3];
        let s = rng.random::<u64>();
        let rho = random_density_matrix(d, d, s)?;
        let sigma = random_density_matrix(d, d, s ^ 0x5bd1_e995)?;
        for a in [0.6, 0.8, 1.5, 2.0] {
            let gap = trad_rel_entropy(&rho, &sigma, a, 1e-12)?.nats - sand_rel_entropy(&rho, &sigma, a, 1e-12)?.nats;
            alt = alt.max(-gap);
        }
        let vn = von_neumann_entropy(&rho).nats;
        limits = limits.max((renyi_entropy(&rho, 1.0 + 1e-6)?.nats - vn).abs());
        limits = limits.max((renyi_entropy(&rho, 2.0)?.nats - collision_entropy(&rho).nats).abs());
        limits = limits.max((renyi_entropy(&rho, 1e5)?.nats - min_entropy(&rho).nats).abs());
        limits = limits.max((renyi_entropy(&rho, 1e-7)?.nats - max_entropy(&rho, 1e-12).nats).abs());
        let k = kl_rel_entropy(&rho, &sigma, 1e-12)?.nats;
        for v in [Variant::Traditional, Variant::Sandwiched] {
            for a in [1.0 - 1e-6, 1.0 + 1e-6] {
                kl = kl.max((rel_entropy(&rho, &sigma, RenyiParameter::new(a, v)?, 1e-12)?.nats - k).abs());
            }
        }
    }
    c.report("traditional minus sandwiched (negated)", alt, 1e-9);
    c.report("Rényi entropy limits", limits, 1e-4);
    c.report("divergence at alpha = 1 ± 1e-6 vs KL", kl, 1e-4);

    if c.failures > 0 {
        return Err(Error::Numeric(format!("{} self-check(s) failed", c.failures)));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let unconverged = || Error::Numeric("optimizer did not converge".into());
    match &cli.command {
        Command::State { name, format } => run_state(*name, *format),
        Command::Ree { source, cut, alpha, opt, format } => {
            run_ree(source, *cut, alpha, opt, *format)?.then_some(()).ok_or_else(unconverged)
        }
        Command::Monogamy { source, alpha, opt, format } => {
            run_monogamy(source, alpha, opt, *format)?.then_some(()).ok_or_else(unconverged)
        }
        Command::Sweep { config, out, cache_dir, workers, seed, restarts, format } => {
            run_sweep(config, out.clone(), cache_dir.clone(), *workers, *seed, *restarts, *format)
        }
        cmd @ Command::Tc { .. } => run_tc(cmd),
        Command::Check { seed, points } => run_check(*seed, *points),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
