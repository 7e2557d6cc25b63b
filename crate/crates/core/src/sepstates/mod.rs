//! Separable states and the relative entropy of entanglement.
//!
//! `E(ρ) = min_σ D(ρ‖σ)` over separable `σ` is computed by multi-start local
//! minimisation over a [`SeparableAnsatz`]. Restarts are independent and run
//! in parallel; each one is seeded from `(opts.seed, restart index)` so that
//! adding restarts never changes the earlier ones.

mod ansatz;
mod lbfgs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

pub use ansatz::SeparableAnsatz;

use crate::qmat::{eig_hermitian, partial_trace, Bipartition, ComplexMatrix, DensityMatrix, DEFAULT_FLOOR};
use crate::renyi::{rel_entropy, von_neumann_entropy, DivergenceObjective, EntropyValue, RenyiParameter};
use crate::{Error, Result, C64};

/// How the optimiser obtains parameter gradients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientMode {
    /// Closed-form matrix gradient pulled back through the ansatz.
    Analytic,
    /// Central differences with step `grad_step`.
    FiniteDifference,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub grad_step: f64,
    pub tol_objective: f64,
    pub seed: u64,
    pub floor: f64,
    /// Mixture size; `None` means `4·dim_a·dim_b`.
    pub components: Option<usize>,
    pub gradient: GradientMode,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 2000,
            grad_step: 1e-5,
            tol_objective: 1e-7,
            seed: 0,
            floor: DEFAULT_FLOOR,
            components: None,
            gradient: GradientMode::Analytic,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("optimizer option {what} must be positive")));
        if self.restarts == 0 {
            return bad("restarts");
        }
        if self.max_iters == 0 {
            return bad("max_iters");
        }
        if !(self.grad_step > 0.0) {
            return bad("grad_step");
        }
        if !(self.tol_objective > 0.0) {
            return bad("tol_objective");
        }
        if !(self.floor > 0.0) {
            return bad("floor");
        }
        if self.components == Some(0) {
            return bad("components");
        }
        Ok(())
    }

    pub fn components_for(&self, cut: Bipartition) -> usize {
        self.components.unwrap_or(4 * cut.dim_a * cut.dim_b)
    }
}

#[derive(Clone, Debug)]
pub struct REEResult {
    pub value: EntropyValue,
    pub closest_state: DensityMatrix,
    pub converged: bool,
    pub restarts_used: usize,
    pub best_restart_seed: u64,
    pub iterations: usize,
    /// Best objective of each restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// Mixes a base seed with an index (splitmix64 finaliser).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Restart {
    seed: u64,
    params: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Relative entropy of entanglement of `rho` across `cut`.
pub fn ree(rho: &DensityMatrix, cut: Bipartition, p: RenyiParameter, opts: &OptimizerOptions) -> Result<REEResult> {
    cut.check(rho.dim())?;
    opts.validate()?;
    let objective = DivergenceObjective::new(rho, p, opts.floor)?;
    let k = opts.components_for(cut);

    let restarts: Vec<Restart> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| run_restart(&objective, cut, k, derive_seed(opts.seed, r as u64), opts))
        .collect();

    let best = restarts
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one restart");
    let closest = SeparableAnsatz::from_params(cut, &best.params)?.realize()?;
    let value = rel_entropy(rho, &closest, p, opts.floor)?;
    Ok(REEResult {
        value,
        closest_state: closest,
        converged: best.converged,
        restarts_used: restarts.len(),
        best_restart_seed: best.seed,
        iterations: best.iterations,
        restart_values: restarts.iter().map(|r| r.value).collect(),
    })
}

fn run_restart(objective: &DivergenceObjective, cut: Bipartition, k: usize, seed: u64, opts: &OptimizerOptions) -> Restart {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = SeparableAnsatz::random(cut, k, &mut rng).to_params();
    let settings = lbfgs::Settings { max_iters: opts.max_iters, tol: opts.tol_objective, window: 10 };
    let out = match opts.gradient {
        GradientMode::Analytic => lbfgs::minimize(x0, &settings, |x| analytic(objective, cut, x)),
        GradientMode::FiniteDifference => {
            lbfgs::minimize(x0, &settings, |x| finite_difference(objective, cut, x, opts.grad_step))
        }
    };
    Restart { seed, params: out.x, value: out.value, iterations: out.iterations, converged: out.converged }
}

fn ansatz_value(objective: &DivergenceObjective, cut: Bipartition, x: &[f64]) -> f64 {
    let ans = SeparableAnsatz::from_params(cut, x).expect("fixed layout");
    objective.value(&ans.realize_matrix())
}

fn analytic(objective: &DivergenceObjective, cut: Bipartition, x: &[f64]) -> (f64, Vec<f64>) {
    let ans = SeparableAnsatz::from_params(cut, x).expect("fixed layout");
    match objective.value_and_gradient(&ans.realize_matrix()) {
        (v, Some(g)) => (v, ans.pullback(&g)),
        (v, None) => (v, vec![f64::NAN; x.len()]),
    }
}

fn finite_difference(objective: &DivergenceObjective, cut: Bipartition, x: &[f64], h: f64) -> (f64, Vec<f64>) {
    let value = ansatz_value(objective, cut, x);
    let mut grad = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = ansatz_value(objective, cut, &probe);
        probe[i] = x[i] - h;
        let down = ansatz_value(objective, cut, &probe);
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    (value, grad)
}

/// Gradient of `θ ↦ D(ρ‖σ(θ))` at `params`, in either mode.
pub fn objective_gradient(
    rho: &DensityMatrix,
    cut: Bipartition,
    p: RenyiParameter,
    params: &[f64],
    mode: GradientMode,
    opts: &OptimizerOptions,
) -> Result<(f64, Vec<f64>)> {
    cut.check(rho.dim())?;
    SeparableAnsatz::from_params(cut, params)?;
    let objective = DivergenceObjective::new(rho, p, opts.floor)?;
    Ok(match mode {
        GradientMode::Analytic => analytic(&objective, cut, params),
        GradientMode::FiniteDifference => finite_difference(&objective, cut, params, opts.grad_step),
    })
}

/// Entanglement entropy `S(Tr_B |ψ⟩⟨ψ|)` of a normalised pure state.
pub fn schmidt_entropy(psi: &[C64], cut: Bipartition) -> Result<EntropyValue> {
    cut.check(psi.len())?;
    let n2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (n2 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(n2.sqrt()));
    }
    let rho = DensityMatrix::from_pure(psi)?;
    let reduced = partial_trace(&rho, &[cut.dim_a, cut.dim_b], &[0])?;
    Ok(von_neumann_entropy(&reduced))
}

/// Random separable states biased towards the marginal eigenbases of a target.
///
/// Each sample has `K` uniform in `1..=dim_a·dim_b` terms with Dirichlet(1)
/// weights; each local vector is Haar-random or, with probability one half,
/// an eigenvector of the corresponding marginal of the target.
pub struct SeparableSampler {
    cut: Bipartition,
    basis_a: Vec<Vec<C64>>,
    basis_b: Vec<Vec<C64>>,
}

impl SeparableSampler {
    pub fn new(rho: &DensityMatrix, cut: Bipartition) -> Result<Self> {
        cut.check(rho.dim())?;
        let dims = [cut.dim_a, cut.dim_b];
        let eigvecs = |keep: usize| -> Result<Vec<Vec<C64>>> {
            let m = partial_trace(rho, &dims, &[keep])?;
            let s = eig_hermitian(m.matrix())?;
            Ok((0..s.dim()).map(|k| s.eigenvector(k)).collect())
        };
        Ok(Self { cut, basis_a: eigvecs(0)?, basis_b: eigvecs(1)? })
    }

    /// The `index`-th sample of the stream seeded by `seed`.
    pub fn sample(&self, seed: u64, index: u64) -> DensityMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, index));
        let k = rng.random_range(1..=self.cut.dim_a * self.cut.dim_b);
        let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        let n = self.cut.dim();
        let mut sigma = ComplexMatrix::zeros(n, n);
        for w in raw {
            let a = local_vector(&mut rng, &self.basis_a);
            let b = local_vector(&mut rng, &self.basis_b);
            let psi = crate::qmat::kron_vec(&a, &b);
            let proj = ComplexMatrix::outer(&psi).scale(w / total);
            sigma = &sigma + &proj;
        }
        DensityMatrix::new_unchecked(sigma.hermitian_part())
    }
}

fn local_vector(rng: &mut ChaCha8Rng, basis: &[Vec<C64>]) -> Vec<C64> {
    if rng.random_bool(0.5) {
        return basis[rng.random_range(0..basis.len())].clone();
    }
    let v: Vec<C64> = (0..basis.len())
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Minimum of `D(ρ‖σ)` over `n_samples` random separable `σ`: an upper bound
/// on the relative entropy of entanglement that shares no code with [`ree`]'s
/// optimiser.
pub fn sample_upper_bound(
    rho: &DensityMatrix,
    cut: Bipartition,
    p: RenyiParameter,
    n_samples: usize,
    seed: u64,
) -> Result<EntropyValue> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    p.validate()?;
    let sampler = SeparableSampler::new(rho, cut)?;
    let values: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            rel_entropy(rho, &sampler.sample(seed, i), p, DEFAULT_FLOOR)
                .map(|v| v.nats)
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    Ok(EntropyValue::new(values.into_iter().fold(f64::INFINITY, f64::min)))
}
