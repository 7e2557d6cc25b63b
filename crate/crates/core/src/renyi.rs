//! Rényi entropies and Rényi relative entropies.
//!
//! Both divergences use the `1/(α-1)` prefactor so that they are
//! non-negative and reduce to the Umegaki relative entropy as `α → 1`:
//!
//! - traditional (Petz): `D_α(ρ‖σ) = ln Tr(ρ^α σ^{1-α}) / (α-1)`, `0 < α ≤ 2`
//! - sandwiched: `D̃_α(ρ‖σ) = ln Tr[(σ^s ρ σ^s)^α] / (α-1)`, `s = (1-α)/(2α)`, `α ≥ 1/2`
//!
//! `α = 1` is evaluated exactly through the Umegaki formula for both variants.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{numerical_rank, operator_norm, ComplexMatrix, DensityMatrix, SpectralDecomposition};

/// Eigenvalues at or below this are treated as exact zeros in `0^α` and
/// `0 ln 0`.
const ZERO_EIGENVALUE: f64 = 1e-15;
/// `ρ`-weight on a numerically null direction of `σ` that makes the
/// Umegaki divergence infinite.
const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

/// An entropy or divergence in nats. `+∞` marks an infinite divergence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub nats: f64,
}

impl EntropyValue {
    pub fn new(nats: f64) -> Self {
        Self { nats }
    }

    pub fn infinite() -> Self {
        Self { nats: f64::INFINITY }
    }

    pub fn is_infinite(&self) -> bool {
        self.nats.is_infinite()
    }
}

impl PartialOrd for EntropyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.nats.partial_cmp(&other.nats)
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{:.9}", self.nats)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Traditional,
    Sandwiched,
}

impl Variant {
    pub fn short_name(&self) -> &'static str {
        match self {
            Variant::Traditional => "trad",
            Variant::Sandwiched => "sand",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trad" | "traditional" | "petz" => Ok(Variant::Traditional),
            "sand" | "sandwiched" => Ok(Variant::Sandwiched),
            other => Err(Error::InvalidArgument(format!("unknown variant '{other}'"))),
        }
    }
}

/// Rényi order together with the divergence family it selects.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenyiParameter {
    pub alpha: f64,
    pub variant: Variant,
}

/// Largest sandwiched order accepted by [`RenyiParameter::new`].
pub const SANDWICHED_ALPHA_CAP: f64 = 64.0;

impl RenyiParameter {
    /// Validated constructor. `α = 1` is admissible for both variants.
    pub fn new(alpha: f64, variant: Variant) -> Result<Self> {
        let p = Self { alpha, variant };
        p.validate()?;
        Ok(p)
    }

    pub fn traditional(alpha: f64) -> Result<Self> {
        Self::new(alpha, Variant::Traditional)
    }

    pub fn sandwiched(alpha: f64) -> Result<Self> {
        Self::new(alpha, Variant::Sandwiched)
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.alpha;
        let ok = match self.variant {
            Variant::Traditional => a > 0.0 && a <= 2.0,
            Variant::Sandwiched => (0.5..=SANDWICHED_ALPHA_CAP).contains(&a),
        };
        if ok && a.is_finite() {
            Ok(())
        } else {
            Err(Error::AlphaOutOfRange {
                alpha: a,
                variant: match self.variant {
                    Variant::Traditional => "traditional",
                    Variant::Sandwiched => "sandwiched",
                },
            })
        }
    }

    pub fn is_umegaki(&self) -> bool {
        self.alpha == 1.0
    }
}

impl fmt::Display for RenyiParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.alpha, self.variant)
    }
}

impl FromStr for RenyiParameter {
    type Err = Error;
    /// Parses `alpha` or `alpha:variant` (variant defaults to traditional
    /// when `alpha ≤ 2`, sandwiched otherwise).
    fn from_str(s: &str) -> Result<Self> {
        let (a, v) = match s.split_once(':') {
            Some((a, v)) => (a, Some(v)),
            None => (s, None),
        };
        let alpha: f64 = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad alpha '{a}'")))?;
        let variant = match v {
            Some(v) => v.parse()?,
            None if alpha <= 2.0 => Variant::Traditional,
            None => Variant::Sandwiched,
        };
        Self::new(alpha, variant)
    }
}

fn clamped_eigenvalues(rho: &DensityMatrix) -> Vec<f64> {
    rho.spectrum()
        .eigenvalues
        .into_iter()
        .map(|l| if l > ZERO_EIGENVALUE { l } else { 0.0 })
        .collect()
}

fn von_neumann_of(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Von Neumann entropy `-Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> EntropyValue {
    EntropyValue::new(von_neumann_of(&clamped_eigenvalues(rho)))
}

/// Rényi entropy `ln Tr ρ^α / (1-α)`; von Neumann entropy at `α = 1`.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64) -> Result<EntropyValue> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    let eigs = clamped_eigenvalues(rho);
    if alpha == 1.0 {
        return Ok(EntropyValue::new(von_neumann_of(&eigs)));
    }
    // ln Σ λ^α with the largest eigenvalue factored out, so large α does not underflow.
    let top = eigs.iter().copied().fold(0.0, f64::max);
    let rest: f64 = eigs.iter().filter(|&&l| l > 0.0).map(|&l| (l / top).powf(alpha)).sum();
    Ok(EntropyValue::new((alpha * top.ln() + rest.ln()) / (1.0 - alpha)))
}

/// `S_min = -ln ‖ρ‖`.
pub fn min_entropy(rho: &DensityMatrix) -> EntropyValue {
    EntropyValue::new(-operator_norm(rho).ln())
}

/// `S_max = ln rank(ρ)`.
pub fn max_entropy(rho: &DensityMatrix, tol: f64) -> EntropyValue {
    EntropyValue::new((numerical_rank(rho, tol) as f64).ln())
}

/// `S_c = -ln Tr ρ²`.
pub fn collision_entropy(rho: &DensityMatrix) -> EntropyValue {
    EntropyValue::new(-rho.purity().ln())
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "rho is {}-dimensional, sigma is {}-dimensional",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// Power of a PSD spectrum. Positive exponents send non-positive
/// eigenvalues to zero; negative exponents floor them first.
fn psd_power(l: f64, p: f64, floor: f64) -> f64 {
    if p >= 0.0 {
        if l > ZERO_EIGENVALUE {
            l.powf(p)
        } else {
            0.0
        }
    } else {
        l.max(floor).powf(p)
    }
}

fn spectral_power(eig: &SpectralDecomposition, p: f64, floor: f64) -> ComplexMatrix {
    eig.map(|l| psd_power(l, p, floor))
}

/// Umegaki relative entropy `Tr ρ(ln ρ - ln σ)`.
///
/// Returns `+∞` when `ρ` puts weight above `1e-10` on an eigenvector of
/// `σ` whose eigenvalue is below `floor`.
pub fn kl_rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, floor: f64) -> Result<EntropyValue> {
    check_dims(rho, sigma)?;
    let neg_entropy = -von_neumann_of(&clamped_eigenvalues(rho));
    let ss = sigma.spectrum();
    Ok(EntropyValue::new(neg_entropy + cross_term(rho, &ss, floor)))
}

/// `-Tr ρ ln σ`, or `+∞` on a support mismatch.
fn cross_term(rho: &DensityMatrix, ss: &SpectralDecomposition, floor: f64) -> f64 {
    let r = ss.to_eigenbasis(rho.matrix());
    let mut acc = 0.0;
    for (k, &mu) in ss.eigenvalues.iter().enumerate() {
        let w = r[(k, k)].re;
        if mu < floor {
            if w > SUPPORT_WEIGHT_TOL {
                return f64::INFINITY;
            }
            acc -= w.max(0.0) * floor.ln();
        } else {
            acc -= w * mu.ln();
        }
    }
    acc
}

/// Traditional (Petz) Rényi relative entropy, `0 < α ≤ 2`.
pub fn trad_rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, floor: f64) -> Result<EntropyValue> {
    check_dims(rho, sigma)?;
    RenyiParameter::traditional(alpha)?;
    if alpha == 1.0 {
        return kl_rel_entropy(rho, sigma, floor);
    }
    let rho_a = spectral_power(&rho.spectrum(), alpha, floor);
    let sigma_b = spectral_power(&sigma.spectrum(), 1.0 - alpha, floor);
    let q = rho_a.trace_product(&sigma_b).re;
    Ok(EntropyValue::new(log_q_over(q, alpha)))
}

/// Sandwiched Rényi relative entropy, `α ≥ 1/2`.
pub fn sand_rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, floor: f64) -> Result<EntropyValue> {
    check_dims(rho, sigma)?;
    if !(alpha >= 0.5) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange {
            alpha,
            variant: "sandwiched",
        });
    }
    if alpha == 1.0 {
        return kl_rel_entropy(rho, sigma, floor);
    }
    let s = (1.0 - alpha) / (2.0 * alpha);
    let sigma_s = spectral_power(&sigma.spectrum(), s, floor);
    let a = (&sigma_s * rho.matrix()) * &sigma_s;
    let a = DensityMatrix::new_unchecked(a.hermitian_part());
    let q: f64 = a
        .spectrum()
        .eigenvalues
        .iter()
        .map(|&m| psd_power(m, alpha, floor))
        .sum();
    Ok(EntropyValue::new(log_q_over(q, alpha)))
}

fn log_q_over(q: f64, alpha: f64) -> f64 {
    if q <= 0.0 {
        // Orthogonal supports with α < 1.
        return f64::INFINITY;
    }
    q.ln() / (alpha - 1.0)
}

/// Dispatches on the variant; `α = 1` goes to the Umegaki formula.
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, p: RenyiParameter, floor: f64) -> Result<EntropyValue> {
    p.validate()?;
    if p.is_umegaki() {
        return kl_rel_entropy(rho, sigma, floor);
    }
    match p.variant {
        Variant::Traditional => trad_rel_entropy(rho, sigma, p.alpha, floor),
        Variant::Sandwiched => sand_rel_entropy(rho, sigma, p.alpha, floor),
    }
}

/// `D(ρ‖·)` for a fixed `ρ`, with the gradient with respect to `σ`.
///
/// Everything that depends only on `ρ` is computed once. The gradient is
/// returned as the Hermitian matrix `G` with `dD = Tr(G dσ)`, obtained from
/// the Daleckii-Krein formula for derivatives of spectral functions.
#[derive(Clone, Debug)]
pub struct DivergenceObjective {
    param: RenyiParameter,
    floor: f64,
    rho: ComplexMatrix,
    /// `Tr ρ ln ρ` for the Umegaki case.
    neg_entropy: f64,
    /// `ρ^α` for the traditional case.
    rho_alpha: Option<ComplexMatrix>,
}

impl DivergenceObjective {
    pub fn new(rho: &DensityMatrix, param: RenyiParameter, floor: f64) -> Result<Self> {
        param.validate()?;
        let eig = rho.spectrum();
        let neg_entropy = -von_neumann_of(
            &eig
                .eigenvalues
                .iter()
                .map(|&l| if l > ZERO_EIGENVALUE { l } else { 0.0 })
                .collect::<Vec<_>>(),
        );
        let rho_alpha = (!param.is_umegaki() && param.variant == Variant::Traditional)
            .then(|| spectral_power(&eig, param.alpha, floor));
        Ok(Self {
            param,
            floor,
            rho: rho.matrix().clone(),
            neg_entropy,
            rho_alpha,
        })
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn param(&self) -> RenyiParameter {
        self.param
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn value(&self, sigma: &ComplexMatrix) -> f64 {
        self.evaluate(sigma, false).0
    }

    /// Divergence and its gradient matrix. The gradient is `None` when the
    /// value is infinite.
    pub fn value_and_gradient(&self, sigma: &ComplexMatrix) -> (f64, Option<ComplexMatrix>) {
        self.evaluate(sigma, true)
    }

    fn evaluate(&self, sigma: &ComplexMatrix, want_grad: bool) -> (f64, Option<ComplexMatrix>) {
        let ss = crate::qmat::eig_hermitian(sigma).expect("sigma is Hermitian");
        let floor = self.floor;
        let alpha = self.param.alpha;
        if self.param.is_umegaki() {
            let rho = DensityMatrix::new_unchecked(self.rho.clone());
            let cross = cross_term(&rho, &ss, floor);
            let value = self.neg_entropy + cross;
            if !value.is_finite() || !want_grad {
                return (value, None);
            }
            // d(-Tr ρ ln σ) = -Tr(ρ D ln[dσ])
            let r = ss.to_eigenbasis(&self.rho);
            let g = daleckii_krein(&ss, &r, floor, |x| x.ln(), |x| 1.0 / x);
            return (value, Some(ss.from_eigenbasis(&g).scale(-1.0)));
        }
        match self.param.variant {
            Variant::Traditional => {
                let p = 1.0 - alpha;
                let rho_a = self.rho_alpha.as_ref().unwrap();
                let sigma_p = spectral_power(&ss, p, floor);
                let q = rho_a.trace_product(&sigma_p).re;
                let value = log_q_over(q, alpha);
                if !value.is_finite() || !want_grad {
                    return (value, None);
                }
                let r = ss.to_eigenbasis(rho_a);
                let g = daleckii_krein(&ss, &r, floor, |x| x.powf(p), |x| p * x.powf(p - 1.0));
                let grad = ss.from_eigenbasis(&g).scale(1.0 / ((alpha - 1.0) * q));
                (value, Some(grad))
            }
            Variant::Sandwiched => {
                let s = (1.0 - alpha) / (2.0 * alpha);
                let sigma_s = spectral_power(&ss, s, floor);
                let a = (&(&sigma_s * &self.rho) * &sigma_s).hermitian_part();
                let sa = crate::qmat::eig_hermitian(&a).expect("Hermitian");
                let top = sa.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
                let q: f64 = sa.eigenvalues.iter().map(|&m| psd_power(m, alpha, floor)).sum();
                let value = log_q_over(q, alpha);
                if !value.is_finite() || !want_grad {
                    return (value, None);
                }
                // A^{α-1} on the support of A only; the perturbation keeps
                // A's rank, so null directions do not contribute.
                let cutoff = 1e-13 * top.max(f64::MIN_POSITIVE);
                let a_pow = sa.map(|m| if m > cutoff { m.powf(alpha - 1.0) } else { 0.0 });
                let left = &(&self.rho * &sigma_s) * &a_pow;
                let b = &left + &left.adjoint();
                let r = ss.to_eigenbasis(&b);
                let g = daleckii_krein(&ss, &r, floor, |x| x.powf(s), |x| s * x.powf(s - 1.0));
                let grad = ss.from_eigenbasis(&g).scale(alpha / ((alpha - 1.0) * q));
                (value, Some(grad))
            }
        }
    }
}

/// `Γ ∘ R` where `Γ_ij` is the first divided difference of `f` on the
/// (floored) eigenvalues of `σ`; `R` is given in the eigenbasis of `σ`.
fn daleckii_krein<F, D>(ss: &SpectralDecomposition, r: &ComplexMatrix, floor: f64, f: F, df: D) -> ComplexMatrix
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let n = ss.dim();
    let lam: Vec<f64> = ss.eigenvalues.iter().map(|&l| l.max(floor)).collect();
    let fl: Vec<f64> = lam.iter().map(|&l| f(l)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (lam[i], lam[j]);
            let gamma = if (li - lj).abs() > 1e-9 * li.max(lj) {
                (fl[i] - fl[j]) / (li - lj)
            } else {
                df(0.5 * (li + lj))
            };
            out[(i, j)] = r[(i, j)] * gamma;
        }
    }
    // Force exact Hermiticity of the result.
    out.hermitian_part()
}
