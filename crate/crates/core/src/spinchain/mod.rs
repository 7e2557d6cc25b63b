//! Three-site periodic spin chains and their thermal states.
//!
//! Site `i` couples to site `i+1` with site 4 identified with site 1. Qubit 1
//! is the leftmost tensor factor and `σ_z = diag(1, -1)`.

mod analytic;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use analytic::{tfi_analytic, xxz_partition_function, xxz_spectrum, xyz_analytic, TFIAnalytic, XYZAnalytic};

use crate::qmat::{eig_hermitian, kron, pauli_x, pauli_y, pauli_z, ComplexMatrix, DensityMatrix, SpectralDecomposition};
use crate::statezoo::PureState3;
use crate::{Error, Result};

/// Model and couplings. Energies are in units with `k_B = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    /// `Σ Jx σˣσˣ + Jy σʸσʸ + Jz σᶻσᶻ`
    Xyz { jx: f64, jy: f64, jz: f64 },
    /// `J Σ (σˣσˣ + σʸσʸ + Δ σᶻσᶻ)`, `Δ > -1`
    Xxz { j: f64, delta: f64 },
    /// `J Σ ((1+γ)/2 σˣσˣ + (1-γ)/2 σʸσʸ)`, `0 ≤ γ ≤ 1`
    Xy { j: f64, gamma: f64 },
    /// `Σ (λ σˣσˣ + σᶻ)`
    Tfi { lambda: f64 },
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = match *self {
            ModelParams::Xyz { jx, jy, jz } => [jx, jy, jz].iter().all(|v| v.is_finite()),
            ModelParams::Xxz { j, delta } => j.is_finite() && delta.is_finite(),
            ModelParams::Xy { j, gamma } => j.is_finite() && gamma.is_finite(),
            ModelParams::Tfi { lambda } => lambda.is_finite(),
        };
        if !finite {
            return Err(Error::InvalidModel(format!("{self}: couplings must be finite")));
        }
        match *self {
            ModelParams::Xxz { delta, .. } if delta <= -1.0 => {
                Err(Error::InvalidModel(format!("XXZ anisotropy must satisfy Δ > -1, got {delta}")))
            }
            ModelParams::Xy { gamma, .. } if !(0.0..=1.0).contains(&gamma) => {
                Err(Error::InvalidModel(format!("XY anisotropy must lie in [0, 1], got {gamma}")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelParams::Xyz { .. } => "xyz",
            ModelParams::Xxz { .. } => "xxz",
            ModelParams::Xy { .. } => "xy",
            ModelParams::Tfi { .. } => "tfi",
        }
    }

    /// Parameter names in canonical order.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            ModelParams::Xyz { .. } => &["jx", "jy", "jz"],
            ModelParams::Xxz { .. } => &["j", "delta"],
            ModelParams::Xy { .. } => &["j", "gamma"],
            ModelParams::Tfi { .. } => &["lambda"],
        }
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        match (*self, name) {
            (ModelParams::Xyz { jx, .. }, "jx") => Ok(jx),
            (ModelParams::Xyz { jy, .. }, "jy") => Ok(jy),
            (ModelParams::Xyz { jz, .. }, "jz") => Ok(jz),
            (ModelParams::Xxz { j, .. } | ModelParams::Xy { j, .. }, "j") => Ok(j),
            (ModelParams::Xxz { delta, .. }, "delta") => Ok(delta),
            (ModelParams::Xy { gamma, .. }, "gamma") => Ok(gamma),
            (ModelParams::Tfi { lambda }, "lambda") => Ok(lambda),
            _ => Err(Error::InvalidModel(format!("model {} has no parameter {name:?}", self.name()))),
        }
    }

    /// Copy with one parameter replaced, validated.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        self.get(name)?;
        let mut out = *self;
        match (&mut out, name) {
            (ModelParams::Xyz { jx, .. }, "jx") => *jx = value,
            (ModelParams::Xyz { jy, .. }, "jy") => *jy = value,
            (ModelParams::Xyz { jz, .. }, "jz") => *jz = value,
            (ModelParams::Xxz { j, .. } | ModelParams::Xy { j, .. }, "j") => *j = value,
            (ModelParams::Xxz { delta, .. }, "delta") => *delta = value,
            (ModelParams::Xy { gamma, .. }, "gamma") => *gamma = value,
            (ModelParams::Tfi { lambda }, "lambda") => *lambda = value,
            _ => unreachable!(),
        }
        out.validate()?;
        Ok(out)
    }

    /// `(Jx, Jy, Jz)` for the models that are special cases of XYZ.
    pub fn as_xyz(&self) -> Option<(f64, f64, f64)> {
        match *self {
            ModelParams::Xyz { jx, jy, jz } => Some((jx, jy, jz)),
            ModelParams::Xxz { j, delta } => Some((j, j, j * delta)),
            ModelParams::Xy { j, gamma } => Some((j * (1.0 + gamma) / 2.0, j * (1.0 - gamma) / 2.0, 0.0)),
            ModelParams::Tfi { .. } => None,
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelParams::Xyz { jx, jy, jz } => write!(f, "xyz(jx={jx}, jy={jy}, jz={jz})"),
            ModelParams::Xxz { j, delta } => write!(f, "xxz(j={j}, delta={delta})"),
            ModelParams::Xy { j, gamma } => write!(f, "xy(j={j}, gamma={gamma})"),
            ModelParams::Tfi { lambda } => write!(f, "tfi(lambda={lambda})"),
        }
    }
}

/// `o` acting on `site` (0-based) of three qubits.
fn on_site(o: &ComplexMatrix, site: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let f: Vec<&ComplexMatrix> = (0..3).map(|k| if k == site { o } else { &id }).collect();
    kron(&kron(f[0], f[1]), f[2])
}

/// `Σ_i o_i o_{i+1}` around the ring.
fn ring_bond(o: &ComplexMatrix) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(8, 8);
    for i in 0..3 {
        h = &h + &(&on_site(o, i) * &on_site(o, (i + 1) % 3));
    }
    h
}

fn xyz_matrix(jx: f64, jy: f64, jz: f64) -> ComplexMatrix {
    let xx = ring_bond(&pauli_x()).scale(jx);
    let yy = ring_bond(&pauli_y()).scale(jy);
    let zz = ring_bond(&pauli_z()).scale(jz);
    &(&xx + &yy) + &zz
}

pub fn hamiltonian(params: &ModelParams) -> Result<ComplexMatrix> {
    params.validate()?;
    Ok(match *params {
        ModelParams::Tfi { lambda } => {
            let mut field = ComplexMatrix::zeros(8, 8);
            for i in 0..3 {
                field = &field + &on_site(&pauli_z(), i);
            }
            &ring_bond(&pauli_x()).scale(lambda) + &field
        }
        _ => {
            let (jx, jy, jz) = params.as_xyz().expect("xyz family");
            xyz_matrix(jx, jy, jz)
        }
    })
}

/// `ρ = e^{-βH}/Z`. `ln Z` is kept rather than `Z`, which overflows at low
/// temperature.
#[derive(Clone, Debug)]
pub struct ThermalState {
    pub rho: DensityMatrix,
    pub temperature: f64,
    pub beta: f64,
    pub ln_partition_function: f64,
    /// Eigen-decomposition of `H`, shared with `ρ`.
    pub spectrum: SpectralDecomposition,
}

impl ThermalState {
    pub fn partition_function(&self) -> f64 {
        self.ln_partition_function.exp()
    }
}

pub fn thermal_state(h: &ComplexMatrix, t: f64) -> Result<ThermalState> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTemperature(t));
    }
    let eig = eig_hermitian(h)?;
    let beta = 1.0 / t;
    let e0 = eig.eigenvalues[0];
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&e| (-(e - e0) * beta).exp()).collect();
    let sum: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / sum).collect();
    let m = eig.from_eigenbasis(&ComplexMatrix::from_diag(&probs));
    let rho = DensityMatrix::new(m.hermitian_part())?;
    Ok(ThermalState {
        rho,
        temperature: t,
        beta,
        ln_partition_function: -beta * e0 + sum.ln(),
        spectrum: eig,
    })
}

/// Thermal state of a model at temperature `t`.
pub fn model_thermal_state(params: &ModelParams, t: f64) -> Result<ThermalState> {
    thermal_state(&hamiltonian(params)?, t)
}

/// Lowest eigenvector of `h`, phase-fixed. Fails when the ground level is
/// degenerate, which is always the case for the time-reversal symmetric
/// XYZ family on three sites.
pub fn ground_state(h: &ComplexMatrix) -> Result<PureState3> {
    if h.rows() != 8 || !h.is_square() {
        return Err(Error::DimensionMismatch(format!("expected 8×8 Hamiltonian, got {}×{}", h.rows(), h.cols())));
    }
    let eig = eig_hermitian(h)?;
    let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
    if gap <= 1e-10 {
        return Err(Error::DegenerateGround(gap));
    }
    PureState3::normalized(&eig.eigenvector(0))
}

/// Angle `φ` such that the spin-flipped `state` is closest to
/// `statezoo::tfi_ground(φ)`, with the fidelity of that fit.
pub fn tfi_ground_angle(state: &PureState3) -> (f64, f64) {
    let flipped = state.spin_flip();
    let a = flipped.amplitudes();
    let s = a[0];
    let c = (a[3] + a[5] + a[6]) / 3f64.sqrt();
    // Align the global phase with the larger component.
    let phase = if s.norm() >= c.norm() { s.conj() / s.norm() } else { c.conj() / c.norm() };
    let (s, c) = ((s * phase).re, (c * phase).re);
    let phi = s.atan2(c);
    let fidelity = crate::statezoo::tfi_ground(phi).overlap(&flipped).norm();
    (phi, fidelity)
}
