//! Closed-form spectra and thermal matrices.
//!
//! Both thermal matrices share one sparsity pattern in the computational
//! basis; only the element formulas differ.

use std::f64::consts::PI;

use super::ModelParams;
use crate::qmat::{ComplexMatrix, DensityMatrix};
use crate::{Error, Result, C64};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Debug, PartialEq)]
pub struct XYZAnalytic {
    /// `E₀ … E₇`, indexed like the eigenvectors, not sorted.
    pub eigenvalues: [f64; 8],
    pub phi0: f64,
    pub phi1: f64,
    pub eta: f64,
    /// `e^{-(Jx+Jy+Jz)/T}`
    pub x: f64,
    pub u: f64,
    pub v: f64,
    pub w1: f64,
    pub w2: f64,
    pub y1: f64,
    pub y2: f64,
    pub q1: f64,
    pub q2: f64,
    /// `e^{i2π/3}`
    pub q: C64,
    pub partition_function: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TFIAnalytic {
    pub eta1: f64,
    pub eta2: f64,
    pub phi0: f64,
    pub phi1: f64,
    pub u: f64,
    pub v: f64,
    pub w1: f64,
    pub w2: f64,
    pub y1: f64,
    pub y2: f64,
    pub q1: f64,
    pub q2: f64,
    pub partition_function: f64,
}

/// The shared 8×8 pattern, before division by `Z`.
#[allow(clippy::too_many_arguments)]
fn assemble(u: f64, v: f64, w1: f64, w2: f64, y1: f64, y2: f64, q1: f64, q2: f64) -> ComplexMatrix {
    #[rustfmt::skip]
    let m = [
        u,  0., 0., q1, 0., q1, q1, 0.,
        0., w1, y1, 0., y1, 0., 0., q2,
        0., y1, w1, 0., y1, 0., 0., q2,
        q1, 0., 0., w2, 0., y2, y2, 0.,
        0., y1, y1, 0., w1, 0., 0., q2,
        q1, 0., 0., y2, 0., w2, y2, 0.,
        q1, 0., 0., y2, 0., y2, w2, 0.,
        0., q2, q2, 0., q2, 0., 0., v,
    ];
    ComplexMatrix::from_real(8, 8, &m).expect("8x8")
}

fn normalized(m: ComplexMatrix, z: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(m.scale(1.0 / z)).map_err(|e| Error::Numeric(format!("closed-form thermal state: {e}")))
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTemperature(t))
    }
}

/// Mixing angle of `|↓↓↓⟩` with the symmetric one-flip state, with
/// `δ = Jx - Jy` and `c = Jx + Jy - 2Jz`. The two arctan forms agree
/// modulo π; each is evaluated where its denominator cannot cancel.
fn mixing_angle(delta: f64, c: f64, eta: f64) -> f64 {
    if c >= 0.0 {
        (eta + c).atan2(SQRT_3 * delta)
    } else {
        (SQRT_3 * delta).atan2(eta - c)
    }
}

/// Closed-form thermal state of the XYZ family (XYZ, XXZ and XY).
pub fn xyz_analytic(params: &ModelParams, t: f64) -> Result<(DensityMatrix, XYZAnalytic)> {
    params.validate()?;
    check_temperature(t)?;
    let (jx, jy, jz) = params
        .as_xyz()
        .ok_or_else(|| Error::InvalidModel(format!("{params} is not in the XYZ family")))?;
    let sum = jx + jy + jz;
    let delta = jx - jy;
    let c = jx + jy - 2.0 * jz;
    let eta = (3.0 * delta * delta + c * c).sqrt();
    let phi = mixing_angle(delta, c, eta);
    let (phi0, phi1) = (phi, phi);
    let x = (-sum / t).exp();
    let (em, ep) = ((-eta / t).exp(), (eta / t).exp());
    let (c0, s0) = (phi0.cos().powi(2), phi0.sin().powi(2));
    let (c1, s1) = (phi1.cos().powi(2), phi1.sin().powi(2));
    let u = x * (em * c0 + ep * s0);
    let v = x * (em * c1 + ep * s1);
    let w1 = x / 3.0 * (2.0 / (x * x) + ep * c1 + em * s1);
    let w2 = x / 3.0 * (2.0 / (x * x) + ep * c0 + em * s0);
    let y1 = x / 3.0 * (-1.0 / (x * x) + ep * c1 + em * s1);
    let y2 = x / 3.0 * (-1.0 / (x * x) + ep * c0 + em * s0);
    let sh = (eta / t).sinh();
    let q1 = -2.0 / SQRT_3 * x * phi0.cos() * phi0.sin() * sh;
    let q2 = -2.0 / SQRT_3 * x * phi1.cos() * phi1.sin() * sh;
    let z = 4.0 / x + 4.0 * x * (eta / t).cosh();
    let (hi, mid, lo) = (sum + eta, -sum, sum - eta);
    let info = XYZAnalytic {
        eigenvalues: [hi, mid, mid, lo, mid, mid, lo, hi],
        phi0,
        phi1,
        eta,
        x,
        u,
        v,
        w1,
        w2,
        y1,
        y2,
        q1,
        q2,
        q: C64::from_polar(1.0, 2.0 * PI / 3.0),
        partition_function: z,
    };
    Ok((normalized(assemble(u, v, w1, w2, y1, y2, q1, q2), z)?, info))
}

/// Closed-form thermal state of the transverse-field Ising ring, with
/// coupling `J = λ` and field `B = 1`.
pub fn tfi_analytic(params: &ModelParams, t: f64) -> Result<(DensityMatrix, TFIAnalytic)> {
    params.validate()?;
    check_temperature(t)?;
    let ModelParams::Tfi { lambda } = *params else {
        return Err(Error::InvalidModel(format!("{params} is not a transverse-field Ising model")));
    };
    let (j, b) = (lambda, 1.0);
    let eta1 = 2.0 * (1.0 - lambda + lambda * lambda).sqrt();
    let eta2 = 2.0 * (1.0 + lambda + lambda * lambda).sqrt();
    let phi0 = (SQRT_3 * lambda).atan2(2.0 - lambda + eta1);
    let phi1 = (2.0 + lambda + eta2).atan2(SQRT_3 * lambda);
    let a = (-(j + b) / t).exp();
    let bb = (-(j - b) / t).exp();
    let (c0, s0) = (phi0.cos().powi(2), phi0.sin().powi(2));
    let (c1, s1) = (phi1.cos().powi(2), phi1.sin().powi(2));
    let (e1m, e1p) = ((-eta1 / t).exp(), (eta1 / t).exp());
    let (e2m, e2p) = ((-eta2 / t).exp(), (eta2 / t).exp());
    let u = a * (e1m * c0 + e1p * s0);
    let v = bb * (e2m * c1 + e2p * s1);
    let w1 = bb / 3.0 * (2.0 * (2.0 * (j - b) / t).exp() + e2p * c1 + e2m * s1);
    let w2 = a / 3.0 * (2.0 * (2.0 * (j + b) / t).exp() + e1p * c0 + e1m * s0);
    let y1 = bb / 3.0 * (-(2.0 * (j - b) / t).exp() + e2p * c1 + e2m * s1);
    let y2 = a / 3.0 * (-(2.0 * (j + b) / t).exp() + e1p * c0 + e1m * s0);
    let q1 = -2.0 / SQRT_3 * a * phi0.cos() * phi0.sin() * (eta1 / t).sinh();
    let q2 = -2.0 / SQRT_3 * bb * phi1.cos() * phi1.sin() * (eta2 / t).sinh();
    let z = 4.0 * (lambda / t).exp() * (1.0 / t).cosh()
        + 2.0 * (-(lambda + 1.0) / t).exp() * (eta1 / t).cosh()
        + 2.0 * (-(lambda - 1.0) / t).exp() * (eta2 / t).cosh();
    let info = TFIAnalytic { eta1, eta2, phi0, phi1, u, v, w1, w2, y1, y2, q1, q2, partition_function: z };
    Ok((normalized(assemble(u, v, w1, w2, y1, y2, q1, q2), z)?, info))
}

/// Energies `E₀ … E₇` and eigenvectors `|ψ₀⟩ … |ψ₇⟩` of the XXZ ring.
///
/// Index `k` of the computational basis is `|s₁s₂s₃⟩` with `s = ↓` for bit 0;
/// the one-flip states are indices 1, 2, 4 and the two-flip states 3, 5, 6.
pub fn xxz_spectrum(params: &ModelParams) -> Result<([f64; 8], Vec<Vec<C64>>)> {
    params.validate()?;
    let ModelParams::Xxz { j, delta } = *params else {
        return Err(Error::InvalidModel(format!("{params} is not an XXZ model")));
    };
    let e_pol = 3.0 * j * delta;
    let e_twist = -2.0 * j * (delta / 2.0 + 1.0);
    let e_sym = -2.0 * j * (delta / 2.0 - 2.0);
    let energies = [e_pol, e_twist, e_twist, e_sym, e_twist, e_twist, e_sym, e_pol];

    let q = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let one = C64::new(1.0, 0.0);
    let n = 1.0 / 3f64.sqrt();
    let basis = |k: usize| -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[k] = one;
        v
    };
    let triple = |idx: [usize; 3], amp: [C64; 3]| -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 8];
        for (i, a) in idx.into_iter().zip(amp) {
            v[i] = a * n;
        }
        v
    };
    // |↓↓↑⟩, |↓↑↓⟩, |↑↓↓⟩ and |↑↑↓⟩, |↑↓↑⟩, |↓↑↑⟩
    let single = [1, 2, 4];
    let double = [6, 5, 3];
    let vectors = vec![
        basis(0),
        triple(single, [q, q * q, one]),
        triple(single, [q * q, q, one]),
        triple(single, [one, one, one]),
        triple(double, [q, q * q, one]),
        triple(double, [q * q, q, one]),
        triple(double, [one, one, one]),
        basis(7),
    ];
    Ok((energies, vectors))
}

/// `Z = 2e^{-3JΔ/T} + 2e^{JΔ/T}(2e^{2J/T} + e^{-4J/T})`.
pub fn xxz_partition_function(params: &ModelParams, t: f64) -> Result<f64> {
    params.validate()?;
    check_temperature(t)?;
    let ModelParams::Xxz { j, delta } = *params else {
        return Err(Error::InvalidModel(format!("{params} is not an XXZ model")));
    };
    Ok(2.0 * (-3.0 * j * delta / t).exp()
        + 2.0 * (j * delta / t).exp() * (2.0 * (2.0 * j / t).exp() + (-4.0 * j / t).exp()))
}
