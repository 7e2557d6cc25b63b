//! Three-qubit reference states.
//!
//! Basis order is `|000⟩ … |111⟩` with qubit 1 leftmost, so amplitude index
//! `4·q1 + 2·q2 + q3`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::qmat::{kron_vec, partial_trace, ComplexMatrix, DensityMatrix};
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct PureState3 {
    amplitudes: [C64; 8],
}

impl PureState3 {
    pub fn new(amplitudes: [C64; 8]) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n2.sqrt()));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: [f64; 8]) -> Result<Self> {
        Self::new(amplitudes.map(|a| C64::new(a, 0.0)))
    }

    /// Normalises `v` and fixes the global phase so that the first nonzero
    /// amplitude is real and positive.
    pub fn normalized(v: &[C64]) -> Result<Self> {
        if v.len() != 8 {
            return Err(Error::DimensionMismatch(format!("three-qubit state needs 8 amplitudes, got {}", v.len())));
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroVector(0));
        }
        let lead = v.iter().find(|z| z.norm() > 1e-12 * n).copied().unwrap_or(C64::new(1.0, 0.0));
        let phase = lead.conj() / lead.norm();
        let mut amplitudes = [C64::new(0.0, 0.0); 8];
        for (a, z) in amplitudes.iter_mut().zip(v) {
            *a = z * phase / n;
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.amplitudes).expect("unit norm")
    }

    /// Reduced state on the given qubits (0-based, ascending).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(&self.density(), &[2, 2, 2], keep)
    }

    /// `X ⊗ X ⊗ X |ψ⟩`.
    pub fn spin_flip(&self) -> Self {
        let mut amplitudes = self.amplitudes;
        amplitudes.reverse();
        Self { amplitudes }
    }
}

pub fn ghz() -> PureState3 {
    let h = FRAC_1_SQRT_2;
    PureState3::from_real([h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]).unwrap()
}

pub fn w() -> PureState3 {
    let t = 1.0 / 3f64.sqrt();
    PureState3::from_real([0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]).unwrap()
}

pub fn star() -> PureState3 {
    PureState3::from_real([0.5, 0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.5]).unwrap()
}

/// The spin-flipped W state.
pub fn wbar() -> PureState3 {
    let t = 1.0 / 3f64.sqrt();
    PureState3::from_real([0.0, 0.0, 0.0, t, 0.0, t, t, 0.0]).unwrap()
}

/// `sin φ |000⟩ + (cos φ/√3)(|011⟩ + |101⟩ + |110⟩)`.
pub fn tfi_ground(phi: f64) -> PureState3 {
    let (s, c) = phi.sin_cos();
    let t = c / 3f64.sqrt();
    PureState3::from_real([s, 0.0, 0.0, t, 0.0, t, t, 0.0]).unwrap()
}

/// Qubit pairs with a closed-form reduced state of [`star`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    P12,
    P13,
}

impl Pair {
    /// From 1-based qubit labels.
    pub fn from_qubits(i: usize, j: usize) -> Result<Self> {
        match (i.min(j), i.max(j)) {
            (1, 2) => Ok(Pair::P12),
            (1, 3) => Ok(Pair::P13),
            _ => Err(Error::InvalidArgument(format!("no closed form for qubit pair ({i},{j})"))),
        }
    }

    /// 0-based qubits kept by the partial trace.
    pub fn keep(&self) -> [usize; 2] {
        match self {
            Pair::P12 => [0, 1],
            Pair::P13 => [0, 2],
        }
    }
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn mixture(terms: &[(f64, Vec<C64>)]) -> DensityMatrix {
    let n = terms[0].1.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (p, v) in terms {
        m = &m + &ComplexMatrix::outer(v).scale(*p);
    }
    DensityMatrix::new(m).expect("convex mixture of unit vectors")
}

/// `¼(2+√2)|s⁺⟩⟨s⁺| + ¼(2−√2)|s⁻⟩⟨s⁻|` with
/// `|s₁₂^±⟩ = (|00⟩ ± |1+⟩)/√2` and `|s₁₃^±⟩ = (|0+⟩ ± |11⟩)/√2`.
pub fn star_reduced(pair: Pair) -> DensityMatrix {
    let zero = real(&[1.0, 0.0]);
    let one = real(&[0.0, 1.0]);
    let plus = real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let (u, v) = match pair {
        Pair::P12 => (kron_vec(&zero, &zero), kron_vec(&one, &plus)),
        Pair::P13 => (kron_vec(&zero, &plus), kron_vec(&one, &one)),
    };
    let combo = |sign: f64| -> Vec<C64> { u.iter().zip(&v).map(|(a, b)| (a + b * sign) * FRAC_1_SQRT_2).collect() };
    mixture(&[((2.0 + SQRT_2) / 4.0, combo(1.0)), ((2.0 - SQRT_2) / 4.0, combo(-1.0))])
}

/// Either two-qubit marginal of [`w`]: `⅓|00⟩⟨00| + ⅔|Ψ⁺⟩⟨Ψ⁺|`,
/// `|Ψ⁺⟩ = (|01⟩ + |10⟩)/√2`.
pub fn w_reduced() -> DensityMatrix {
    let h = FRAC_1_SQRT_2;
    mixture(&[(1.0 / 3.0, real(&[1.0, 0.0, 0.0, 0.0])), (2.0 / 3.0, real(&[0.0, h, h, 0.0]))])
}

/// Any two-qubit marginal of [`ghz`]: `½(|00⟩⟨00| + |11⟩⟨11|)`.
pub fn ghz_reduced() -> DensityMatrix {
    DensityMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]).unwrap()
}

/// Spectral decomposition of a two-qubit marginal of [`tfi_ground`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedEigensystem {
    pub weights: [f64; 2],
    pub vectors: [Vec<C64>; 2],
}

impl ReducedEigensystem {
    pub fn density(&self) -> DensityMatrix {
        mixture(&[(self.weights[0], self.vectors[0].clone()), (self.weights[1], self.vectors[1].clone())])
    }
}

/// Weights `(sin²φ + ⅓cos²φ, ⅔cos²φ)` on
/// `|v₁⟩ ∝ sin φ|00⟩ + (cos φ/√3)|11⟩` and `|v₂⟩ = (|01⟩ + |10⟩)/√2`.
pub fn tfi_reduced_eigensystem(phi: f64) -> ReducedEigensystem {
    let (s, c) = phi.sin_cos();
    let t = c / 3f64.sqrt();
    let w1 = s * s + t * t;
    let v1 = if w1 > 0.0 {
        let n = w1.sqrt();
        real(&[s / n, 0.0, 0.0, t / n])
    } else {
        real(&[1.0, 0.0, 0.0, 0.0])
    };
    let h = FRAC_1_SQRT_2;
    ReducedEigensystem {
        weights: [w1, 2.0 * c * c / 3.0],
        vectors: [v1, real(&[0.0, h, h, 0.0])],
    }
}
