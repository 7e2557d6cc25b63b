use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmat::{kron_vec, Bipartition, ComplexMatrix, DensityMatrix};
use crate::{Error, Result, C64};

/// A `K`-term mixture of product pure states,
/// `σ = Σ_k p_k |a_k⟩⟨a_k| ⊗ |b_k⟩⟨b_k|`, with softmax weights and
/// unnormalised local vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableAnsatz {
    pub cut: Bipartition,
    pub logits: Vec<f64>,
    pub vectors_a: Vec<Vec<C64>>,
    pub vectors_b: Vec<Vec<C64>>,
}

impl SeparableAnsatz {
    pub fn new(cut: Bipartition, logits: Vec<f64>, vectors_a: Vec<Vec<C64>>, vectors_b: Vec<Vec<C64>>) -> Result<Self> {
        let k = logits.len();
        if k == 0 {
            return Err(Error::InvalidArgument("ansatz needs at least one component".into()));
        }
        if vectors_a.len() != k || vectors_b.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "{k} logits but {} a-vectors and {} b-vectors",
                vectors_a.len(),
                vectors_b.len()
            )));
        }
        if vectors_a.iter().any(|v| v.len() != cut.dim_a) || vectors_b.iter().any(|v| v.len() != cut.dim_b) {
            return Err(Error::DimensionMismatch(format!(
                "local vectors must have lengths {} and {}",
                cut.dim_a, cut.dim_b
            )));
        }
        Ok(Self { cut, logits, vectors_a, vectors_b })
    }

    /// Gaussian logits and vectors.
    pub fn random<R: Rng + ?Sized>(cut: Bipartition, components: usize, rng: &mut R) -> Self {
        let mut gauss = |n: usize| -> Vec<C64> {
            (0..n)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        };
        let vectors_a = (0..components).map(|_| gauss(cut.dim_a)).collect();
        let vectors_b = (0..components).map(|_| gauss(cut.dim_b)).collect();
        let logits = (0..components).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        Self { cut, logits, vectors_a, vectors_b }
    }

    pub fn components(&self) -> usize {
        self.logits.len()
    }

    /// Softmax of the logits.
    pub fn weights(&self) -> Vec<f64> {
        softmax(&self.logits)
    }

    pub fn realize(&self) -> Result<DensityMatrix> {
        for (k, (a, b)) in self.vectors_a.iter().zip(&self.vectors_b).enumerate() {
            if norm(a) == 0.0 || norm(b) == 0.0 {
                return Err(Error::ZeroVector(k));
            }
        }
        DensityMatrix::new(self.realize_matrix())
    }

    /// Number of real parameters: one logit plus real and imaginary parts of
    /// both local vectors per component.
    pub fn param_len(cut: Bipartition, components: usize) -> usize {
        components * stride(cut)
    }

    pub fn to_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(Self::param_len(self.cut, self.components()));
        for k in 0..self.components() {
            out.push(self.logits[k]);
            for z in self.vectors_a[k].iter().chain(&self.vectors_b[k]) {
                out.push(z.re);
                out.push(z.im);
            }
        }
        out
    }

    pub fn from_params(cut: Bipartition, params: &[f64]) -> Result<Self> {
        let st = stride(cut);
        if params.is_empty() || !params.len().is_multiple_of(st) {
            return Err(Error::DimensionMismatch(format!(
                "parameter vector of length {} is not a multiple of {st}",
                params.len()
            )));
        }
        let k = params.len() / st;
        let mut logits = Vec::with_capacity(k);
        let mut vectors_a = Vec::with_capacity(k);
        let mut vectors_b = Vec::with_capacity(k);
        for chunk in params.chunks(st) {
            logits.push(chunk[0]);
            let z: Vec<C64> = chunk[1..].chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            vectors_a.push(z[..cut.dim_a].to_vec());
            vectors_b.push(z[cut.dim_a..].to_vec());
        }
        Ok(Self { cut, logits, vectors_a, vectors_b })
    }

    /// `σ` without validation; zero vectors contribute nothing.
    pub(crate) fn realize_matrix(&self) -> ComplexMatrix {
        let n = self.cut.dim();
        let mut sigma = ComplexMatrix::zeros(n, n);
        for ((p, a), b) in self.weights().into_iter().zip(&self.vectors_a).zip(&self.vectors_b) {
            let (na, nb) = (norm(a), norm(b));
            if na == 0.0 || nb == 0.0 {
                continue;
            }
            let psi = kron_vec(a, b);
            let s = p / (na * na * nb * nb);
            for i in 0..n {
                let left = psi[i] * s;
                for j in 0..n {
                    sigma[(i, j)] += left * psi[j].conj();
                }
            }
        }
        sigma
    }

    /// Pulls a matrix gradient `G` (with `df = Tr(G dσ)`) back to the
    /// parameter vector of [`to_params`](Self::to_params).
    pub(crate) fn pullback(&self, g: &ComplexMatrix) -> Vec<f64> {
        let (da, db) = (self.cut.dim_a, self.cut.dim_b);
        let k = self.components();
        let p = self.weights();
        let mut out = vec![0.0; k * stride(self.cut)];
        let mut energies = Vec::with_capacity(k);
        let mut parts = Vec::with_capacity(k);
        for (va, vb) in self.vectors_a.iter().zip(&self.vectors_b) {
            let a = normalized(va);
            let b = normalized(vb);
            // M_a = (I ⊗ b†) G (I ⊗ b), M_b = (a† ⊗ I) G (a ⊗ I)
            let mut ma = ComplexMatrix::zeros(da, da);
            let mut mb = ComplexMatrix::zeros(db, db);
            for i in 0..da {
                for j in 0..db {
                    for i2 in 0..da {
                        for j2 in 0..db {
                            let gij = g[(i * db + j, i2 * db + j2)];
                            ma[(i, i2)] += b[j].conj() * gij * b[j2];
                            mb[(j, j2)] += a[i].conj() * gij * a[i2];
                        }
                    }
                }
            }
            energies.push(expectation(&ma, &a));
            parts.push((ma, mb));
        }
        let mean: f64 = p.iter().zip(&energies).map(|(p, e)| p * e).sum();
        let st = stride(self.cut);
        for c in 0..k {
            let base = c * st;
            out[base] = p[c] * (energies[c] - mean);
            let (ma, mb) = &parts[c];
            write_vector_grad(&mut out[base + 1..base + 1 + 2 * da], ma, &self.vectors_a[c], p[c]);
            write_vector_grad(&mut out[base + 1 + 2 * da..base + st], mb, &self.vectors_b[c], p[c]);
        }
        out
    }
}

/// Gradient of `p ⟨v|M|v⟩ / ⟨v|v⟩` with respect to real and imaginary parts
/// of the unnormalised `v`.
fn write_vector_grad(out: &mut [f64], m: &ComplexMatrix, v: &[C64], p: f64) {
    let d = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if d == 0.0 {
        out.fill(0.0);
        return;
    }
    let mv = m.mat_vec(v);
    let h = v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / d;
    for (i, (vi, mvi)) in v.iter().zip(&mv).enumerate() {
        out[2 * i] = p * 2.0 * (mvi.re - h * vi.re) / d;
        out[2 * i + 1] = p * 2.0 * (mvi.im - h * vi.im) / d;
    }
}

fn expectation(m: &ComplexMatrix, v: &[C64]) -> f64 {
    v.iter().zip(m.mat_vec(v)).map(|(a, b)| (a.conj() * b).re).sum()
}

fn stride(cut: Bipartition) -> usize {
    1 + 2 * (cut.dim_a + cut.dim_b)
}

pub(crate) fn softmax(logits: &[f64]) -> Vec<f64> {
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|&l| (l - top).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: &[C64]) -> Vec<C64> {
    let n = norm(v);
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn single_product_term() {
        let cut = Bipartition::one_vs_two();
        let ans = SeparableAnsatz::new(cut, vec![0.3], vec![vec![c(1.0), c(0.0)]], vec![vec![c(1.0), c(0.0), c(0.0), c(0.0)]]).unwrap();
        let sigma = ans.realize().unwrap();
        let mut want = ComplexMatrix::zeros(8, 8);
        want[(0, 0)] = c(1.0);
        assert!(sigma.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn two_term_classical_mixture() {
        let cut = Bipartition::one_vs_two();
        let ans = SeparableAnsatz::new(
            cut,
            vec![0.0, 0.0],
            vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
            vec![vec![c(1.0), c(0.0), c(0.0), c(0.0)], vec![c(0.0), c(0.0), c(0.0), c(1.0)]],
        )
        .unwrap();
        let sigma = ans.realize().unwrap();
        let mut want = ComplexMatrix::zeros(8, 8);
        want[(0, 0)] = c(0.5);
        want[(7, 7)] = c(0.5);
        assert!(sigma.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn logit_shift_and_vector_scale_invariance() {
        let cut = Bipartition::one_vs_two();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ans = SeparableAnsatz::random(cut, 5, &mut rng);
        let mut shifted = ans.clone();
        shifted.logits.iter_mut().for_each(|l| *l += 7.5);
        shifted.vectors_a[2].iter_mut().for_each(|z| *z *= C64::new(0.0, 3.0));
        let d = ans.realize().unwrap().matrix().max_abs_diff(shifted.realize().unwrap().matrix());
        assert!(d < 1e-14, "{d}");
    }

    #[test]
    fn weights_positive_and_normalised() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ans = SeparableAnsatz::random(Bipartition::two_qubit(), 9, &mut rng);
        let w = ans.weights();
        assert!(w.iter().all(|&p| p > 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_vector_is_rejected() {
        let cut = Bipartition::two_qubit();
        let ans = SeparableAnsatz::new(
            cut,
            vec![0.0, 0.0],
            vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(0.0)]],
            vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
        )
        .unwrap();
        assert!(matches!(ans.realize(), Err(Error::ZeroVector(1))));
    }

    #[test]
    fn params_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cut = Bipartition::one_vs_two();
        let ans = SeparableAnsatz::random(cut, 4, &mut rng);
        let p = ans.to_params();
        assert_eq!(p.len(), SeparableAnsatz::param_len(cut, 4));
        assert_eq!(SeparableAnsatz::from_params(cut, &p).unwrap(), ans);
        assert!(SeparableAnsatz::from_params(cut, &p[1..]).is_err());
    }

    #[test]
    fn pullback_matches_finite_differences_of_linear_functional() {
        // f(σ) = Tr(Hσ) has matrix gradient H.
        let cut = Bipartition::one_vs_two();
        let h = crate::qmat::random_hermitian(8, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ans = SeparableAnsatz::random(cut, 3, &mut rng);
        let grad = ans.pullback(&h);
        let x = ans.to_params();
        let f = |x: &[f64]| {
            let s = SeparableAnsatz::from_params(cut, x).unwrap().realize_matrix();
            h.trace_product(&s).re
        };
        for i in 0..x.len() {
            let step = 1e-6;
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += step;
            xm[i] -= step;
            let fd = (f(&xp) - f(&xm)) / (2.0 * step);
            assert!((fd - grad[i]).abs() < 1e-7, "param {i}: {fd} vs {}", grad[i]);
        }
    }
}
