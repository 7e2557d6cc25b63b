//! Rényi relative entropy of entanglement for three-qubit states.
//!
//! The crate is organised bottom-up:
//!
//! - [`qmat`]: small dense complex linear algebra (Jacobi eigensolver,
//!   Kronecker products, partial traces, spectral matrix functions).
//! - [`renyi`]: Rényi entropies and the traditional (Petz) and sandwiched
//!   Rényi relative entropies, plus their gradients with respect to the
//!   second argument.
//! - [`sepstates`]: the separable-state ansatz and the multi-start
//!   minimisation that defines the relative entropy of entanglement.
//! - [`statezoo`]: GHZ, W, star and transverse-field Ising ground states.
//! - [`spinchain`]: three-site periodic XYZ / XXZ / XY / TFI Hamiltonians and
//!   their thermal states, numerically and in closed form.
//! - [`entscan`]: monogamy, parameter sweeps, critical temperatures, CSV
//!   output and the on-disk result cache.

// `!(x > 0.0)` is the NaN-rejecting form of a positivity check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entscan;
pub mod error;
pub mod qmat;
pub mod renyi;
pub mod sepstates;
pub mod spinchain;
pub mod statezoo;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
