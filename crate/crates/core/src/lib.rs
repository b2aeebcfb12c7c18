//! Hermite–Biehler decompositions of complex polynomials and their use in
//! direct and inverse spectral problems for non-Hermitian perturbations of
//! Jacobi matrices.
//!
//! Layers, bottom up:
//!
//! * [`poly`]: real and complex polynomials, zero sets, interlacing;
//! * [`hodograph`]: argument sums, phase traces, configuration verdicts;
//! * [`hb`]: classical, pencil and generalized splits of `h` into real parts;
//! * [`jacobi`]: Jacobi matrices, spectra, reconstruction, Lanczos reduction;
//! * [`perturb`]: perturbed corner entries, their spectra and inverse problems.

pub mod error;
pub mod hb;
pub mod hodograph;
pub mod jacobi;
pub mod perturb;
pub mod poly;
pub(crate) mod roots;

pub use error::{Error, Result};
pub use jacobi::JacobiMatrix;
pub use perturb::PerturbationSpec;
pub use poly::{ComplexPoly, RealPoly, ZeroSet};
