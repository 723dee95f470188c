//! Numerical laboratory for classical and quantum relative entropy.
//!
//! The crate realizes modular theory in full matrix algebras: states are
//! density matrices, the modular flow is conjugation by `ρ^{it}`, and the
//! Connes cocycle of two faithful states is `ρ_ϑ^{it} ρ_ψ^{-it}`. On top of
//! that it computes relative entropy along four independent routes and the
//! Orlicz-regularized entropy of a state in a model crossed product.
//!
//! Module map:
//!
//! * [`spectral`]: Hermitian eigendecomposition and functional calculus.
//! * [`modular`]: standard form, modular flow, relative modular operators,
//!   cocycles and KMS checks.
//! * [`entropy`]: the H-functional and the four relative-entropy routes.
//! * [`classical`]: discrete measures, Radon–Nikodym derivatives, KL and
//!   Gibbs identities.
//! * [`orlicz`]: Young and fundamental functions, Luxemburg norms and the
//!   crossed-product entropy.
//! * [`io`]: matrix JSON and distribution CSV parsers.

pub mod classical;
pub mod entropy;
pub mod error;
pub mod extrapolate;
pub mod io;
pub mod modular;
pub mod orlicz;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{CMatrix, DensityMatrix, HermitianMatrix, SpectralDecomposition};
