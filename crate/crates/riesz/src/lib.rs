//! Generalized Drazin-Riesz inverses on computable Banach algebra models.
//!
//! Two backends are provided: finite block-matrix algebras with a designated
//! ideal of blocks, and diagonal sequence algebras whose lanes end in
//! closed-form tails. On top of them sit the spectral taxonomy, a contour
//! functional calculus and the construction of windowed inverses.

pub mod algebra_core;
pub mod calculus;
pub mod config;
pub mod error;
pub mod gdr;
pub mod generate;
pub mod io;
pub mod spectra;
pub mod suite;

pub use algebra_core::{AlgebraElement, QuotientElement};
pub use config::Config;
pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
