//! Numerical harmonic analysis for the Jacobi-Cherednik operator.

pub mod cli;
pub mod error;
pub mod measures;
pub mod modspace;
pub mod output;
pub mod params;
pub mod quadrature;
pub mod sampled;
pub mod specfun;
pub mod transform;
pub mod translation;
pub mod ucp;
pub mod windowed;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::JCParams;
