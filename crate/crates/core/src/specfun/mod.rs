//! Special functions: complex Gamma, Gauss hypergeometric series, Jacobi
//! functions and the Opdam eigenfunctions.

pub mod gamma;
pub mod hyp2f1;
pub mod jacobi;

pub use gamma::{gamma, gamma_real, ln_gamma, ln_gamma_real, rgamma};
pub use hyp2f1::gauss_2f1;
pub use jacobi::{cherednik_apply, fit_growth_constant, jacobi_phi, opdam_g, DEFAULT_FD_STEP};
