//! Jacobi functions, the Opdam eigenfunctions `G_lambda` and the
//! Jacobi-Cherednik differential-difference operator.

use num_complex::Complex64;

use super::hyp2f1::gauss_2f1;
use crate::error::{Error, Result};
use crate::params::JCParams;

/// Working tolerance for the hypergeometric evaluations behind the
/// eigenfunctions.
pub const SPECFUN_TOL: f64 = 1e-16;

/// Default finite-difference step for [`cherednik_apply`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// The Jacobi function
/// `phi_lambda(x) = 2F1((rho + i lambda)/2, (rho - i lambda)/2; alpha + 1; -sinh^2 x)`.
pub fn jacobi_phi(p: &JCParams, lambda: Complex64, x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::domain("x must be finite"));
    }
    let i = Complex64::i();
    let a = (p.rho() + i * lambda) * 0.5;
    let b = (p.rho() - i * lambda) * 0.5;
    let c = Complex64::new(p.alpha() + 1.0, 0.0);
    let sh = x.sinh();
    gauss_2f1(a, b, c, Complex64::new(-sh * sh, 0.0), SPECFUN_TOL)
}

/// The Opdam hypergeometric function `G_lambda(x)`, the eigenfunction of the
/// Jacobi-Cherednik operator with eigenvalue `i lambda` normalized by
/// `G_lambda(0) = 1`. Evaluated through the derivative-free formula
/// `phi_lambda(x) + (rho + i lambda) / (4 (alpha + 1)) sinh(2x) phi^{(alpha+1, beta+1)}_lambda(x)`.
pub fn opdam_g(p: &JCParams, lambda: Complex64, x: f64) -> Result<Complex64> {
    let even = jacobi_phi(p, lambda, x)?;
    if x == 0.0 {
        return Ok(even);
    }
    let pre = (p.rho() + Complex64::i() * lambda) / (4.0 * (p.alpha() + 1.0));
    if pre.norm() == 0.0 {
        return Ok(even);
    }
    let odd = jacobi_phi(&p.shifted(), lambda, x)?;
    let value = even + pre * (2.0 * x).sinh() * odd;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Range(format!("G_lambda({x}) overflowed for lambda = {lambda}")));
    }
    Ok(value)
}

/// Applies the Jacobi-Cherednik operator
/// `T f(x) = f'(x) + [(2 alpha + 1) coth x + (2 beta + 1) tanh x] (f(x) - f(-x)) / 2 - rho f(-x)`
/// to a smooth function at `x != 0`. The derivative is the fourth-order
/// five-point central difference with step `h`; the reflection terms are
/// exact.
pub fn cherednik_apply<F>(p: &JCParams, f: F, x: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if x == 0.0 {
        return Err(Error::domain(
            "the Jacobi-Cherednik operator is evaluated off the origin only (coth pole at x = 0)",
        ));
    }
    if !(h > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("need finite x and h > 0, got x = {x}, h = {h}")));
    }
    let derivative =
        (-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h);
    let fx = f(x)?;
    let fm = f(-x)?;
    let coeff = (2.0 * p.alpha() + 1.0) / x.tanh() + (2.0 * p.beta() + 1.0) * x.tanh();
    Ok(derivative + coeff * (fx - fm) * 0.5 - p.rho() * fm)
}

/// Fitted constant of the growth bound `|G_lambda(x)| <= C e^{|Im lambda| |x|}`:
/// the largest ratio `|G_lambda(x)| e^{-|Im lambda| |x|}` over the grid.
pub fn fit_growth_constant(p: &JCParams, lambdas: &[Complex64], xs: &[f64]) -> Result<f64> {
    if lambdas.is_empty() || xs.is_empty() {
        return Err(Error::domain("empty grid"));
    }
    let mut c: f64 = 0.0;
    for &lam in lambdas {
        for &x in xs {
            let r = opdam_g(p, lam, x)?.norm() * (-lam.im.abs() * x.abs()).exp();
            c = c.max(r);
        }
    }
    Ok(c)
}
