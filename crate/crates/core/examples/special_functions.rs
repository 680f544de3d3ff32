//! Eigenfunctions of the Jacobi-Cherednik operator and the eigen-equation
//! residual.

use cherednik::specfun::{cherednik_apply, gamma, gauss_2f1, jacobi_phi, opdam_g, DEFAULT_FD_STEP};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    let p = JCParams::new(1.0, 0.5)?;
    println!("{p}");
    let lam = Complex64::new(2.0, 0.0);
    println!("{:>6} {:>24} {:>24} {:>10}", "x", "G_2(x)", "phi_2(x)", "residual");
    for x in [-2.0, -1.0, -0.3, 0.3, 1.0, 2.0] {
        let g = opdam_g(&p, lam, x)?;
        let phi = jacobi_phi(&p, lam, x)?;
        let tg = cherednik_apply(&p, |s| opdam_g(&p, lam, s), x, DEFAULT_FD_STEP)?;
        let r = (tg - Complex64::new(0.0, 2.0) * g).norm();
        println!("{x:>6.2} {:>11.6}{:+11.6}i {:>11.6}{:+11.6}i {r:>10.2e}", g.re, g.im, phi.re, phi.im);
    }

    let i_rho = Complex64::new(0.0, p.rho());
    println!("G_(i rho)(1.3) = {}", opdam_g(&p, i_rho, 1.3)?);
    let one = Complex64::new(1.0, 0.0);
    println!("2F1(1, 1; 2; -0.5) = {}", gauss_2f1(one, one, one * 2.0, Complex64::new(-0.5, 0.0), 1e-16)?);
    println!("Gamma(0.5 + 2i) = {:?}", gamma(Complex64::new(0.5, 2.0)));
    Ok(())
}
