//! The weights A and B, the c-function and the Plancherel density with
//! its polynomial growth constants.

use cherednik::measures::{fit_density_growth, harish_chandra_c, plancherel_density, weight_a, weight_b, DENSITY_EPS};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    for (alpha, beta) in [(1.0, 0.5), (0.5, -0.25), (2.0, 1.0)] {
        let p = JCParams::new(alpha, beta)?;
        println!("{p}");
        for x in [0.0, 0.5, 2.0] {
            println!("  A({x}) = {:.6e}  B({x}) = {:.6e}", weight_a(&p, x)?, weight_b(&p, x)?);
        }
        for l in [-2.0, 0.0, 2.0] {
            let d = plancherel_density(&p, l, DENSITY_EPS)?;
            println!("  sigma'({l}) = {:.6e}  |sigma'| = {:.6e}", d.raw, d.abs);
        }
        println!("  C(2) = {:.6}", harish_chandra_c(&p, Complex64::new(2.0, 0.0))?);
        let fit = fit_density_growth(&p, 1.0, 20.0, 100)?;
        println!(
            "  {:.4e} <= |sigma'(l)| / |l|^{} <= {:.4e} on 1 <= |l| <= 20",
            fit.k1_hat,
            2.0 * alpha + 1.0,
            fit.k2_hat
        );
    }
    Ok(())
}
