//! Modulation, the windowed transform of a Gaussian, its Plancherel pair
//! and the Gaussian kernel E_t on coarse grids.

use cherednik::windowed::{default_window, WindowedPlan, WindowedRules};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    let p = JCParams::new(1.0, 0.5)?;
    let t = 0.5;
    let plan = WindowedPlan::new(&p, default_window, WindowedRules::for_gaussian(&p, t)?)?;
    println!("{plan:?}");
    println!("||g||^2 = {:.8}", plan.window_norm_sqr());
    for xi in [0.5, 1.0] {
        println!("||M_xi g||^2 at xi = {xi}: {:.8}", plan.modulation_norm_sqr(xi)?);
    }

    let f = |x: f64| Ok(Complex64::new((-x * x).exp(), 0.0));
    let w = plan.transform(f, &[-1.0, 0.0, 1.0], &[-0.5, 0.5])?;
    for i in 0..3 {
        for j in 0..2 {
            println!("W_g f({}, {}) = {:.8}", w.x_grid[i], w.xi_grid[j], w.get(i, j));
        }
    }
    let pl = plan.plancherel(f)?;
    println!("windowed Plancherel: {:.6} vs {:.6} (relative error {:.3})", pl.lhs, pl.rhs, pl.relative_error());

    let et = plan.gaussian_kernel(t, &[-2.0, -1.0, 0.0, 1.0, 2.0])?;
    for (x, v) in et.grid.iter().zip(&et.values) {
        println!("E_{t}({x}) = {v:.6e}");
    }
    let r = plan.gaussian_identity_residual(t, &[-1.0, 0.0, 1.0], &[-0.6, 0.6])?;
    println!("sup relative residual of W_g E_t against exp(-t(l^2 + m^2)): {:.3e}", r.sup_relative_residual);
    Ok(())
}
