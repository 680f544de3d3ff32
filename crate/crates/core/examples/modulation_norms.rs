//! Short-time Fourier transforms with a Gaussian window, truncated
//! modulation-space norms and the box bound.

use cherednik::modspace::{
    box_norm_bound_check, gaussian_stft_of_one, gaussian_window, mod_norm_1d, mod_norm_2d_separable, stft_2d,
    Exponent, ModNormRules, WeightFunction,
};
use cherednik::quadrature::{build_rule, Scheme};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    let rule = build_rule(6.0, 16, Scheme::GaussLegendreComposite)?;
    let one = |_: f64, _: f64| Ok(Complex64::new(1.0, 0.0));
    let g = |a: f64, b: f64| Ok(Complex64::new(gaussian_window(a) * gaussian_window(b), 0.0));
    let (time, freq) = ([0.5, -1.0], [0.25, 0.5]);
    println!("V_g 1 = {:.12}", stft_2d(one, g, time, freq, &rule)?);
    println!("closed = {:.12}", gaussian_stft_of_one(time, freq));

    let p = JCParams::new(1.0, 0.5)?;
    let f = |t: f64| Ok(Complex64::new((-t * t).exp(), 0.0));
    let m = WeightFunction::one();
    let rules = ModNormRules::default_1d();
    for (pe, qe) in [("1", "1"), ("2", "2"), ("2", "inf")] {
        let (pe, qe): (Exponent, Exponent) = (pe.parse()?, qe.parse()?);
        let r = mod_norm_1d(f, pe, qe, &m, &p, &rules)?;
        println!("||exp(-t^2)||_M^({pe},{qe}) truncated at R = {} : {:.6e}", r.radius, r.value);
    }
    let two = Exponent::Finite(2.0);
    let r = mod_norm_2d_separable(f, f, two, two, &m, &m, &p, &ModNormRules::default_2d())?;
    println!("two-variable separable norm: {:.6e}", r.value);

    for (rho1, rho2) in [(1.0, 1.0), (2.0, 1.0), (2.0, 2.0)] {
        let b = box_norm_bound_check(2.0, rho1, rho2, 1.0, &m)?;
        println!("box ({rho1}, {rho2}): {:.6e} <= {:.6e}: {}", b.lhs, b.rhs, b.holds());
    }
    Ok(())
}
