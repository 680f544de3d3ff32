//! The translation kernel along its support, the translated Gaussian and
//! the product formula.

use cherednik::quadrature::{build_rule, Scheme};
use cherednik::transform::translation_product_check;
use cherednik::translation::{kernel_k, translate, translation_mass, TranslationRules};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    let p = JCParams::new(1.0, 0.25)?;
    let rules = TranslationRules::default();
    let (x, y) = (0.8, 1.1);
    println!("K({x}, {y}, z):");
    for k in -12..=12 {
        let z = k as f64 * 0.2;
        println!("  z = {z:>5.2}  K = {:.8e}", kernel_k(&p, x, y, z, &rules.chi)?);
    }
    println!("mass of mu_(x,y) = {:.10}", translation_mass(&p, x, y, &rules)?);

    let f = |z: f64| Ok(Complex64::new((-z * z).exp(), 0.0));
    println!("tau_x f(y) = {:.12}", translate(&p, f, x, y, &rules)?.re);
    println!("tau_y f(x) = {:.12}", translate(&p, f, y, x, &rules)?.re);

    let rule = build_rule(8.0, 16, Scheme::GaussLegendreComposite)?;
    let r = translation_product_check(f, x, &p, &[0.5, 1.0, 2.0], &rule, &rules)?;
    println!("|H(tau_x f) - G(x) Hf| at lambda = 0.5, 1, 2: {r:?}");
    Ok(())
}
