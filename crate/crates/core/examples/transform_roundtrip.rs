//! Forward and inverse Opdam-Cherednik transform of a Gaussian, with the
//! Plancherel check.

use cherednik::sampled::linspace;
use cherednik::transform::{oc_inverse, plancherel_check, SpectralFunction, TransformPlan};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    let p = JCParams::new(1.0, 0.5)?;
    let f = |x: f64| Ok(Complex64::new((-(x - 0.3) * (x - 0.3)).exp(), 0.0));
    let plan = TransformPlan::default_for(&p)?;
    println!("x nodes {}, lambda nodes {}", plan.nx(), plan.nl());

    let c = plancherel_check(f, &plan)?;
    println!("||f||^2 = {:.12}, spectral side = {:.12}, relative error {:.2e}", c.lhs, c.rhs, c.relative_error());

    let hf = plan.forward(&plan.sample(f)?)?;
    let spec = SpectralFunction::new(plan.rule_lambda.nodes.clone(), hf)?;
    let xs = linspace(-2.0, 2.0, 9);
    let back = oc_inverse(&spec, &p, &xs, &plan.rule_lambda)?;
    for (x, v) in xs.iter().zip(&back.values) {
        println!("x = {x:>5.2}  f = {:.10}  H^-1 H f = {:.10}", f(*x)?.re, v.re);
    }
    Ok(())
}
