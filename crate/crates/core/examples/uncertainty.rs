//! Regime classification, the Morgan threshold and decay-envelope fits.
//! Pass `--certify` to also run the Cowling-Price radius-doubling check on
//! E_t (about a minute on one core).

use cherednik::modspace::{Exponent, WeightFunction};
use cherednik::sampled::{linspace, MeasureTag, SampledFunction1D};
use cherednik::ucp::{
    classify_regime, conjugate, cowling_price_certify, gaussian_envelope_fit, morgan_threshold,
    super_gaussian_envelope_fit, Theorem, UcpRules,
};
use cherednik::windowed::{default_window, WindowedPlan, WindowedRules};
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    for (a, b) in [(0.25, 0.5), (0.5, 0.5), (1.0, 1.0)] {
        println!(
            "a = {a}, b = {b}: Cowling-Price {}, Hardy {}",
            classify_regime(Theorem::CowlingPrice, a, b),
            classify_regime(Theorem::Hardy, a, b)
        );
    }
    for alpha in [3.0, 4.0] {
        let m = morgan_threshold(1.0, 0.2, alpha, conjugate(alpha))?;
        println!("Morgan alpha = {alpha}: lhs {:.6} rhs {:.6} vanishing {}", m.lhs, m.rhs, m.vanishing);
    }

    let xs = linspace(-4.0, 4.0, 81);
    let sample = |f: &dyn Fn(f64) -> f64| {
        SampledFunction1D::new(xs.clone(), xs.iter().map(|&x| Complex64::new(f(x), 0.0)).collect(), MeasureTag::Lebesgue)
    };
    let fit = gaussian_envelope_fit(&sample(&|x| 2.0 * (-0.7 * x * x).exp())?, (0.5, 3.0))?;
    println!("Gaussian data: a = {:.6}, c = {:.6}, r^2 = {:.6}", fit.a_hat, fit.c_hat, fit.r2);
    let fit = gaussian_envelope_fit(&sample(&|x| (-x.abs()).exp())?, (0.2, 4.0))?;
    println!("exponential data: r^2 = {:.4}, Gaussian-like {}", fit.r2, fit.matches_model());
    let fit = super_gaussian_envelope_fit(&sample(&|x| (-0.3 * x.powi(4)).exp())?, 4.0, (0.5, 2.0))?;
    println!("quartic data: a = {:.6}", fit.a_hat);

    if std::env::args().any(|a| a == "--certify") {
        let p = JCParams::new(1.0, 0.5)?;
        let t = 0.5;
        let plan = WindowedPlan::new(&p, default_window, WindowedRules::for_gaussian(&p, t)?)?;
        let one = WeightFunction::one();
        let two = Exponent::Finite(2.0);
        let f = |xs: &[f64]| Ok(plan.gaussian_kernel(t, xs)?.values);
        let r = cowling_price_certify(&plan, f, 1.0 / (8.0 * t), t / 2.0, two, two, &one, &one, &UcpRules::coarse())?;
        println!("{}", r.to_json()?);
    }
    Ok(())
}
