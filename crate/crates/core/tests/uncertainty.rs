use cherednik::sampled::{linspace, MeasureTag, SampledFunction1D};
use cherednik::ucp::{classify_regime, conjugate, gaussian_envelope_fit, morgan_threshold, Regime, Theorem};
use cherednik::Complex64;
use proptest::prelude::*;

fn samples(f: impl Fn(f64) -> f64) -> SampledFunction1D {
    let xs = linspace(-4.0, 4.0, 81);
    let v = xs.iter().map(|&x| Complex64::new(f(x), 0.0)).collect();
    SampledFunction1D::new(xs, v, MeasureTag::Lebesgue).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn morgan_is_monotone(alpha in 2.05f64..8.0, a in 0.01f64..3.0, b in 0.01f64..3.0, s in 1.01f64..3.0) {
        let beta = conjugate(alpha);
        let base = morgan_threshold(a, b, alpha, beta).unwrap();
        prop_assert!(morgan_threshold(a * s, b, alpha, beta).unwrap().lhs > base.lhs);
        prop_assert!(morgan_threshold(a, b * s, alpha, beta).unwrap().lhs > base.lhs);
        prop_assert_eq!(base.vanishing, base.lhs > base.rhs);
    }

    #[test]
    fn regime_is_a_function_of_the_product(a in 0.01f64..4.0, b in 0.01f64..4.0) {
        let r = classify_regime(Theorem::CowlingPrice, a, b);
        prop_assert_eq!(r == Regime::Vanishing, a * b >= 0.25);
        let h = classify_regime(Theorem::Hardy, a, b);
        prop_assert_eq!(h == Regime::Nonvanishing, a * b < 0.25 && (a * b - 0.25).abs() > 0.25e-12);
    }

    #[test]
    fn gaussian_fit_recovers_rate(a in 0.05f64..2.0, c in 0.1f64..10.0) {
        let fit = gaussian_envelope_fit(&samples(|x| c * (-a * x * x).exp()), (0.5, 3.0)).unwrap();
        prop_assert!((fit.a_hat - a).abs() < 1e-9 * a.max(1.0));
        prop_assert!((fit.c_hat - c).abs() < 1e-8 * c);
        prop_assert!(fit.matches_model());
    }
}

#[test]
fn conjugacy_is_enforced() {
    assert!(morgan_threshold(1.0, 1.0, 3.0, 1.4).is_err());
    assert!(morgan_threshold(1.0, 1.0, 3.0, 1.5).is_ok());
}
