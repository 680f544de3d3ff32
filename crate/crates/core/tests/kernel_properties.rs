use cherednik::measures::{plancherel_density, weight_a, weight_b, DENSITY_EPS};
use cherednik::translation::{kernel_k, translate, translation_mass, TranslationRules};
use cherednik::{Complex64, JCParams};
use proptest::prelude::*;

fn p() -> JCParams {
    JCParams::new(1.0, 0.25).unwrap()
}

fn sign() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(-1.0)]
}

/// `(x, y, z)` strictly inside `||x| - |y|| < |z| < |x| + |y|`.
fn in_support() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.2f64..2.0, 0.2f64..2.0, 0.05f64..0.95, sign(), sign(), sign()).prop_map(|(x, y, s, a, b, c)| {
        let (lo, hi) = ((x - y).abs(), x + y);
        (a * x, b * y, c * (lo + s * (hi - lo)))
    })
}

fn close(u: f64, v: f64) -> bool {
    (u - v).abs() <= 1e-8 * u.abs().max(v.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kernel_symmetries((x, y, z) in in_support()) {
        let chi = TranslationRules::default().chi;
        let k = kernel_k(&p(), x, y, z, &chi).unwrap();
        prop_assert!(close(k, kernel_k(&p(), y, x, z, &chi).unwrap()));
        prop_assert!(close(k, kernel_k(&p(), -z, y, -x, &chi).unwrap()));
        prop_assert!(close(k, kernel_k(&p(), x, -z, -y, &chi).unwrap()));
    }

    #[test]
    fn kernel_vanishes_off_support(x in 0.1f64..2.0, y in 0.1f64..2.0, gap in 0.0f64..3.0, s in sign()) {
        let chi = TranslationRules::default().chi;
        prop_assert_eq!(kernel_k(&p(), x, y, s * (x + y + gap), &chi).unwrap(), 0.0);
        let inner = (x - y).abs() * (1.0 - gap / 3.0);
        prop_assert_eq!(kernel_k(&p(), x, y, s * inner, &chi).unwrap(), 0.0);
    }

    #[test]
    fn density_modulus_is_even(l in 1e-3f64..25.0) {
        let q = JCParams::new(0.5, -0.25).unwrap();
        let a = plancherel_density(&q, l, DENSITY_EPS).unwrap();
        let b = plancherel_density(&q, -l, DENSITY_EPS).unwrap();
        prop_assert!((a.abs - b.abs).abs() <= 1e-12 * a.abs);
        prop_assert!((a.raw.conj() - b.raw).norm() <= 1e-12 * a.abs);
    }

    #[test]
    fn weights_are_even(x in -6.0f64..6.0) {
        prop_assert_eq!(weight_a(&p(), x).unwrap(), weight_a(&p(), -x).unwrap());
        prop_assert_eq!(weight_b(&p(), x).unwrap(), weight_b(&p(), -x).unwrap());
    }
}

#[test]
fn translation_delta_cases_are_exact() {
    let f = |z: f64| Ok(Complex64::new((-z * z).exp(), z));
    let rules = TranslationRules::default();
    assert_eq!(translate(&p(), f, 0.0, 0.7, &rules).unwrap(), f(0.7).unwrap());
    assert_eq!(translate(&p(), f, 1.2, 0.0, &rules).unwrap(), f(1.2).unwrap());
}

#[test]
fn translation_is_symmetric() {
    let f = |z: f64| Ok(Complex64::new((-z * z).exp(), 0.0));
    let rules = TranslationRules::default();
    let a = translate(&p(), f, 0.8, 1.1, &rules).unwrap();
    let b = translate(&p(), f, 1.1, 0.8, &rules).unwrap();
    assert!((a - b).norm() < 1e-6);
}

#[test]
fn mass_is_reported_and_finite() {
    let m = translation_mass(&p(), 0.8, 1.1, &TranslationRules::default()).unwrap();
    assert!(m.is_finite());
}

#[test]
fn kernel_rejects_equal_parameters() {
    let q = JCParams::new(0.5, 0.5).unwrap();
    assert!(kernel_k(&q, 1.0, 1.0, 0.5, &TranslationRules::default().chi).is_err());
}
