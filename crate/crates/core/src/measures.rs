//! The weights `A` and `B`, the Harish-Chandra c-function and the density
//! of the Plancherel measure `d sigma`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::JCParams;
use crate::specfun::{gamma_real, ln_gamma};

/// Default half-width of the clamp around `lambda = 0` in
/// [`plancherel_density`].
pub const DENSITY_EPS: f64 = 1e-4;

/// `ln sinh(t)` for `t > 0`, accurate for large `t`.
pub(crate) fn ln_sinh(t: f64) -> f64 {
    if t > 20.0 {
        t - std::f64::consts::LN_2 + (-(-2.0 * t).exp()).ln_1p()
    } else {
        t.sinh().ln()
    }
}

/// `ln cosh(t)`, accurate for large `|t|`.
pub(crate) fn ln_cosh(t: f64) -> f64 {
    let t = t.abs();
    if t > 20.0 {
        t - std::f64::consts::LN_2 + (-2.0 * t).exp().ln_1p()
    } else {
        t.cosh().ln()
    }
}

/// `ln A(x)`; `-inf` at the origin.
pub fn ln_weight_a(p: &JCParams, x: f64) -> f64 {
    let t = x.abs();
    if t == 0.0 {
        return f64::NEG_INFINITY;
    }
    (2.0 * p.alpha() + 1.0) * ln_sinh(t) + (2.0 * p.beta() + 1.0) * ln_cosh(t)
}

/// `A(x) = sinh|x|^(2 alpha + 1) cosh|x|^(2 beta + 1)`.
pub fn weight_a(p: &JCParams, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("x must be finite"));
    }
    let v = ln_weight_a(p, x).exp();
    if !v.is_finite() {
        return Err(Error::Range(format!("A({x}) overflows")));
    }
    Ok(v)
}

/// `B(x) = (sinh|x| / |x|)^(2 alpha + 1) cosh|x|^(2 beta + 1)`, with `B(0) = 1`.
pub fn weight_b(p: &JCParams, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("x must be finite"));
    }
    let t = x.abs();
    if t == 0.0 {
        return Ok(1.0);
    }
    // sinh(t)/t with a series near zero
    let ln_ratio = if t < 1e-4 {
        (t * t / 6.0).ln_1p()
    } else {
        ln_sinh(t) - t.ln()
    };
    let v = ((2.0 * p.alpha() + 1.0) * ln_ratio + (2.0 * p.beta() + 1.0) * ln_cosh(t)).exp();
    if !v.is_finite() {
        return Err(Error::Range(format!("B({x}) overflows")));
    }
    Ok(v)
}

/// The c-function
/// `C(lambda) = 2^(rho - i lambda) Gamma(alpha + 1) Gamma(i lambda) / (Gamma((rho + i lambda)/2) Gamma((alpha - beta + 1 + i lambda)/2))`,
/// evaluated in log space.
pub fn harish_chandra_c(p: &JCParams, lambda: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    let il = i * lambda;
    let ln_num = ln_gamma(il).ok_or_else(|| {
        Error::Pole(format!("Gamma(i lambda) has a pole at lambda = {lambda}"))
    })?;
    let rho = p.rho();
    let ln_den1 = ln_gamma((rho + il) * 0.5);
    let ln_den2 = ln_gamma((p.alpha() - p.beta() + 1.0 + il) * 0.5);
    let (Some(d1), Some(d2)) = (ln_den1, ln_den2) else {
        // a pole in the denominator makes C vanish
        return Ok(Complex64::new(0.0, 0.0));
    };
    let ln_two = std::f64::consts::LN_2;
    let ln_c = (rho - il) * ln_two + crate::specfun::ln_gamma_real(p.alpha() + 1.0) + ln_num - d1 - d2;
    let v = ln_c.exp();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Range(format!("C({lambda}) overflows")));
    }
    Ok(v)
}

/// The Plancherel density at a real spectral point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlancherelDensityValue {
    /// Complex density of `d sigma` with respect to `d lambda`.
    pub raw: Complex64,
    /// Its modulus, the density of `|sigma|`.
    pub abs: f64,
}

/// Density of `d sigma(lambda) = 2^(2 rho) (1 - rho / (i lambda)) d lambda / (8 pi |C(lambda)|^2)`.
///
/// The factor `2^(2 rho)` matches the normalization of `C` (which carries
/// `2^(rho - i lambda)`) to the weight `A` without powers of two; without it
/// the transform pair is off by exactly `2^(2 rho)`.
///
/// For `|lambda| < eps` the value at `sign(lambda) eps` is returned: the
/// pole of `Gamma(i lambda)` cancels the `1/lambda` of the first factor, so
/// the density is finite (and vanishes) at the origin.
pub fn plancherel_density(p: &JCParams, lambda: f64, eps: f64) -> Result<PlancherelDensityValue> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    let lam = if lambda.abs() < eps {
        if lambda < 0.0 {
            -eps
        } else {
            eps
        }
    } else {
        lambda
    };
    let c = harish_chandra_c(p, Complex64::new(lam, 0.0))?;
    let rho = p.rho();
    let scale = (2.0 * rho * std::f64::consts::LN_2).exp() / (8.0 * PI * c.norm_sqr());
    let factor = Complex64::new(1.0, rho / lam); // 1 - rho / (i lam)
    let raw = factor * scale;
    Ok(PlancherelDensityValue { raw, abs: raw.norm() })
}

/// Fitted constants `k1 <= |sigma|'(lambda) / |lambda|^(2 alpha + 1) <= k2`
/// over a sampled window of `|lambda|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityGrowthFit {
    pub k1_hat: f64,
    pub k2_hat: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub samples: usize,
}

pub fn fit_density_growth(p: &JCParams, lambda_min: f64, lambda_max: f64, samples: usize) -> Result<DensityGrowthFit> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min && samples >= 2) {
        return Err(Error::domain("need 0 < lambda_min < lambda_max and at least two samples"));
    }
    let mut k1 = f64::INFINITY;
    let mut k2: f64 = 0.0;
    for k in 0..samples {
        let l = lambda_min + (lambda_max - lambda_min) * k as f64 / (samples - 1) as f64;
        for lam in [l, -l] {
            let d = plancherel_density(p, lam, DENSITY_EPS)?;
            let ratio = d.abs / l.powf(2.0 * p.alpha() + 1.0);
            k1 = k1.min(ratio);
            k2 = k2.max(ratio);
        }
    }
    Ok(DensityGrowthFit { k1_hat: k1, k2_hat: k2, lambda_min, lambda_max, samples })
}

/// `Gamma(alpha + 1)`, a constant used by the Gaussian-kernel bounds.
pub fn gamma_alpha_plus_one(p: &JCParams) -> f64 {
    gamma_real(p.alpha() + 1.0).expect("alpha + 1 > 1/2 is never a pole")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> JCParams {
        JCParams::new(a, b).unwrap()
    }

    #[test]
    fn a_vanishes_at_origin_and_is_even() {
        let q = p(1.0, 0.5);
        assert_eq!(weight_a(&q, 0.0).unwrap(), 0.0);
        assert_eq!(weight_a(&q, 1.7).unwrap(), weight_a(&q, -1.7).unwrap());
    }

    #[test]
    fn a_reduces_to_sinh_squared() {
        let v = weight_a(&p(0.5, -0.5), 1.0).unwrap();
        assert!((v - 1.381_097_845_541_815_7).abs() < 1e-14);
    }

    #[test]
    fn a_overflow_is_reported() {
        assert!(matches!(weight_a(&p(2.0, 1.0), 200.0), Err(Error::Range(_))));
    }

    #[test]
    fn b_convention_and_factorization() {
        let q = p(1.0, 0.5);
        assert_eq!(weight_b(&q, 0.0).unwrap(), 1.0);
        let x: f64 = 0.9;
        let a = weight_a(&q, x).unwrap();
        let b = weight_b(&q, x).unwrap();
        assert!((a - x.abs().powf(3.0) * b).abs() < 1e-12 * a);
        for k in 0..=100 {
            let x = -5.0 + 0.1 * k as f64;
            assert!(weight_b(&q, x).unwrap() >= 1.0);
        }
    }

    #[test]
    fn c_function_pole_and_oracle() {
        let q = p(1.0, 0.5);
        assert!(matches!(harish_chandra_c(&q, Complex64::new(0.0, 0.0)), Err(Error::Pole(_))));
        let c = harish_chandra_c(&q, Complex64::new(2.0, 0.0)).unwrap();
        let oracle = Complex64::new(-0.878_777_239_061_068_9, -1.274_540_498_435_234_8);
        assert!((c - oracle).norm() < 1e-13 * oracle.norm(), "{c}");
    }

    #[test]
    fn power_of_two_modulus() {
        let q = p(1.0, 0.5);
        let lam = Complex64::new(3.0, 0.0);
        let two = (q.rho() - Complex64::i() * lam) * std::f64::consts::LN_2;
        assert!((two.exp().norm() - 2f64.powf(q.rho())).abs() < 1e-13);
    }

    #[test]
    fn density_is_even_and_nonnegative() {
        for q in [p(1.0, 0.5), p(0.5, -0.25), p(2.0, 1.0)] {
            for k in 0..=200 {
                let l = -10.0 + 0.1 * k as f64;
                let d = plancherel_density(&q, l, DENSITY_EPS).unwrap();
                let m = plancherel_density(&q, -l, DENSITY_EPS).unwrap();
                assert!(d.abs >= 0.0);
                assert!((d.abs - m.abs).abs() <= 1e-10 * d.abs.max(1e-300));
            }
        }
    }

    #[test]
    fn clamp_is_stable() {
        let q = p(1.0, 0.5);
        let a = plancherel_density(&q, 0.0, 1e-4).unwrap().abs;
        let b = plancherel_density(&q, 0.0, 0.5e-4).unwrap().abs;
        let c = plancherel_density(&q, 1e-4, 1e-4).unwrap().abs;
        assert!(a > 0.0);
        assert_eq!(a, c);
        // the density vanishes linearly at the origin, so halving eps halves it
        assert!((b / a - 0.5).abs() < 0.05, "{a} {b}");
    }

    #[test]
    fn growth_constants_bracket() {
        let fit = fit_density_growth(&p(1.0, 0.5), 1.0, 20.0, 96).unwrap();
        assert!(fit.k1_hat > 0.0 && fit.k1_hat <= fit.k2_hat && fit.k2_hat.is_finite());
    }
}
