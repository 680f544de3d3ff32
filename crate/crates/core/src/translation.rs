//! The translation kernel `K(x, y, z)` and the generalized translation
//! `tau_x f(y) = int f(z) K(x, y, z) A(z) dz`.
//!
//! Write `g(x, y, z, chi) = 4 c_x c_y c_z (q - sin^2(chi/2))` with
//! `q = sinh S sinh(S - |x|) sinh(S - |y|) sinh(S - |z|) / (c_x c_y c_z)` and
//! `S = (|x| + |y| + |z|) / 2`. The triangle condition is `q > 0`, the
//! positive part of `g` lives on `chi < chi0 = 2 asin(sqrt q)`, and
//! `q - sin^2(chi/2) = sin((chi0 - chi)/2) sin((chi0 + chi)/2)` gives the
//! integrand near the root without cancellation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{ln_cosh, ln_sinh};
use crate::params::JCParams;
use crate::quadrature::{CompensatedSum, TanhSinh};
use crate::specfun::ln_gamma_real;

/// Default tanh-sinh step for the `chi` integral.
pub const DEFAULT_CHI_STEP: f64 = 0.1;
/// Default tanh-sinh step for the `z` shells.
pub const DEFAULT_Z_STEP: f64 = 0.1;

/// A kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub value: f64,
}

/// Quadrature settings for the kernel and the translation.
#[derive(Debug, Clone)]
pub struct TranslationRules {
    pub chi: TanhSinh,
    pub z: TanhSinh,
}

impl Default for TranslationRules {
    fn default() -> Self {
        Self { chi: TanhSinh::new(DEFAULT_CHI_STEP), z: TanhSinh::new(DEFAULT_Z_STEP) }
    }
}

impl TranslationRules {
    pub fn with_steps(chi_step: f64, z_step: f64) -> Self {
        Self { chi: TanhSinh::new(chi_step), z: TanhSinh::new(z_step) }
    }
}

/// `ln M` with `M = Gamma(alpha+1) / (sqrt(pi) Gamma(alpha-beta) Gamma(beta+1/2))`.
fn ln_m(p: &JCParams) -> Result<f64> {
    let (a, b) = (p.alpha(), p.beta());
    if a == b {
        return Err(Error::DegenerateParameter(format!(
            "alpha = beta = {a}: Gamma(alpha - beta) has a pole"
        )));
    }
    if b == -0.5 {
        return Err(Error::DegenerateParameter("beta = -1/2: Gamma(beta + 1/2) has a pole".into()));
    }
    Ok(ln_gamma_real(a + 1.0) - 0.5 * PI.ln() - ln_gamma_real(a - b) - ln_gamma_real(b + 0.5))
}

/// Half-perimeter data of the hyperbolic triangle with sides `|x|, |y|, |z|`.
/// `da, db, dc` are `S - |x|`, `S - |y|`, `S - |z|`, supplied exactly by
/// callers that know the distance to the shell boundary.
#[derive(Debug, Clone, Copy)]
struct Triangle {
    x: f64,
    y: f64,
    z: f64,
    da: f64,
    db: f64,
    dc: f64,
}

impl Triangle {
    fn new(x: f64, y: f64, z: f64) -> Self {
        let (a, b, c) = (x.abs(), y.abs(), z.abs());
        Self { x, y, z, da: 0.5 * (b + c - a), db: 0.5 * (a + c - b), dc: 0.5 * (a + b - c) }
    }

    fn inside(&self) -> bool {
        self.da > 0.0 && self.db > 0.0 && self.dc > 0.0
    }
}

/// `ln |K(x, y, z)| + ln A(z)` together with the sign of `K`.
fn kernel_times_a(p: &JCParams, t: &Triangle, chi_rule: &TanhSinh) -> Result<(f64, f64)> {
    let ln_m = ln_m(p)?;
    if !t.inside() || t.x == 0.0 || t.y == 0.0 || t.z == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let (a, b, c) = (t.x.abs(), t.y.abs(), t.z.abs());
    let s = 0.5 * (a + b + c);
    let (lcx, lcy, lcz) = (ln_cosh(a), ln_cosh(b), ln_cosh(c));
    let ln_q = ln_sinh(s) + ln_sinh(t.da) + ln_sinh(t.db) + ln_sinh(t.dc) - lcx - lcy - lcz;
    let q = ln_q.exp().min(1.0);
    let chi0 = 2.0 * q.sqrt().asin();

    let (alpha, beta) = (p.alpha(), p.beta());
    let e = alpha - beta - 1.0;
    let (sx, sy, sz) = (t.x.sinh(), t.y.sinh(), t.z.sinh());
    let (cx, cy, cz) = (a.cosh(), b.cosh(), c.cosh());
    // coth x coth y coth z; cosh ratios bounded even when sinh is large
    let coth3 = (cx / sx) * (cy / sy) * (cz / sz);
    let kappa = p.rho() / (beta + 0.5);
    let r_xy = cx / sx * (cy / sy);
    let r_xz = cx / sx * (cz / sz);
    let r_zy = cz / sz * (cy / sy);
    let d_xy = cz / (sx * sy);
    let d_xz = cy / (sx * sz);
    let d_zy = cx / (sz * sy);

    let integral = chi_rule.integrate_gaps(0.0, chi0, |chi, g0, g1| {
        let cos = chi.cos();
        let sin = g0.sin();
        // sigma_{x,y,z} - 1 etc. assembled from the displayed definitions
        let sig_xyz = r_xy - d_xy * cos;
        let sig_xzy = r_xz - d_xz * cos;
        let sig_zyx = r_zy - d_zy * cos;
        let bracket = 1.0 - sig_xyz + sig_xzy + sig_zyx + kappa * coth3 * sin * sin;
        // powers taken per factor: their product underflows near a narrow root
        let v = (0.5 * g1).sin().powf(e) * (0.5 * (chi0 + chi)).sin().powf(e) * sin.powf(2.0 * beta) * bracket;
        Ok(Complex64::new(v, 0.0))
    })?;
    let val = integral.re;
    if val == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let ln_pref = ln_m - 2.0 * alpha * (ln_sinh(a) + ln_sinh(b) + ln_sinh(c))
        + e * (4f64.ln() + lcx + lcy + lcz);
    let ln_a = (2.0 * alpha + 1.0) * ln_sinh(c) + (2.0 * beta + 1.0) * lcz;
    Ok((ln_pref + ln_a + val.abs().ln(), val.signum()))
}

/// `K(x, y, z)`; exactly zero outside `||x| - |y|| < |z| < |x| + |y|` or
/// when a coordinate vanishes.
pub fn kernel_k(p: &JCParams, x: f64, y: f64, z: f64, chi_rule: &TanhSinh) -> Result<f64> {
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::domain("kernel arguments must be finite"));
    }
    let t = Triangle::new(x, y, z);
    let (ln_ka, sign) = kernel_times_a(p, &t, chi_rule)?;
    if sign == 0.0 {
        return Ok(0.0);
    }
    let c = z.abs();
    let ln_a = (2.0 * p.alpha() + 1.0) * ln_sinh(c) + (2.0 * p.beta() + 1.0) * ln_cosh(c);
    let v = sign * (ln_ka - ln_a).exp();
    if !v.is_finite() {
        return Err(Error::Range(format!("K({x}, {y}, {z}) overflows")));
    }
    Ok(v)
}

/// Kernel value as a [`KernelPoint`].
pub fn kernel_point(p: &JCParams, x: f64, y: f64, z: f64, chi_rule: &TanhSinh) -> Result<KernelPoint> {
    Ok(KernelPoint { x, y, z, value: kernel_k(p, x, y, z, chi_rule)? })
}

/// `int f(z) K(x, y, z) A(z) dz` over both shells. The integrand is handed
/// to `f` together with the `z` node; endpoints of the shells are reached
/// through exact gaps.
fn shell_integral<F>(p: &JCParams, f: F, x: f64, y: f64, rules: &TranslationRules) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let (a, b) = (x.abs(), y.abs());
    let lo = (a - b).abs();
    let hi = a + b;
    let mut total = CompensatedSum::new();
    for sign in [1.0, -1.0] {
        let v = rules.z.integrate_gaps(lo, hi, |c, g_lo, g_hi| {
            let z = sign * c;
            let (da, db) = if a >= b { (0.5 * g_lo, lo + 0.5 * g_lo) } else { (lo + 0.5 * g_lo, 0.5 * g_lo) };
            let t = Triangle { x, y, z, da, db, dc: 0.5 * g_hi };
            let (ln_ka, s) = kernel_times_a(p, &t, &rules.chi)?;
            if s == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let fz = f(z)?;
            if fz == Complex64::new(0.0, 0.0) {
                return Ok(fz);
            }
            Ok(fz * (s * ln_ka.exp()))
        })?;
        total.add(v);
    }
    Ok(total.value())
}

/// `tau_x f(y)`. The point masses for `x = 0` or `y = 0` are applied
/// exactly.
pub fn translate<F>(p: &JCParams, f: F, x: f64, y: f64, rules: &TranslationRules) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::domain("translation arguments must be finite"));
    }
    if x == 0.0 {
        return f(y);
    }
    if y == 0.0 {
        return f(x);
    }
    shell_integral(p, f, x, y, rules)
}

/// `int K(x, y, z) A(z) dz`, the total mass of the translation measure.
pub fn translation_mass(p: &JCParams, x: f64, y: f64, rules: &TranslationRules) -> Result<f64> {
    Ok(translate(p, |_| Ok(Complex64::new(1.0, 0.0)), x, y, rules)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::opdam_g;

    fn p() -> JCParams {
        JCParams::new(1.0, 0.25).unwrap()
    }

    #[test]
    fn zero_outside_triangle() {
        let r = TanhSinh::new(DEFAULT_CHI_STEP);
        assert_eq!(kernel_k(&p(), 1.0, 1.0, 3.0, &r).unwrap(), 0.0);
        assert_eq!(kernel_k(&p(), 1.0, 3.0, 1.0, &r).unwrap(), 0.0);
        assert_eq!(kernel_k(&p(), 0.0, 1.0, 1.0, &r).unwrap(), 0.0);
        assert_eq!(kernel_k(&p(), 1.0, 1.0, 2.0, &r).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_parameters() {
        let r = TanhSinh::new(DEFAULT_CHI_STEP);
        let eq = JCParams::new(1.0, 1.0).unwrap();
        assert!(matches!(kernel_k(&eq, 1.0, 1.0, 0.5, &r), Err(Error::DegenerateParameter(_))));
        let half = JCParams::new(1.0, -0.5).unwrap();
        assert!(matches!(kernel_k(&half, 1.0, 1.0, 0.5, &r), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn swap_symmetry() {
        let r = TanhSinh::new(DEFAULT_CHI_STEP);
        let a = kernel_k(&p(), 1.0, 2.0, 1.5, &r).unwrap();
        let b = kernel_k(&p(), 2.0, 1.0, 1.5, &r).unwrap();
        assert!(a != 0.0);
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn refinement_oracle() {
        let a = kernel_k(&p(), 1.0, 1.0, 0.5, &TanhSinh::new(0.1)).unwrap();
        let b = kernel_k(&p(), 1.0, 1.0, 0.5, &TanhSinh::new(0.05)).unwrap();
        assert!((a - b).abs() < 1e-6 * b.abs(), "{a} {b}");
    }

    #[test]
    fn delta_branches() {
        let r = TranslationRules::default();
        let f = |z: f64| Ok(Complex64::new((-z * z).exp(), 0.0));
        assert_eq!(translate(&p(), f, 0.0, 0.7, &r).unwrap(), f(0.7).unwrap());
        assert_eq!(translate(&p(), f, 1.2, 0.0, &r).unwrap(), f(1.2).unwrap());
    }

    #[test]
    fn translation_is_symmetric() {
        let r = TranslationRules::default();
        let f = |z: f64| Ok(Complex64::new((-z * z).exp(), 0.0));
        let a = translate(&p(), f, 0.8, 1.1, &r).unwrap();
        let b = translate(&p(), f, 1.1, 0.8, &r).unwrap();
        assert!((a - b).norm() < 1e-6, "{a} {b}");
    }

    #[test]
    fn eigenfunction_product_formula() {
        // tau_x G_lambda(y) = G_lambda(x) G_lambda(y)
        let r = TranslationRules::default();
        let q = p();
        for (x, y, lam) in [(0.8, 1.1, 1.0), (-0.6, 0.9, 2.0), (1.3, -0.4, 0.5)] {
            let l = Complex64::new(lam, 0.0);
            let lhs = translate(&q, |z| opdam_g(&q, l, z), x, y, &r).unwrap();
            let rhs = opdam_g(&q, l, x).unwrap() * opdam_g(&q, l, y).unwrap();
            assert!((lhs - rhs).norm() < 1e-7, "({x},{y},{lam}): {lhs} vs {rhs}");
        }
    }
}
