//! Complex Gamma function via the Lanczos approximation (g = 7, n = 9),
//! with the reflection formula for the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln sin(w)` without overflow for large `|Im w|`. Only the real part and the
/// imaginary part modulo `2 pi` are meaningful.
fn ln_sin(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im > 20.0 {
        -i * w + (1.0 - (2.0 * i * w).exp()).ln() + Complex64::new(-std::f64::consts::LN_2, PI / 2.0)
    } else if w.im < -20.0 {
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() + Complex64::new(-std::f64::consts::LN_2, -PI / 2.0)
    } else {
        w.sin().ln()
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal-ish branch of `ln Gamma(z)`; the imaginary part is only defined
/// modulo `2 pi`, which is all `exp` needs.
///
/// Returns `None` at the poles `z = 0, -1, -2, ...`.
pub fn ln_gamma(z: Complex64) -> Option<Complex64> {
    if is_nonpositive_integer(z) {
        return None;
    }
    if z.re < 0.5 {
        let ln_pi = PI.ln();
        Some(ln_pi - ln_sin(PI * z) - ln_gamma_right(1.0 - z))
    } else {
        Some(ln_gamma_right(z))
    }
}

/// `Gamma(z)`; `None` at the poles.
pub fn gamma(z: Complex64) -> Option<Complex64> {
    ln_gamma(z).map(|l| l.exp())
}

/// The reciprocal Gamma function `1 / Gamma(z)`, an entire function that
/// vanishes at the non-positive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        let s = (PI * z).sin();
        if s.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (s.ln() + ln_gamma_right(1.0 - z)).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// Real `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    ln_gamma_right(Complex64::new(x, 0.0)).re
}

/// Real `Gamma(x)`; `None` at the poles.
pub fn gamma_real(x: f64) -> Option<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}
