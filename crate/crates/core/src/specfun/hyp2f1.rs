//! Gauss hypergeometric function `2F1(a, b; c; z)`.
//!
//! The power series is only summed for arguments of modulus at most 1/2.
//! Other arguments are first mapped there: by the Pfaff transformation
//! `z -> z / (z - 1)`, by the connection formula around `z = 1`, or by both.
//! On the negative real axis (the case `z = -sinh^2 x` of the Jacobi
//! functions) one of these always applies, however large `|z|` is.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma, rgamma};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;
const LONG_SERIES_MAX_TERMS: usize = 5_000_000;
/// Distance of `c - a - b` to the integers below which the connection
/// formula is treated as degenerate.
const DEGENERATE_GAP: f64 = 0.01;
const CIRCLE_RADIUS: f64 = 0.05;
const CIRCLE_POINTS: usize = 24;

fn near_nonpositive_integer(z: Complex64) -> bool {
    let n = z.re.round();
    n <= 0.0 && (z - n).norm() <= 1e-14 * (1.0 + n.abs())
}

fn distance_to_integer(z: Complex64) -> f64 {
    (z - z.re.round()).norm()
}

/// Plain power series. `atol` is the target absolute error of the sum.
fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64, atol: f64, cap: usize) -> Result<Complex64> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let zn = z.norm();
    let n_min = 2.0 * (a.norm() + b.norm() + c.norm()) + 2.0;
    for n in 0..cap {
        let nf = n as f64;
        let num = (a + nf) * (b + nf);
        if num.norm() == 0.0 {
            return Ok(sum);
        }
        let ratio = num / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if nf >= n_min {
            let r = ratio.norm().max(zn);
            if r < 1.0 {
                let tail = term.norm() * r / (1.0 - r);
                if tail <= atol || tail <= 1e-17 * sum.norm() {
                    return Ok(sum);
                }
            }
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Range(format!("2F1 series overflow at term {n}")));
        }
    }
    Err(Error::Convergence { iterations: cap, partial: sum })
}

/// `2F1(a, b; c; 1 - y)` for `|y| <= 1/2` through the connection formula
/// around `z = 1`. Integer values of `c - a - b` make the two terms singular
/// individually; there the value is recovered as the mean over a small circle
/// in the parameter `a` (the function is entire in `a`).
fn around_one(a: Complex64, b: Complex64, c: Complex64, y: Complex64, atol: f64) -> Result<Complex64> {
    let s = c - a - b;
    if distance_to_integer(s) >= DEGENERATE_GAP {
        return connection(a, b, c, y, atol);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CIRCLE_POINTS {
        let theta = 2.0 * PI * (k as f64 + 0.5) / CIRCLE_POINTS as f64;
        let shift = Complex64::from_polar(CIRCLE_RADIUS, theta);
        acc += connection(a + shift, b, c, y, atol)?;
    }
    Ok(acc / CIRCLE_POINTS as f64)
}

fn connection(a: Complex64, b: Complex64, c: Complex64, y: Complex64, atol: f64) -> Result<Complex64> {
    let s = c - a - b;
    let gc = gamma(c).ok_or_else(|| Error::Pole(format!("Gamma(c) at c = {c}")))?;
    let first = match gamma(s) {
        Some(gs) => {
            let pre = gc * gs * rgamma(c - a) * rgamma(c - b);
            if pre.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                pre * series(a, b, 1.0 - s, y, atol / pre.norm(), MAX_TERMS)?
            }
        }
        None => return Err(Error::Pole(format!("Gamma(c - a - b) at {s}"))),
    };
    let second = match gamma(-s) {
        Some(gms) => {
            let pre = gc * gms * rgamma(a) * rgamma(b) * (s * y.ln()).exp();
            if pre.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                pre * series(c - a, c - b, 1.0 + s, y, atol / pre.norm(), MAX_TERMS)?
            }
        }
        None => return Err(Error::Pole(format!("Gamma(a + b - c) at {}", -s))),
    };
    Ok(first + second)
}

/// Evaluates `2F1(a, b; c; z)` with estimated absolute error at most `tol`
/// (or close to machine precision relative to the value, whichever is
/// larger).
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if near_nonpositive_integer(c) {
        return Err(Error::domain(format!(
            "c = {c} is a non-positive integer (pole of 2F1)"
        )));
    }
    for v in [a, b, c, z] {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::domain("non-finite 2F1 argument"));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    if z.norm() == 0.0 || a.norm() == 0.0 || b.norm() == 0.0 {
        return Ok(one);
    }
    if z.norm() <= 0.5 {
        return series(a, b, c, z, tol, MAX_TERMS);
    }
    // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
    let w = z / (z - 1.0);
    let pfaff = (-a * (one - z).ln()).exp();
    let scaled = tol / pfaff.norm().max(f64::MIN_POSITIVE);
    if w.norm() <= 0.5 {
        return Ok(pfaff * series(a, c - b, c, w, scaled, MAX_TERMS)?);
    }
    let y = one - z;
    if y.norm() <= 0.5 {
        return around_one(a, b, c, y, tol);
    }
    // 1 - w = 1/(1 - z), formed without cancellation
    let yw = one / (one - z);
    if yw.norm() <= 0.5 {
        return Ok(pfaff * around_one(a, c - b, c, yw, scaled)?);
    }
    if w.norm() < 1.0 {
        return Ok(pfaff * series(a, c - b, c, w, scaled, LONG_SERIES_MAX_TERMS)?);
    }
    Err(Error::domain(format!(
        "2F1 argument z = {z} lies outside the supported continuation region"
    )))
}
