//! Uncertainty-principle diagnostics: regime classification, the Morgan
//! threshold, Cowling-Price certification by truncated-norm convergence,
//! the Hardy extremal check and decay-envelope fits.
//!
//! Membership of a function in a modulation space cannot be decided from
//! samples. A norm counts as finite when doubling the truncation radius
//! changes it by at most `growth_tol` (5% by default).

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modspace::{mod_norm_1d_samples, mod_norm_2d_samples, Exponent, ModNormRules, WeightFunction};
use crate::sampled::SampledFunction1D;
use crate::windowed::WindowedPlan;

/// Conjugacy tolerance for the Morgan exponents.
pub const CONJUGACY_TOL: f64 = 1e-12;
/// Default relative change under radius doubling that counts as growth.
pub const DEFAULT_GROWTH_TOL: f64 = 0.05;
/// Fits with `r^2` below this are flagged as not matching the model.
pub const ENVELOPE_R2_MIN: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Vanishing,
    Extremal,
    Nonvanishing,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Vanishing => "vanishing",
            Regime::Extremal => "extremal",
            Regime::Nonvanishing => "nonvanishing",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    CowlingPrice,
    Hardy,
}

/// Regime from `ab` against `1/4`. Cowling-Price has no extremal case;
/// Hardy's equality case is detected to relative precision `1e-12`.
pub fn classify_regime(theorem: Theorem, a: f64, b: f64) -> Regime {
    let ab = a * b;
    let equal = (ab - 0.25).abs() <= 1e-12 * 0.25;
    match theorem {
        Theorem::CowlingPrice if ab >= 0.25 || equal => Regime::Vanishing,
        Theorem::CowlingPrice => Regime::Nonvanishing,
        Theorem::Hardy if equal => Regime::Extremal,
        Theorem::Hardy if ab > 0.25 => Regime::Vanishing,
        Theorem::Hardy => Regime::Nonvanishing,
    }
}

/// `(a alpha)^{1/alpha} (b beta)^{1/beta}` against
/// `sin(pi/2 (beta - 1))^{1/beta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorganThreshold {
    pub lhs: f64,
    pub rhs: f64,
    pub vanishing: bool,
}

/// `sin(pi/2 (beta - 1))^{1/beta}`.
pub fn morgan_rhs(beta_exp: f64) -> f64 {
    (FRAC_PI_2 * (beta_exp - 1.0)).sin().powf(1.0 / beta_exp)
}

pub fn morgan_threshold(a: f64, b: f64, alpha_exp: f64, beta_exp: f64) -> Result<MorganThreshold> {
    if !(alpha_exp > 2.0 && alpha_exp.is_finite()) {
        return Err(Error::domain(format!("alpha exponent must exceed 2, got {alpha_exp}")));
    }
    if (1.0 / alpha_exp + 1.0 / beta_exp - 1.0).abs() > CONJUGACY_TOL {
        return Err(Error::domain(format!("exponents {alpha_exp} and {beta_exp} are not conjugate")));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain("a and b must be positive"));
    }
    let lhs = (a * alpha_exp).powf(1.0 / alpha_exp) * (b * beta_exp).powf(1.0 / beta_exp);
    let rhs = morgan_rhs(beta_exp);
    Ok(MorganThreshold { lhs, rhs, vanishing: lhs > rhs })
}

/// The conjugate exponent `alpha / (alpha - 1)`.
pub fn conjugate(alpha_exp: f64) -> f64 {
    alpha_exp / (alpha_exp - 1.0)
}

/// Norm grids for the certification. The doubled grids are derived: the x
/// side keeps its resolution, the time-frequency side keeps its node count
/// (and hence its budget).
#[derive(Debug, Clone)]
pub struct UcpRules {
    pub x: ModNormRules,
    pub tf: ModNormRules,
    pub growth_tol: f64,
}

impl UcpRules {
    /// x radius 3 (12 panels of order 8); time-frequency radius 2 (4 panels
    /// of order 9, 36 nodes per axis).
    pub fn coarse() -> Self {
        Self {
            x: ModNormRules::new(3.0, ModNormRules::t_ppu_for(3.0), 12, 8).expect("valid"),
            tf: ModNormRules::new(2.0, ModNormRules::t_ppu_for(2.0), 4, 9).expect("valid"),
            growth_tol: DEFAULT_GROWTH_TOL,
        }
    }

    /// The x and time-frequency rules at the base and the doubled radius.
    /// Both radii share the integration rule of the doubled one, so every
    /// input is sampled once.
    fn pairs(&self) -> Result<([ModNormRules; 2], [ModNormRules; 2])> {
        let r = self.x.radius * 2.0;
        let x2 = ModNormRules::new(r, ModNormRules::t_ppu_for(r), self.x.eval_panels * 2, self.x.eval_order)?;
        let mut x1 = self.x.clone();
        x1.t = x2.t.clone();
        let tf2 = self.tf.with_radius(self.tf.radius * 2.0)?;
        let mut tf1 = self.tf.clone();
        tf1.t = tf2.t.clone();
        Ok(([x1, x2], [tf1, tf2]))
    }
}

/// Truncated norm at the base and the doubled radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGrowth {
    pub radius: f64,
    pub value: f64,
    pub doubled: f64,
    pub growing: bool,
}

impl NormGrowth {
    fn new(radius: f64, value: f64, doubled: f64, tol: f64) -> Self {
        let growing = if value == 0.0 { doubled != 0.0 } else { ((doubled - value) / value).abs() > tol };
        Self { radius, value, doubled, growing }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthFlags {
    pub x: bool,
    pub tf: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcpReport {
    pub theorem: Theorem,
    pub a: f64,
    pub b: f64,
    pub product_ab: f64,
    pub regime: Regime,
    /// Truncated `||e^{a x^2} f||_{M_m^p}` at the base radius.
    pub x_norm: f64,
    /// Truncated `||e^{b(lambda^2+mu^2)} W_g f||_{M_m^q}` at the base radius.
    pub tf_norm: f64,
    pub x_growth: NormGrowth,
    pub tf_growth: NormGrowth,
    pub growth_flags: GrowthFlags,
    pub notes: String,
}

impl UcpReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Cowling-Price hypotheses for `f` measured as truncated norms of
/// `e^{a x^2} f` (one variable, exponent `p`) and `e^{b(lambda^2+mu^2)} W_g f`
/// (two variables, exponent `q`), each at two radii. `f` is a batch
/// evaluator on increasing grids; the window is the plan's.
#[allow(clippy::too_many_arguments)]
pub fn cowling_price_certify<F>(
    plan: &WindowedPlan,
    f: F,
    a: f64,
    b: f64,
    p: Exponent,
    q: Exponent,
    m_x: &WeightFunction,
    m_tf: &WeightFunction,
    rules: &UcpRules,
) -> Result<UcpReport>
where
    F: Fn(&[f64]) -> Result<Vec<Complex64>>,
{
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain("a and b must be positive"));
    }
    if p == Exponent::Infinite && q == Exponent::Infinite {
        return Err(Error::domain("at least one exponent must be finite"));
    }
    let ([x1, x2], [tf1, tf2]) = rules.pairs()?;
    tf1.check_budget()?;
    tf2.check_budget()?;
    let params = plan.params();

    let t = &x2.t;
    let fx = f(&t.nodes)?;
    let fw: Vec<Complex64> = t
        .iter()
        .zip(&fx)
        .map(|((s, w), v)| {
            let c = v * ((a * s * s).exp() * w);
            if c.is_finite() {
                Ok(c)
            } else {
                Err(Error::Range(format!("e^(a x^2) f overflows at x = {s}")))
            }
        })
        .collect::<Result<_>>()?;
    let xn1 = mod_norm_1d_samples(&fw, p, q, m_x, params, &x1)?.value;
    let xn2 = mod_norm_1d_samples(&fw, p, q, m_x, params, &x2)?.value;

    let tn = &tf2.t.nodes;
    let f_plan = f(&plan.base.rule_x.nodes)?;
    let w = plan.transform_samples(&f_plan, tn, tn)?;
    let n = tn.len();
    let samples: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (l, m) = (tn[idx / n], tn[idx % n]);
            let c = w.values[idx] * (b * (l * l + m * m)).exp();
            if c.is_finite() {
                Ok(c)
            } else {
                Err(Error::Range(format!("e^(b(l^2+m^2)) W_g f overflows at ({l}, {m})")))
            }
        })
        .collect::<Result<_>>()?;
    let tn1 = mod_norm_2d_samples(&samples, p, q, m_tf, params, &tf1)?.value;
    let tn2 = mod_norm_2d_samples(&samples, p, q, m_tf, params, &tf2)?.value;

    let x_growth = NormGrowth::new(x1.radius, xn1, xn2, rules.growth_tol);
    let tf_growth = NormGrowth::new(tf1.radius, tn1, tn2, rules.growth_tol);
    let regime = classify_regime(Theorem::CowlingPrice, a, b);
    let ab = a * b;
    let cmp = if ab >= 0.25 { ">=" } else { "<" };
    let notes = format!(
        "ab = {ab} {cmp} 1/4: {regime}; x-side norm {} under radius doubling, time-frequency norm {}",
        if x_growth.growing { "still growing" } else { "converged" },
        if tf_growth.growing { "still growing" } else { "converged" },
    );
    Ok(UcpReport {
        theorem: Theorem::CowlingPrice,
        a,
        b,
        product_ab: ab,
        regime,
        x_norm: xn1,
        tf_norm: tn1,
        x_growth,
        tf_growth,
        growth_flags: GrowthFlags { x: x_growth.growing, tf: tf_growth.growing },
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub a: f64,
    pub t: f64,
    pub regime_at_equality: Regime,
    pub sup_relative_residual: f64,
}

/// Builds `E_{1/(4a)}` with the plan's window and compares `W_g E_{1/(4a)}`
/// with `exp(-(lambda^2 + mu^2)/(4a))` on the grid.
pub fn hardy_extremal_check(plan: &WindowedPlan, a: f64, lambda_grid: &[f64], mu_grid: &[f64]) -> Result<HardyReport> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    let t = 0.25 / a;
    let r = plan.gaussian_identity_residual(t, lambda_grid, mu_grid)?;
    Ok(HardyReport {
        a,
        t,
        regime_at_equality: classify_regime(Theorem::Hardy, a, t),
        sup_relative_residual: r.sup_relative_residual,
    })
}

/// Least-squares fit of `ln |f| = ln c - a |x|^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub a_hat: f64,
    pub c_hat: f64,
    pub r2: f64,
    pub exponent: f64,
    pub points: usize,
}

impl EnvelopeFit {
    /// Whether the model explains the data (`r^2 >= ENVELOPE_R2_MIN`).
    pub fn matches_model(&self) -> bool {
        self.r2 >= ENVELOPE_R2_MIN
    }
}

/// Fit `|f(x)| ~ c exp(-a x^2)` on the samples with `x` in `window`.
pub fn gaussian_envelope_fit(samples: &SampledFunction1D, window: (f64, f64)) -> Result<EnvelopeFit> {
    super_gaussian_envelope_fit(samples, 2.0, window)
}

/// Fit `|f(x)| ~ c exp(-a |x|^k)` on the samples with `x` in `window`.
pub fn super_gaussian_envelope_fit(samples: &SampledFunction1D, k: f64, window: (f64, f64)) -> Result<EnvelopeFit> {
    if !(k > 0.0) {
        return Err(Error::domain(format!("envelope exponent must be positive, got {k}")));
    }
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (x, v) in samples.grid.iter().zip(&samples.values) {
        if *x < lo || *x > hi {
            continue;
        }
        if !(v.re > 0.0 && v.re.is_finite()) {
            return Err(Error::domain(format!("sample {v} at x = {x} is not positive")));
        }
        xs.push(-x.abs().powf(k));
        ys.push(v.norm().ln());
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::domain(format!("window [{lo}, {hi}] holds only {n} samples")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("window does not vary the regressor"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(EnvelopeFit { a_hat: slope, c_hat: intercept.exp(), r2, exponent: k, points: n })
}
