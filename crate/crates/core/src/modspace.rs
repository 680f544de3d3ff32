//! Classical short-time Fourier transforms and weighted mixed norms.
//!
//! `V_g f(x, xi) = int f(t) conj(g(t - x)) e^{-2 pi i xi t} dt`, and in two
//! variables the time point is `(x1, xi1)` and the frequency `(x2, xi2)`.
//! The one-variable norm integrates `|V_g f|^p m^p` against `A(x) dx` and then
//! against `A(xi) d xi`; the two-variable norm integrates against
//! `A(x1) dx1 d|sigma|(xi1)` inside and `A(x2) dx2 d|sigma|(xi2)` outside.
//! The analysing window is `exp(-pi |t|^2)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::{plancherel_density, weight_a, DENSITY_EPS};
use crate::params::JCParams;
use crate::quadrature::{build_rule, evaluate_on, gauss_legendre_on, CompensatedSum, QuadratureRule, Scheme};

/// Default cap on four-dimensional tensor evaluations.
pub const DEFAULT_BUDGET: usize = 40 * 40 * 40 * 40;

/// Half-width of the band where the analysing window is kept
/// (`exp(-pi 4^2) ~ 1.5e-22`).
pub const WINDOW_REACH: f64 = 4.0;

/// The analysing window `exp(-pi t^2)`.
pub fn gaussian_window(t: f64) -> f64 {
    (-PI * t * t).exp()
}

/// `V_g 1` for the window `exp(-pi (t1^2 + t2^2))`:
/// `e^{-2 pi i (x1 x2 + xi1 xi2)} e^{-pi (x2^2 + xi2^2)}`.
pub fn gaussian_stft_of_one(time: [f64; 2], freq: [f64; 2]) -> Complex64 {
    let phase = -2.0 * PI * (time[0] * freq[0] + time[1] * freq[1]);
    Complex64::from_polar((-PI * (freq[0] * freq[0] + freq[1] * freq[1])).exp(), phase)
}

/// A Lebesgue exponent in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::domain(format!("exponent must lie in [1, inf], got {p}")))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" => Ok(Exponent::Infinite),
            _ => Exponent::new(s.parse().map_err(|_| Error::domain(format!("bad exponent `{s}`")))?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A weight `m >= 1` on R^2 or R^4. Points are passed as
/// `[x, xi]` or `[x1, xi1, x2, xi2]`.
#[derive(Clone)]
pub struct WeightFunction {
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    constant: Option<f64>,
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant {
            Some(c) => write!(f, "WeightFunction(constant {c})"),
            None => f.write_str("WeightFunction(<fn>)"),
        }
    }
}

impl WeightFunction {
    pub fn new(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), constant: None }
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::domain(format!("weight must be >= 1, got {c}")));
        }
        Ok(Self { f: Arc::new(move |_| c), constant: Some(c) })
    }

    pub fn one() -> Self {
        Self::constant(1.0).expect("1 is a valid weight")
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if let Some(c) = self.constant {
            return Ok(c);
        }
        let v = (self.f)(point);
        if !(v >= 1.0 && v.is_finite()) {
            return Err(Error::domain(format!("weight m({point:?}) = {v} is not >= 1")));
        }
        Ok(v)
    }
}

/// `V_g f(x, xi)` on the rule, centred on the window.
pub fn stft<F, G>(f: F, g: G, x: f64, xi: f64, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
    G: Fn(f64) -> Result<Complex64>,
{
    let mut s = CompensatedSum::new();
    for (u, w) in rule.iter() {
        let t = x + u;
        let v = f(t)? * g(u)?.conj() * Complex64::from_polar(w, -2.0 * PI * xi * t);
        s.add(crate::quadrature::check_finite(t, v)?);
    }
    Ok(s.value())
}

/// Two-variable `V_g f` at time `(x1, xi1)` and frequency `(x2, xi2)`, on the
/// tensor rule centred on the window.
pub fn stft_2d<F, G>(f: F, g: G, time: [f64; 2], freq: [f64; 2], rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Result<Complex64> + Sync,
    G: Fn(f64, f64) -> Result<Complex64> + Sync,
{
    let rows = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(&u1, &w1)| {
            let mut s = CompensatedSum::new();
            for (u2, w2) in rule.iter() {
                let (t1, t2) = (time[0] + u1, time[1] + u2);
                let phase = -2.0 * PI * (freq[0] * t1 + freq[1] * t2);
                let v = f(t1, t2)? * g(u1, u2)?.conj() * Complex64::from_polar(w1 * w2, phase);
                s.add(crate::quadrature::check_finite(t1, v)?);
            }
            Ok(s.value())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().collect::<CompensatedSum>().value())
}

/// Integration and evaluation grids for the mixed norms. The time and
/// frequency variables are sampled on the composite Gauss-Legendre `eval`
/// grid of `[-radius, radius]`; the STFT integral runs over `t` on
/// `[-radius - WINDOW_REACH, radius + WINDOW_REACH]`, where the input is
/// truncated.
#[derive(Debug, Clone)]
pub struct ModNormRules {
    pub radius: f64,
    pub t: QuadratureRule,
    pub eval_nodes: Vec<f64>,
    pub eval_weights: Vec<f64>,
    pub eval_panels: usize,
    pub eval_order: usize,
    pub t_ppu: usize,
    /// Cap on four-dimensional tensor evaluations.
    pub budget: usize,
}

impl ModNormRules {
    pub fn new(radius: f64, t_ppu: usize, eval_panels: usize, eval_order: usize) -> Result<Self> {
        let t = build_rule(radius + WINDOW_REACH, t_ppu, Scheme::GaussLegendreComposite)?;
        let (eval_nodes, eval_weights) = gauss_legendre_on(-radius, radius, eval_panels, eval_order)?;
        Ok(Self { radius, t, eval_nodes, eval_weights, eval_panels, eval_order, t_ppu, budget: DEFAULT_BUDGET })
    }

    /// Integration nodes per unit that resolve `e^{-2 pi i xi t}` for
    /// `|xi| <= radius`. Errors at large `xi` are amplified by the exponential
    /// growth of `A(xi)`, so they must sit at rounding level.
    pub fn t_ppu_for(radius: f64) -> usize {
        ((PI * radius).ceil() as usize + 14).max(16)
    }

    /// Radius 6, 12 unit panels of order 8.
    pub fn default_1d() -> Self {
        Self::new(6.0, Self::t_ppu_for(6.0), 12, 8).expect("valid defaults")
    }

    /// Radius 3, 6 panels of order 6 (36 nodes per axis).
    pub fn default_2d() -> Self {
        Self::new(3.0, Self::t_ppu_for(3.0), 6, 6).expect("valid defaults")
    }

    /// Same evaluation node count on `[-radius, radius]`; the integration
    /// rule is resized by [`t_ppu_for`](Self::t_ppu_for).
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        let t_ppu = self.t_ppu.max(Self::t_ppu_for(radius));
        let mut r = Self::new(radius, t_ppu, self.eval_panels, self.eval_order)?;
        r.budget = self.budget;
        r.t = build_rule(radius + WINDOW_REACH, t_ppu, self.t.scheme)?;
        Ok(r)
    }

    pub fn with_t_scheme(mut self, scheme: Scheme) -> Result<Self> {
        self.t = build_rule(self.radius + WINDOW_REACH, self.t_ppu, scheme)?;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn n_eval(&self) -> usize {
        self.eval_nodes.len()
    }

    /// Budget error when the four-dimensional evaluation grid exceeds the cap.
    pub fn check_budget(&self) -> Result<()> {
        let n = self.n_eval();
        let requested = n.saturating_mul(n).saturating_mul(n).saturating_mul(n);
        if requested > self.budget {
            return Err(Error::Budget { requested, cap: self.budget });
        }
        Ok(())
    }
}

/// One norm evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModNormReport {
    pub p: Exponent,
    pub q: Exponent,
    pub radius: f64,
    /// Integration nodes per axis, then evaluation nodes per axis.
    pub nodes: Vec<usize>,
    pub value: f64,
}

fn scaled_power_sum(values: &[f64], weights: &[f64], p: Exponent) -> f64 {
    let top = values.iter().copied().fold(0.0, f64::max);
    match p {
        Exponent::Infinite => top,
        Exponent::Finite(p) => {
            if top == 0.0 {
                return 0.0;
            }
            let mut s = CompensatedSum::new();
            for (v, w) in values.iter().zip(weights) {
                s.add(Complex64::new((v / top).powf(p) * w, 0.0));
            }
            top * s.value().re.powf(1.0 / p)
        }
    }
}

/// `( sum_j v_j ( sum_i |c_ji|^p w_i )^{q/p} )^{1/q}` with grid suprema for
/// infinite exponents. `rows[j]` holds the inner cells for outer index `j`.
pub fn mixed_norm(rows: &[Vec<f64>], inner_w: &[f64], outer_w: &[f64], p: Exponent, q: Exponent) -> Result<f64> {
    if rows.len() != outer_w.len() || rows.iter().any(|r| r.len() != inner_w.len()) {
        return Err(Error::domain("cell matrix does not match the weights"));
    }
    for (j, row) in rows.iter().enumerate() {
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Range(format!("non-finite cell ({i}, {j}): {}", row[i])));
        }
    }
    let inner: Vec<f64> = rows.iter().map(|r| scaled_power_sum(r, inner_w, p)).collect();
    let v = scaled_power_sum(&inner, outer_w, q);
    if !v.is_finite() {
        return Err(Error::Range(format!("mixed norm overflows: {v}")));
    }
    Ok(v)
}

fn a_weights(params: &JCParams, nodes: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    nodes.iter().zip(weights).map(|(x, w)| Ok(weight_a(params, *x)? * w)).collect()
}

fn sigma_weights(params: &JCParams, nodes: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| Ok(plancherel_density(params, *x, DENSITY_EPS)?.abs * w))
        .collect()
}

/// `g(t_k - e_i) e^{-2 pi i e_a t_k}` for the `t_k` within `WINDOW_REACH`
/// of `e_i`, starting at index `start`.
struct Band {
    start: usize,
    values: Vec<Complex64>,
}

impl Band {
    fn dot(&self, f: impl Fn(usize) -> Complex64) -> Complex64 {
        let mut s = CompensatedSum::new();
        for (j, k) in self.values.iter().enumerate() {
            s.add(f(self.start + j) * k);
        }
        s.value()
    }
}

/// Bands indexed by `i * n + a`: window shifted to `e_i`, modulated by `e_a`.
fn shift_modulation_table(t: &[f64], e: &[f64]) -> Vec<Band> {
    let n = e.len();
    (0..n * n)
        .into_par_iter()
        .map(|ia| {
            let (xi, fa) = (e[ia / n], e[ia % n]);
            let start = t.partition_point(|tk| *tk < xi - WINDOW_REACH);
            let end = t.partition_point(|tk| *tk <= xi + WINDOW_REACH);
            let values = t[start..end]
                .iter()
                .map(|&tk| Complex64::from_polar(gaussian_window(tk - xi), -2.0 * PI * fa * tk))
                .collect();
            Band { start, values }
        })
        .collect()
}

/// `V_g f(e_i, e_a)` from weighted samples `fw_k = f(t_k) w_k`, as `[a][i]`.
fn stft_table(fw: &[Complex64], table: &[Band], n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .into_par_iter()
        .map(|a| (0..n).map(|i| table[i * n + a].dot(|k| fw[k])).collect())
        .collect()
}

fn weighted_samples<F>(f: F, rule: &QuadratureRule) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    Ok(evaluate_on(f, &rule.nodes)?.into_iter().zip(&rule.weights).map(|(v, w)| v * w).collect())
}

/// Cells `|V| m` of a two-variable table `[outer][inner]`, with `m` evaluated
/// at `point(inner, outer)`.
fn weighted_cells<P>(v: &[Vec<Complex64>], m: &WeightFunction, point: P) -> Result<Vec<Vec<f64>>>
where
    P: Fn(usize, usize) -> [f64; 2] + Sync,
{
    v.par_iter()
        .enumerate()
        .map(|(a, row)| row.iter().enumerate().map(|(i, z)| Ok(z.norm() * m.eval(&point(i, a))?)).collect())
        .collect()
}

/// Truncated `||f||_{M_m^{p,q}(R, A)}`.
pub fn mod_norm_1d<F>(
    f: F,
    p: Exponent,
    q: Exponent,
    m: &WeightFunction,
    params: &JCParams,
    rules: &ModNormRules,
) -> Result<ModNormReport>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let fw = weighted_samples(f, &rules.t)?;
    mod_norm_1d_samples(&fw, p, q, m, params, rules)
}

/// As [`mod_norm_1d`] from weighted samples `f(t_k) w_k` on `rules.t`.
pub fn mod_norm_1d_samples(
    fw: &[Complex64],
    p: Exponent,
    q: Exponent,
    m: &WeightFunction,
    params: &JCParams,
    rules: &ModNormRules,
) -> Result<ModNormReport> {
    if fw.len() != rules.t.len() {
        return Err(Error::domain("samples do not match the integration rule"));
    }
    let e = &rules.eval_nodes;
    let table = shift_modulation_table(&rules.t.nodes, e);
    let v = stft_table(fw, &table, e.len());
    let cells = weighted_cells(&v, m, |i, a| [e[i], e[a]])?;
    let wa = a_weights(params, e, &rules.eval_weights)?;
    let value = mixed_norm(&cells, &wa, &wa, p, q)?;
    Ok(ModNormReport { p, q, radius: rules.radius, nodes: vec![rules.t.len(), e.len()], value })
}

/// Truncated `||F||_{M_m^{p,q}(R^2, A (x) sigma)}` for a callable `F(t1, t2)`.
pub fn mod_norm_2d<F>(
    f: F,
    p: Exponent,
    q: Exponent,
    m: &WeightFunction,
    params: &JCParams,
    rules: &ModNormRules,
) -> Result<ModNormReport>
where
    F: Fn(f64, f64) -> Result<Complex64> + Sync,
{
    rules.check_budget()?;
    let t = &rules.t;
    let samples: Vec<Complex64> = t
        .nodes
        .par_iter()
        .map(|&t1| t.nodes.iter().map(|&t2| f(t1, t2)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    mod_norm_2d_samples(&samples, p, q, m, params, rules)
}

/// As [`mod_norm_2d`] from samples `F(t_k1, t_k2)` on the tensor integration
/// grid, row-major in `t1`.
pub fn mod_norm_2d_samples(
    samples: &[Complex64],
    p: Exponent,
    q: Exponent,
    m: &WeightFunction,
    params: &JCParams,
    rules: &ModNormRules,
) -> Result<ModNormReport> {
    rules.check_budget()?;
    let t = &rules.t;
    let nt = t.len();
    if samples.len() != nt * nt {
        return Err(Error::domain("samples do not match the tensor integration grid"));
    }
    let e = &rules.eval_nodes;
    let n = e.len();
    let table = shift_modulation_table(&t.nodes, e);
    // h[k1][j1 * n + j2] = sum_k2 F(t_k1, t_k2) w_k1 w_k2 g(t_k2 - e_j1) e^{-2 pi i e_j2 t_k2}
    let h: Vec<Vec<Complex64>> = (0..nt)
        .into_par_iter()
        .map(|k1| {
            let row = &samples[k1 * nt..(k1 + 1) * nt];
            (0..n * n).map(|jj| table[jj].dot(|k2| row[k2] * (t.weights[k2] * t.weights[k1]))).collect()
        })
        .collect();
    let wa = a_weights(params, e, &rules.eval_weights)?;
    let ws = sigma_weights(params, e, &rules.eval_weights)?;
    let inner_w: Vec<f64> = (0..n * n).map(|c| wa[c / n] * ws[c % n]).collect();
    let outer_w = inner_w.clone();
    // outer cell (a, j2) = (x2, xi2); inner cell (i, j1) = (x1, xi1)
    let cells: Vec<Vec<f64>> = (0..n * n)
        .into_par_iter()
        .map(|outer| {
            let (a, j2) = (outer / n, outer % n);
            let mut row = Vec::with_capacity(n * n);
            for i in 0..n {
                let band = &table[i * n + a];
                for j1 in 0..n {
                    let v = band.dot(|k1| h[k1][j1 * n + j2]);
                    row.push(v.norm() * m.eval(&[e[i], e[j1], e[a], e[j2]])?);
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let value = mixed_norm(&cells, &inner_w, &outer_w, p, q)?;
    Ok(ModNormReport { p, q, radius: rules.radius, nodes: vec![nt, n], value })
}

/// Fast path for `F(t1, t2) = f1(t1) f2(t2)` and
/// `m((x1, xi1), (x2, xi2)) = m1(x1, x2) m2(xi1, xi2)`: the norm is the product
/// of a norm over `A (x) A` and one over `|sigma| (x) |sigma|`.
#[allow(clippy::too_many_arguments)]
pub fn mod_norm_2d_separable<F1, F2>(
    f1: F1,
    f2: F2,
    p: Exponent,
    q: Exponent,
    m1: &WeightFunction,
    m2: &WeightFunction,
    params: &JCParams,
    rules: &ModNormRules,
) -> Result<ModNormReport>
where
    F1: Fn(f64) -> Result<Complex64> + Sync,
    F2: Fn(f64) -> Result<Complex64> + Sync,
{
    let e = &rules.eval_nodes;
    let n = e.len();
    let table = shift_modulation_table(&rules.t.nodes, e);
    let v1 = stft_table(&weighted_samples(f1, &rules.t)?, &table, n);
    let v2 = stft_table(&weighted_samples(f2, &rules.t)?, &table, n);
    let c1 = weighted_cells(&v1, m1, |i, a| [e[i], e[a]])?;
    let c2 = weighted_cells(&v2, m2, |j1, j2| [e[j1], e[j2]])?;
    let wa = a_weights(params, e, &rules.eval_weights)?;
    let ws = sigma_weights(params, e, &rules.eval_weights)?;
    let value = mixed_norm(&c1, &wa, &wa, p, q)? * mixed_norm(&c2, &ws, &ws, p, q)?;
    Ok(ModNormReport { p, q, radius: rules.radius, nodes: vec![rules.t.len(), n], value })
}

/// Both sides of the box bound for `f = 1` and the two-variable Gaussian
/// window: the `1/m`-weighted `L^p` norm of `V_g 1` over
/// `x1, x2 in [rho1 sigma, rho1 (sigma + 1)]`, `xi1, xi2 in [rho2 sigma, rho2 (sigma + 1)]`
/// against `rho1^{2/p} rho2^{2/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxNormCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl BoxNormCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn box_norm_bound_check(p: f64, rho1: f64, rho2: f64, sigma: f64, m: &WeightFunction) -> Result<BoxNormCheck> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("box norm needs a finite exponent >= 1, got {p}")));
    }
    if !(rho1 > 0.0 && rho2 > 0.0 && sigma > 0.0) {
        return Err(Error::domain("rho1, rho2 and sigma must be positive"));
    }
    let axis = |r: f64| gauss_legendre_on(r * sigma, r * (sigma + 1.0), r.ceil() as usize, 10);
    let (xs, wx) = axis(rho1)?;
    let (ys, wy) = axis(rho2)?;
    let rows: Vec<f64> = xs
        .par_iter()
        .zip(&wx)
        .map(|(&x1, &w1)| {
            let mut s = CompensatedSum::new();
            for (&y1, &v1) in ys.iter().zip(&wy) {
                for (&x2, &w2) in xs.iter().zip(&wx) {
                    for (&y2, &v2) in ys.iter().zip(&wy) {
                        let vg = gaussian_stft_of_one([x1, y1], [x2, y2]).norm();
                        let c = vg / m.eval(&[x1, y1, x2, y2])?;
                        s.add(Complex64::new(c.powf(p) * w1 * v1 * w2 * v2, 0.0));
                    }
                }
            }
            Ok(s.value().re)
        })
        .collect::<Result<_>>()?;
    let total: CompensatedSum = rows.into_iter().map(|r| Complex64::new(r, 0.0)).collect();
    Ok(BoxNormCheck { lhs: total.value().re.powf(1.0 / p), rhs: (rho1 * rho2).powf(2.0 / p) })
}
