//! Modulation, time-frequency shifts, the windowed transform
//! `W_g f(x, xi) = int f(s) conj(g_{x,xi}(-s)) A(s) ds`, its inverse and the
//! Gaussian kernel `E_t`.
//!
//! Modulation is `M_xi g = H^{-1} u_xi` with `u_xi = sqrt(tau_xi |Hg|^2)`,
//! the translation acting on the spectral variable through the same kernel
//! measure `K(xi, lambda, z) A(z) dz`. Since `H(tau_x h) = G_lambda(x) Hh`,
//! every shifted window has the spectral form
//! `g_{x,xi}(y) = int G_lambda(x) u_xi(lambda) G_lambda(y) d sigma(lambda)`,
//! which turns the transform and its inverse into sums over the lambda rule:
//!
//! - `W_g f(x, xi) = int G_lambda(x) u_xi(-lambda) Hf(lambda) d sigma`
//! - `W_g^{-1} F(s) = |g|^{-2} int G_lambda(-s) int u_xi(lambda) int F(x, xi) G_lambda(x) A(x) dx d|sigma|(xi) d sigma(lambda)`
//!
//! [`tf_shift`](WindowedPlan::tf_shift) keeps the direct kernel route
//! `tau_x (M_xi g)(y)` and serves as a cross-check of the spectral form.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{weight_b, gamma_alpha_plus_one};
use crate::output::{Header, Table};
use crate::params::JCParams;
use crate::quadrature::{build_rule, CompensatedSum, QuadratureRule, Scheme};
use crate::sampled::{check_grid, interpolate, MeasureTag, SampledFunction1D};
use crate::specfun::opdam_g;
use crate::transform::{check_spectral_grid, eigen_table, TransformPlan};
use crate::translation::{translate, TranslationRules};

/// Values of `tau_xi |Hg|^2` in `[-NEGATIVE_CLAMP, 0)` are treated as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

/// The default window `exp(-x^2)`.
pub fn default_window(x: f64) -> Result<Complex64> {
    Ok(Complex64::new((-x * x).exp(), 0.0))
}

/// Samples of `W_g f` on a tensor grid, row-major in `x`. The `xi` grid is
/// symmetric about 0 and avoids 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeFreqFunction {
    pub x_grid: Vec<f64>,
    pub xi_grid: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl TimeFreqFunction {
    pub fn new(x_grid: Vec<f64>, xi_grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        check_grid(&x_grid)?;
        check_spectral_grid(&xi_grid)?;
        if values.len() != x_grid.len() * xi_grid.len() {
            return Err(Error::domain("value matrix does not match the grids"));
        }
        Ok(Self { x_grid, xi_grid, values })
    }

    /// Sample a closed-form function of `(x, xi)`.
    pub fn from_fn<F>(x_grid: Vec<f64>, xi_grid: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        check_grid(&x_grid)?;
        check_spectral_grid(&xi_grid)?;
        let values = x_grid
            .par_iter()
            .map(|&x| xi_grid.iter().map(|&xi| f(x, xi)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(Self { x_grid, xi_grid, values })
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.xi_grid.len() + j]
    }

    /// Bicubic Lagrange interpolation; zero outside the grid.
    pub fn at(&self, x: f64, xi: f64) -> Complex64 {
        let nxi = self.xi_grid.len();
        let column: Vec<Complex64> = (0..self.x_grid.len())
            .map(|i| interpolate(&self.xi_grid, &self.values[i * nxi..(i + 1) * nxi], xi).unwrap_or_default())
            .collect();
        interpolate(&self.x_grid, &column, x).unwrap_or_default()
    }

    pub fn table(&self) -> Table {
        let mut rows = Vec::with_capacity(self.values.len());
        for (i, x) in self.x_grid.iter().enumerate() {
            for (j, xi) in self.xi_grid.iter().enumerate() {
                let v = self.get(i, j);
                rows.push(vec![*x, *xi, v.re, v.im]);
            }
        }
        Table::new(&["x", "xi", "re", "im"], rows)
    }

    pub fn to_csv(&self, header: &Header) -> String {
        self.table().to_csv(header)
    }
}

/// Quadrature settings for the windowed pipeline.
#[derive(Debug, Clone)]
pub struct WindowedRules {
    pub x: QuadratureRule,
    pub lambda: QuadratureRule,
    pub xi: QuadratureRule,
    pub translation: TranslationRules,
    /// Spacing of the interpolation table for `|Hg|^2`.
    pub table_step: f64,
}

impl WindowedRules {
    /// Coarse grids sized for a single core: x radius 8, lambda radius 12,
    /// xi radius 14.
    pub fn coarse() -> Self {
        Self::with_density(8)
    }

    /// The coarse radii with `ppu` nodes per unit in x and lambda and half
    /// as many in xi.
    pub fn with_density(ppu: usize) -> Self {
        Self {
            x: build_rule(8.0, ppu, Scheme::GaussLegendreComposite).expect("valid"),
            lambda: build_rule(12.0, ppu, Scheme::GaussLegendreComposite).expect("valid"),
            xi: build_rule(14.0, (ppu / 2).max(4), Scheme::GaussLegendreComposite).expect("valid"),
            translation: TranslationRules::with_steps(0.25, 0.25),
            table_step: 0.02,
        }
    }

    /// Replace the x rule by one of radius `radius`, same nodes per unit.
    pub fn with_x_radius(mut self, radius: f64) -> Result<Self> {
        let panels = (2.0 * self.x.truncation_radius).ceil() as usize;
        let ppu = self.x.len() / panels.max(1);
        self.x = build_rule(radius, ppu.max(4), self.x.scheme)?;
        Ok(self)
    }

    /// Rules whose x radius covers `exp(-t x^2 + rho |x|)`, the integrand
    /// envelope of the Gaussian symbol against `G_lambda A`.
    pub fn for_gaussian(p: &JCParams, t: f64) -> Result<Self> {
        Self::coarse().with_x_radius(gaussian_x_radius(p, t))
    }
}

/// Radius beyond which `exp(-t x^2 + rho |x|)` is below `e^{-36}`.
pub fn gaussian_x_radius(p: &JCParams, t: f64) -> f64 {
    let rho = p.rho();
    ((rho + (rho * rho + 144.0 * t).sqrt()) / (2.0 * t)).max(8.0).ceil()
}

/// A window with everything the windowed transform needs precomputed.
pub struct WindowedPlan {
    pub base: TransformPlan,
    pub rules: WindowedRules,
    window: Vec<Complex64>,
    window_norm_sqr: f64,
    hg2_grid: Vec<f64>,
    hg2: Vec<Complex64>,
    /// `W_j |sigma|'(xi_j)` on the xi rule.
    xi_abs: Vec<f64>,
    /// `u_{xi_j}(lambda_k)`, row-major in `j`.
    u_grid: OnceLock<Result<Vec<f64>>>,
    /// Rows of `u_xi` already computed for arbitrary `xi`, keyed by bits.
    u_rows: Mutex<HashMap<u64, Arc<Vec<f64>>>>,
}

impl std::fmt::Debug for WindowedPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WindowedPlan")
            .field("params", &self.base.params)
            .field("nx", &self.base.nx())
            .field("nl", &self.base.nl())
            .field("nxi", &self.rules.xi.len())
            .field("window_norm_sqr", &self.window_norm_sqr)
            .finish()
    }
}

impl WindowedPlan {
    pub fn new<W>(p: &JCParams, window: W, rules: WindowedRules) -> Result<Self>
    where
        W: Fn(f64) -> Result<Complex64> + Sync,
    {
        let base = TransformPlan::new(p, &rules.x, &rules.lambda)?;
        let samples = base.sample(&window)?;
        let window_norm_sqr = base.l2a_norm_sqr(&samples)?;
        if !(window_norm_sqr > 0.0) {
            return Err(Error::DegenerateParameter("window has zero L2(A) norm".into()));
        }
        // |Hg|^2 on a uniform table wide enough for every spectral shell
        let reach = rules.lambda.truncation_radius + rules.xi.truncation_radius.max(rules.lambda.truncation_radius);
        let n = (reach / rules.table_step).ceil() as usize;
        let hg2_grid: Vec<f64> = (-(n as i64)..=n as i64).map(|k| k as f64 * rules.table_step).collect();
        let wa_g: Vec<Complex64> = samples.iter().zip(&base.wa).map(|(g, w)| g * *w).collect();
        let nodes = &base.rule_x.nodes;
        let hg2 = hg2_grid
            .par_iter()
            .map(|&z| {
                let lam = Complex64::new(z, 0.0);
                let mut s = CompensatedSum::new();
                for (x, v) in nodes.iter().zip(&wa_g) {
                    s.add(v * opdam_g(p, lam, -x)?);
                }
                Ok(Complex64::new(s.value().norm_sqr(), 0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        let xi_abs = rules
            .xi
            .iter()
            .map(|(xi, w)| Ok(w * crate::measures::plancherel_density(p, xi, crate::measures::DENSITY_EPS)?.abs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { base, rules, window: samples, window_norm_sqr, hg2_grid, hg2, xi_abs, u_grid: OnceLock::new(), u_rows: Mutex::default() })
    }

    /// Default window `exp(-x^2)` on coarse rules.
    pub fn default_for(p: &JCParams) -> Result<Self> {
        Self::new(p, default_window, WindowedRules::coarse())
    }

    pub fn params(&self) -> &JCParams {
        &self.base.params
    }

    /// `||g||^2` in `L^2(A)`.
    pub fn window_norm_sqr(&self) -> f64 {
        self.window_norm_sqr
    }

    /// Window samples on the x nodes.
    pub fn window_samples(&self) -> &[Complex64] {
        &self.window
    }

    /// `|Hg(z)|^2`, interpolated from the table; zero beyond it.
    pub fn hg_sq(&self, z: f64) -> f64 {
        interpolate(&self.hg2_grid, &self.hg2, z).map(|v| v.re).unwrap_or(0.0)
    }

    /// `tau_xi |Hg|^2 (lambda)`.
    pub fn translated_spectrum(&self, xi: f64, lambda: f64) -> Result<f64> {
        Ok(translate(
            self.params(),
            |z| Ok(Complex64::new(self.hg_sq(z), 0.0)),
            xi,
            lambda,
            &self.rules.translation,
        )?
        .re)
    }

    /// `u_xi(lambda) = sqrt(tau_xi |Hg|^2 (lambda))`.
    pub fn u(&self, xi: f64, lambda: f64) -> Result<f64> {
        let v = self.translated_spectrum(xi, lambda)?;
        if v >= 0.0 {
            Ok(v.sqrt())
        } else if v >= -NEGATIVE_CLAMP {
            Ok(0.0)
        } else {
            Err(Error::Consistency(format!(
                "tau_xi |Hg|^2 = {v:e} < 0 at xi = {xi}, lambda = {lambda}"
            )))
        }
    }

    /// `u_xi` on the lambda nodes. Rows are cached per `xi`.
    pub fn u_row(&self, xi: f64) -> Result<Arc<Vec<f64>>> {
        let key = xi.to_bits();
        if let Some(row) = self.u_rows.lock().expect("poisoned").get(&key) {
            return Ok(row.clone());
        }
        let row: Vec<f64> = self.base.rule_lambda.nodes.par_iter().map(|&l| self.u(xi, l)).collect::<Result<_>>()?;
        let row = Arc::new(row);
        self.u_rows.lock().expect("poisoned").insert(key, row.clone());
        Ok(row)
    }

    /// `u_{xi_j}(lambda_k)` on the xi rule times the lambda rule (computed once).
    pub fn u_grid(&self) -> Result<&[f64]> {
        let res = self.u_grid.get_or_init(|| {
            let nl = self.base.nl();
            let xis = &self.rules.xi.nodes;
            (0..xis.len() * nl)
                .into_par_iter()
                .map(|idx| self.u(xis[idx / nl], self.base.rule_lambda.nodes[idx % nl]))
                .collect()
        });
        match res {
            Ok(v) => Ok(v.as_slice()),
            Err(e) => Err(e.clone()),
        }
    }

    /// `M_xi g` on `x_grid`.
    pub fn modulation(&self, xi: f64, x_grid: &[f64]) -> Result<SampledFunction1D> {
        check_grid(x_grid)?;
        let u: Vec<Complex64> = self.u_row(xi)?.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        let values = self.base.inverse_at(&u, x_grid)?;
        SampledFunction1D::new(x_grid.to_vec(), values, MeasureTag::WeightA)
    }

    /// `||M_xi g||^2` in `L^2(A)` on the x rule.
    pub fn modulation_norm_sqr(&self, xi: f64) -> Result<f64> {
        let u: Vec<Complex64> = self.u_row(xi)?.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        self.base.l2a_norm_sqr(&self.base.inverse_on_nodes(&u)?)
    }

    /// `g_{x,xi}(y) = tau_x (M_xi g)(y)` on `y_grid` through the translation
    /// kernel, with `M_xi g` evaluated pointwise.
    pub fn tf_shift(&self, x: f64, xi: f64, y_grid: &[f64]) -> Result<SampledFunction1D> {
        check_grid(y_grid)?;
        let p = *self.params();
        let u = self.u_row(xi)?;
        let lambdas = &self.base.rule_lambda.nodes;
        let wsigma = &self.base.wsigma;
        let modulated = |z: f64| -> Result<Complex64> {
            let mut s = CompensatedSum::new();
            for (k, &l) in lambdas.iter().enumerate() {
                if u[k] != 0.0 {
                    s.add(opdam_g(&p, Complex64::new(l, 0.0), z)? * wsigma[k] * u[k]);
                }
            }
            Ok(s.value())
        };
        let values = y_grid
            .par_iter()
            .map(|&y| translate(&p, modulated, x, y, &self.rules.translation))
            .collect::<Result<Vec<_>>>()?;
        SampledFunction1D::new(y_grid.to_vec(), values, MeasureTag::WeightA)
    }

    /// `g_{x,xi}(y)` through the spectral form.
    pub fn tf_shift_spectral(&self, x: f64, xi: f64, y_grid: &[f64]) -> Result<SampledFunction1D> {
        check_grid(y_grid)?;
        let u = self.u_row(xi)?;
        let p = self.params();
        let coef: Vec<Complex64> = self
            .base
            .rule_lambda
            .nodes
            .iter()
            .enumerate()
            .map(|(k, &l)| Ok(opdam_g(p, Complex64::new(l, 0.0), x)? * u[k]))
            .collect::<Result<_>>()?;
        let values = self.base.inverse_at(&coef, y_grid)?;
        SampledFunction1D::new(y_grid.to_vec(), values, MeasureTag::WeightA)
    }

    /// `W_g f` on `x_grid` times `xi_grid` from samples of `f` on the x nodes.
    pub fn transform_samples(&self, f: &[Complex64], x_grid: &[f64], xi_grid: &[f64]) -> Result<TimeFreqFunction> {
        check_grid(x_grid)?;
        check_spectral_grid(xi_grid)?;
        let hf = self.base.forward(f)?;
        if hf.iter().all(|v| *v == Complex64::default()) {
            let zeros = vec![Complex64::default(); x_grid.len() * xi_grid.len()];
            return TimeFreqFunction::new(x_grid.to_vec(), xi_grid.to_vec(), zeros);
        }
        let nl = self.base.nl();
        let gx = eigen_table(self.params(), &self.base.rule_lambda.nodes, x_grid)?;
        let nx = x_grid.len();
        let mut values = vec![Complex64::default(); nx * xi_grid.len()];
        for (j, &xi) in xi_grid.iter().enumerate() {
            let u = self.u_row(xi)?;
            // u_xi(-lambda_k) Hf(lambda_k) W_k sigma_k
            let c: Vec<Complex64> =
                (0..nl).map(|k| hf[k] * self.base.wsigma[k] * u[self.base.mirror_lambda(k)]).collect();
            for i in 0..nx {
                let mut s = CompensatedSum::new();
                for k in 0..nl {
                    s.add(c[k] * gx[k * nx + i]);
                }
                values[i * xi_grid.len() + j] = s.value();
            }
        }
        TimeFreqFunction::new(x_grid.to_vec(), xi_grid.to_vec(), values)
    }

    /// `W_g f` for a callable `f`.
    pub fn transform<F>(&self, f: F, x_grid: &[f64], xi_grid: &[f64]) -> Result<TimeFreqFunction>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        self.transform_samples(&self.base.sample(f)?, x_grid, xi_grid)
    }

    /// `W_g f` on the x rule times the xi rule, row-major in `x`.
    fn transform_on_rules(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let hf = self.base.forward(f)?;
        let (nx, nl, nxi) = (self.base.nx(), self.base.nl(), self.rules.xi.len());
        let u = self.u_grid()?;
        let cols: Vec<Vec<Complex64>> = (0..nxi)
            .into_par_iter()
            .map(|j| {
                let c: Vec<Complex64> = (0..nl)
                    .map(|k| hf[k] * self.base.wsigma[k] * u[j * nl + self.base.mirror_lambda(k)])
                    .collect();
                (0..nx)
                    .map(|i| {
                        let mut s = CompensatedSum::new();
                        for k in 0..nl {
                            s.add(c[k] * self.base.g(k, i));
                        }
                        s.value()
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![Complex64::default(); nx * nxi];
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                out[i * nxi + j] = v;
            }
        }
        Ok(out)
    }

    /// Both sides of `||W_g f||^2 = ||f||^2 ||g||^2` on the plan's rules,
    /// with `A(x) dx d|sigma|(xi)` on the left.
    pub fn plancherel<F>(&self, f: F) -> Result<WindowedPlancherel>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        let fs = self.base.sample(f)?;
        let w = self.transform_on_rules(&fs)?;
        let nxi = self.rules.xi.len();
        let mut s = CompensatedSum::new();
        for i in 0..self.base.nx() {
            for j in 0..nxi {
                s.add(Complex64::new(w[i * nxi + j].norm_sqr() * self.base.wa[i] * self.xi_abs[j], 0.0));
            }
        }
        let f_norm_sqr = self.base.l2a_norm_sqr(&fs)?;
        Ok(WindowedPlancherel { lhs: s.value().re, rhs: f_norm_sqr * self.window_norm_sqr })
    }

    /// Spectral coefficients `c` with `W_g^{-1} F(s) = int c(lambda) G_lambda(-s) d sigma`,
    /// integrating `F` on the x rule times the xi rule.
    fn inverse_spectral<F>(&self, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        let (nx, nl, nxi) = (self.base.nx(), self.base.nl(), self.rules.xi.len());
        let u = self.u_grid()?;
        let xs = &self.base.rule_x.nodes;
        let xis = &self.rules.xi.nodes;
        let samples: Vec<Complex64> = (0..nx * nxi)
            .into_par_iter()
            .map(|idx| f(xs[idx / nxi], xis[idx % nxi]))
            .collect::<Result<_>>()?;
        // c_k = |g|^{-2} sum_j u_j(lambda_k) |sigma|_j sum_i F_ij G_k(x_i) A_i w_i
        let inv = 1.0 / self.window_norm_sqr;
        (0..nl)
            .into_par_iter()
            .map(|k| {
                let mut outer = CompensatedSum::new();
                for j in 0..nxi {
                    let uj = u[j * nl + k];
                    if uj == 0.0 {
                        continue;
                    }
                    let mut inner = CompensatedSum::new();
                    for i in 0..nx {
                        inner.add(samples[i * nxi + j] * self.base.g(k, i) * self.base.wa[i]);
                    }
                    outer.add(inner.value() * (uj * self.xi_abs[j]));
                }
                Ok(outer.value() * inv)
            })
            .collect()
    }

    /// `W_g^{-1} F` on `s_grid` for a callable symbol `F(x, xi)`.
    pub fn inverse_fn<F>(&self, f: F, s_grid: &[f64]) -> Result<SampledFunction1D>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        check_grid(s_grid)?;
        let coef = self.inverse_spectral(f)?;
        let neg: Vec<f64> = s_grid.iter().map(|s| -s).collect();
        let values = self.base.inverse_at(&coef, &neg)?;
        SampledFunction1D::new(s_grid.to_vec(), values, MeasureTag::WeightA)
    }

    /// `W_g^{-1} F` on the x nodes of the plan.
    pub fn inverse_fn_on_nodes<F>(&self, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64, f64) -> Result<Complex64> + Sync,
    {
        let coef = self.inverse_spectral(f)?;
        let nx = self.base.nx();
        let nl = self.base.nl();
        Ok((0..nx)
            .into_par_iter()
            .map(|i| {
                let mut s = CompensatedSum::new();
                for k in 0..nl {
                    s.add(coef[k] * self.base.wsigma[k] * self.base.g_neg(k, i));
                }
                s.value()
            })
            .collect())
    }

    /// `W_g^{-1} F` for sampled `F` (interpolated onto the rules).
    pub fn inverse(&self, f: &TimeFreqFunction, s_grid: &[f64]) -> Result<SampledFunction1D> {
        self.inverse_fn(|x, xi| Ok(f.at(x, xi)), s_grid)
    }

    /// `E_t = W_g^{-1}(exp(-t(lambda^2 + mu^2)))` on `s_grid`.
    pub fn gaussian_kernel(&self, t: f64, s_grid: &[f64]) -> Result<SampledFunction1D> {
        check_t(t)?;
        self.inverse_fn(gaussian_symbol(t), s_grid)
    }

    /// `E_t` on the x nodes of the plan.
    pub fn gaussian_kernel_on_nodes(&self, t: f64) -> Result<Vec<Complex64>> {
        check_t(t)?;
        self.inverse_fn_on_nodes(gaussian_symbol(t))
    }

    /// Largest `|W_g E_t - exp(-t(lambda^2+mu^2))| / exp(-t(lambda^2+mu^2))`
    /// on the grid.
    pub fn gaussian_identity_residual(&self, t: f64, x_grid: &[f64], xi_grid: &[f64]) -> Result<GaussianIdentityReport> {
        let et = self.gaussian_kernel_on_nodes(t)?;
        let w = self.transform_samples(&et, x_grid, xi_grid)?;
        let mut sup = 0.0f64;
        for (i, x) in x_grid.iter().enumerate() {
            for (j, xi) in xi_grid.iter().enumerate() {
                let target = (-t * (x * x + xi * xi)).exp();
                sup = sup.max((w.get(i, j) - target).norm() / target);
            }
        }
        Ok(GaussianIdentityReport { t, sup_relative_residual: sup, values: w })
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn gaussian_symbol(t: f64) -> impl Fn(f64, f64) -> Result<Complex64> + Sync {
    move |x, xi| Ok(Complex64::new((-t * (x * x + xi * xi)).exp(), 0.0))
}

/// Both sides of the windowed Plancherel identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowedPlancherel {
    pub lhs: f64,
    pub rhs: f64,
}

impl WindowedPlancherel {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianIdentityReport {
    pub t: f64,
    pub sup_relative_residual: f64,
    pub values: TimeFreqFunction,
}

/// Fitted constants of the two-sided Gaussian bound on `E_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub t: f64,
    pub mu1_hat: f64,
    pub mu2_hat: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub grid: Vec<f64>,
}

/// `ratio(x) = E_t(x) sqrt(B(x)) e^{x^2/4t} 2^{2 alpha+1} Gamma(alpha+1) t^{alpha+1}`
/// over the samples, with `mu_i = ln(ratio extrema) / t`.
pub fn sandwich_check(p: &JCParams, et: &SampledFunction1D, t: f64) -> Result<SandwichReport> {
    check_t(t)?;
    if et.is_empty() {
        return Err(Error::domain("no samples"));
    }
    let alpha = p.alpha();
    let ln_c = (2.0 * alpha + 1.0) * std::f64::consts::LN_2 + gamma_alpha_plus_one(p).ln() + (alpha + 1.0) * t.ln();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, v) in et.grid.iter().zip(&et.values) {
        if !(v.re > 0.0) {
            return Err(Error::BoundViolation(format!("E_t({x}) = {v} is not positive")));
        }
        let ln_ratio = v.re.ln() + 0.5 * weight_b(p, *x)?.ln() + x * x / (4.0 * t) + ln_c;
        lo = lo.min(ln_ratio);
        hi = hi.max(ln_ratio);
    }
    Ok(SandwichReport {
        t,
        mu1_hat: lo / t,
        mu2_hat: hi / t,
        ratio_min: lo.exp(),
        ratio_max: hi.exp(),
        grid: et.grid.clone(),
    })
}
