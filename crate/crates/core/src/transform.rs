//! The Opdam-Cherednik transform
//! `Hf(lambda) = int f(x) G_lambda(-x) A(x) dx`, its inverse
//! `H^{-1}F(x) = int F(lambda) G_lambda(x) d sigma(lambda)`, the Plancherel
//! pairing and the product formula for translations.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{plancherel_density, weight_a, DENSITY_EPS};
use crate::output::{Header, Table};
use crate::params::JCParams;
use crate::quadrature::{evaluate_on, CompensatedSum, QuadratureRule};
use crate::sampled::{check_grid, interpolate, MeasureTag, SampledFunction1D};
use crate::specfun::opdam_g;
use crate::translation::{translate, TranslationRules};

/// Samples of a function of the spectral variable on a grid that is
/// symmetric about 0 and avoids 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFunction {
    pub lambda_grid: Vec<f64>,
    pub values: Vec<Complex64>,
}

pub(crate) fn check_spectral_grid(grid: &[f64]) -> Result<()> {
    check_grid(grid)?;
    if grid.contains(&0.0) {
        return Err(Error::domain("spectral grid must avoid 0"));
    }
    let n = grid.len();
    for k in 0..n / 2 {
        let (a, b) = (grid[k], grid[n - 1 - k]);
        if (a + b).abs() > 1e-12 * b.abs().max(1.0) {
            return Err(Error::domain("spectral grid must be symmetric about 0"));
        }
    }
    Ok(())
}

impl SpectralFunction {
    pub fn new(lambda_grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        check_spectral_grid(&lambda_grid)?;
        if lambda_grid.len() != values.len() {
            return Err(Error::domain("lambda grid and values differ in length"));
        }
        Ok(Self { lambda_grid, values })
    }

    /// Sample a closed-form spectral function.
    pub fn from_fn<F>(lambda_grid: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        check_spectral_grid(&lambda_grid)?;
        let values = evaluate_on(f, &lambda_grid)?;
        Ok(Self { lambda_grid, values })
    }

    /// Value at `lambda`, interpolated; zero outside the grid.
    pub fn at(&self, lambda: f64) -> Complex64 {
        interpolate(&self.lambda_grid, &self.values, lambda).unwrap_or_default()
    }

    pub fn table(&self) -> Table {
        Table::new(
            &["grid", "re", "im"],
            self.lambda_grid.iter().zip(&self.values).map(|(x, v)| vec![*x, v.re, v.im]).collect(),
        )
    }

    pub fn to_csv(&self, header: &Header) -> String {
        self.table().to_csv(header)
    }
}

fn mirror_symmetric(nodes: &[f64]) -> bool {
    let n = nodes.len();
    (0..n).all(|k| nodes[k] == -nodes[n - 1 - k])
}

/// Precomputed weights, densities and eigenfunction values for a pair of
/// rules. Every transform in the crate runs through one of these.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    pub params: JCParams,
    pub rule_x: QuadratureRule,
    pub rule_lambda: QuadratureRule,
    /// `w_i A(x_i)`.
    pub(crate) wa: Vec<f64>,
    /// `W_k * raw density(lambda_k)`.
    pub(crate) wsigma: Vec<Complex64>,
    /// `G_{lambda_k}(x_i)`, row-major in `k`.
    pub(crate) g_table: Vec<Complex64>,
    /// `G_{lambda_k}(-x_i)`; shares storage with `g_table` when the x rule
    /// is symmetric.
    g_neg_table: Option<Vec<Complex64>>,
}

impl TransformPlan {
    pub fn new(params: &JCParams, rule_x: &QuadratureRule, rule_lambda: &QuadratureRule) -> Result<Self> {
        check_spectral_grid(&rule_lambda.nodes)?;
        let wa = rule_x
            .iter()
            .map(|(x, w)| Ok(w * weight_a(params, x)?))
            .collect::<Result<Vec<_>>>()?;
        let dens = rule_lambda
            .iter()
            .map(|(l, w)| Ok((w, plancherel_density(params, l, DENSITY_EPS)?)))
            .collect::<Result<Vec<_>>>()?;
        let wsigma = dens.iter().map(|(w, d)| d.raw * *w).collect();
        let g_table = eigen_table(params, &rule_lambda.nodes, &rule_x.nodes)?;
        let g_neg_table = if mirror_symmetric(&rule_x.nodes) {
            None
        } else {
            let neg: Vec<f64> = rule_x.nodes.iter().map(|x| -x).collect();
            Some(eigen_table(params, &rule_lambda.nodes, &neg)?)
        };
        Ok(Self {
            params: *params,
            rule_x: rule_x.clone(),
            rule_lambda: rule_lambda.clone(),
            wa,
            wsigma,
            g_table,
            g_neg_table,
        })
    }

    /// Default rules: x radius 8 and lambda radius 20, 24 nodes per unit.
    pub fn default_for(params: &JCParams) -> Result<Self> {
        Self::new(params, &QuadratureRule::default_x(), &QuadratureRule::default_lambda())
    }

    pub fn nx(&self) -> usize {
        self.rule_x.len()
    }

    pub fn nl(&self) -> usize {
        self.rule_lambda.len()
    }

    pub(crate) fn g(&self, k: usize, i: usize) -> Complex64 {
        self.g_table[k * self.nx() + i]
    }

    pub(crate) fn g_neg(&self, k: usize, i: usize) -> Complex64 {
        match &self.g_neg_table {
            Some(t) => t[k * self.nx() + i],
            None => self.g_table[k * self.nx() + (self.nx() - 1 - i)],
        }
    }

    /// Index of `-lambda_k` on the (symmetric) lambda rule.
    pub(crate) fn mirror_lambda(&self, k: usize) -> usize {
        self.nl() - 1 - k
    }

    /// `Hf` on the lambda nodes from samples of `f` on the x nodes.
    pub fn forward(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_x_len(f)?;
        Ok((0..self.nl())
            .into_par_iter()
            .map(|k| {
                let mut s = CompensatedSum::new();
                for i in 0..self.nx() {
                    s.add(f[i] * self.g_neg(k, i) * self.wa[i]);
                }
                s.value()
            })
            .collect())
    }

    /// `H^{-1}F` on the x nodes from samples of `F` on the lambda nodes.
    pub fn inverse_on_nodes(&self, spec: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_lambda_len(spec)?;
        Ok((0..self.nx())
            .into_par_iter()
            .map(|i| {
                let mut s = CompensatedSum::new();
                for k in 0..self.nl() {
                    s.add(spec[k] * self.g(k, i) * self.wsigma[k]);
                }
                s.value()
            })
            .collect())
    }

    /// `H^{-1}F` at arbitrary points.
    pub fn inverse_at(&self, spec: &[Complex64], xs: &[f64]) -> Result<Vec<Complex64>> {
        self.check_lambda_len(spec)?;
        xs.par_iter()
            .map(|&x| {
                let mut s = CompensatedSum::new();
                for (k, &l) in self.rule_lambda.nodes.iter().enumerate() {
                    if spec[k] == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    s.add(spec[k] * opdam_g(&self.params, Complex64::new(l, 0.0), x)? * self.wsigma[k]);
                }
                Ok(s.value())
            })
            .collect()
    }

    /// `int |f|^2 A dx` from samples on the x nodes.
    pub fn l2a_norm_sqr(&self, f: &[Complex64]) -> Result<f64> {
        self.check_x_len(f)?;
        let mut s = CompensatedSum::new();
        for (v, wa) in f.iter().zip(&self.wa) {
            s.add(Complex64::new(v.norm_sqr() * wa, 0.0));
        }
        Ok(s.value().re)
    }

    /// Samples of `f` on the x nodes.
    pub fn sample<F>(&self, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        evaluate_on(f, &self.rule_x.nodes)
    }

    fn check_x_len(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.nx() {
            return Err(Error::domain(format!("expected {} x samples, got {}", self.nx(), f.len())));
        }
        Ok(())
    }

    fn check_lambda_len(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.nl() {
            return Err(Error::domain(format!("expected {} lambda samples, got {}", self.nl(), f.len())));
        }
        Ok(())
    }
}

/// `G_{lambda_k}(x_i)` for all pairs, row-major in `k`.
pub fn eigen_table(p: &JCParams, lambdas: &[f64], xs: &[f64]) -> Result<Vec<Complex64>> {
    let rows: Vec<Vec<Complex64>> = lambdas
        .par_iter()
        .map(|&l| xs.iter().map(|&x| opdam_g(p, Complex64::new(l, 0.0), x)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// `Hf` on `lambda_grid`, integrating with `rule_x`.
pub fn oc_transform<F>(f: F, p: &JCParams, lambda_grid: &[f64], rule_x: &QuadratureRule) -> Result<SpectralFunction>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    check_spectral_grid(lambda_grid)?;
    oc_transform_samples(&evaluate_on(f, &rule_x.nodes)?, p, lambda_grid, rule_x)
}

/// As [`oc_transform`] from samples of `f` on the nodes of `rule_x`.
pub fn oc_transform_samples(
    f: &[Complex64],
    p: &JCParams,
    lambda_grid: &[f64],
    rule_x: &QuadratureRule,
) -> Result<SpectralFunction> {
    check_spectral_grid(lambda_grid)?;
    if f.len() != rule_x.len() {
        return Err(Error::domain(format!("expected {} x samples, got {}", rule_x.len(), f.len())));
    }
    let fa: Vec<Complex64> = rule_x
        .iter()
        .zip(f)
        .map(|((x, w), v)| Ok(v * (w * weight_a(p, x)?)))
        .collect::<Result<_>>()?;
    let values = lambda_grid
        .par_iter()
        .map(|&l| {
            let lam = Complex64::new(l, 0.0);
            let mut s = CompensatedSum::new();
            for (x, v) in rule_x.nodes.iter().zip(&fa) {
                if *v != Complex64::new(0.0, 0.0) {
                    s.add(v * opdam_g(p, lam, -x)?);
                }
            }
            Ok(s.value())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralFunction { lambda_grid: lambda_grid.to_vec(), values })
}

/// `H^{-1}F` on `x_grid`, integrating against the complex density with
/// `rule_lambda`. `F` is interpolated onto the rule when the grids differ.
pub fn oc_inverse(
    spec: &SpectralFunction,
    p: &JCParams,
    x_grid: &[f64],
    rule_lambda: &QuadratureRule,
) -> Result<SampledFunction1D> {
    check_grid(x_grid)?;
    let on_rule: Vec<Complex64> = if spec.lambda_grid == rule_lambda.nodes {
        spec.values.clone()
    } else {
        rule_lambda.nodes.iter().map(|&l| spec.at(l)).collect()
    };
    let dens = rule_lambda
        .iter()
        .map(|(l, w)| Ok(plancherel_density(p, l, DENSITY_EPS)?.raw * w))
        .collect::<Result<Vec<_>>>()?;
    let values = x_grid
        .par_iter()
        .map(|&x| {
            let mut s = CompensatedSum::new();
            for ((l, v), d) in rule_lambda.nodes.iter().zip(&on_rule).zip(&dens) {
                if *v != Complex64::new(0.0, 0.0) {
                    s.add(v * d * opdam_g(p, Complex64::new(*l, 0.0), x)?);
                }
            }
            Ok(s.value())
        })
        .collect::<Result<Vec<_>>>()?;
    SampledFunction1D::new(x_grid.to_vec(), values, MeasureTag::WeightA)
}

/// Both sides of the Plancherel identity
/// `int |f|^2 A = int Hf(lambda) conj(H f_check(-lambda)) d sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlancherelCheck {
    pub lhs: f64,
    pub rhs: Complex64,
}

impl PlancherelCheck {
    /// `|lhs - Re rhs| / lhs`, or the absolute gap when `lhs = 0`.
    pub fn relative_error(&self) -> f64 {
        let d = (self.lhs - self.rhs.re).abs();
        if self.lhs > 0.0 {
            d / self.lhs
        } else {
            d
        }
    }
}

/// Plancherel check on the rules of `plan`.
pub fn plancherel_check<F>(f: F, plan: &TransformPlan) -> Result<PlancherelCheck>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let fs = plan.sample(f)?;
    plancherel_check_samples(&fs, plan)
}

/// Plancherel check from samples of `f` on the x nodes of `plan`.
pub fn plancherel_check_samples(fs: &[Complex64], plan: &TransformPlan) -> Result<PlancherelCheck> {
    let lhs = plan.l2a_norm_sqr(fs)?;
    let hf = plan.forward(fs)?;
    let check: Vec<Complex64> = match &plan.g_neg_table {
        None => fs.iter().rev().copied().collect(),
        Some(_) => {
            // f_check on a non-symmetric rule: sample by interpolation
            let grid = &plan.rule_x.nodes;
            grid.iter().map(|&x| interpolate(grid, fs, -x).unwrap_or_default()).collect()
        }
    };
    let hcheck = if check == fs { hf.clone() } else { plan.forward(&check)? };
    let mut s = CompensatedSum::new();
    for k in 0..plan.nl() {
        s.add(hf[k] * hcheck[plan.mirror_lambda(k)].conj() * plan.wsigma[k]);
    }
    Ok(PlancherelCheck { lhs, rhs: s.value() })
}

/// `|H(tau_x f)(lambda) - G_lambda(x) Hf(lambda)|` for each `lambda`.
pub fn translation_product_check<F>(
    f: F,
    x: f64,
    p: &JCParams,
    lambdas: &[f64],
    rule_x: &QuadratureRule,
    rules: &TranslationRules,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let translated: Vec<Complex64> = rule_x
        .nodes
        .par_iter()
        .map(|&y| translate(p, &f, x, y, rules))
        .collect::<Result<_>>()?;
    let fs = evaluate_on(&f, &rule_x.nodes)?;
    lambdas
        .par_iter()
        .map(|&l| {
            let lam = Complex64::new(l, 0.0);
            let mut lhs = CompensatedSum::new();
            let mut hf = CompensatedSum::new();
            for (((y, w), t), fy) in rule_x.iter().zip(&translated).zip(&fs) {
                let k = opdam_g(p, lam, -y)? * (w * weight_a(p, y)?);
                lhs.add(t * k);
                hf.add(fy * k);
            }
            Ok((lhs.value() - opdam_g(p, lam, x)? * hf.value()).norm())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_rule, Scheme};

    fn gauss(x: f64) -> Result<Complex64> {
        Ok(Complex64::new((-x * x).exp(), 0.0))
    }

    fn p() -> JCParams {
        JCParams::new(1.0, 0.5).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SpectralFunction::new(vec![-1.0, 0.0, 1.0], vec![Complex64::default(); 3]).is_err());
        assert!(SpectralFunction::new(vec![-1.0, 2.0], vec![Complex64::default(); 2]).is_err());
        assert!(SpectralFunction::new(vec![-1.0, 1.0], vec![Complex64::default(); 2]).is_ok());
    }

    #[test]
    fn zero_and_linearity() {
        let rule = QuadratureRule::default_x();
        let grid = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
        let z = oc_transform(|_| Ok(Complex64::default()), &p(), &grid, &rule).unwrap();
        assert!(z.values.iter().all(|v| *v == Complex64::default()));
        let c = Complex64::new(2.0, 1.0);
        let a = oc_transform(gauss, &p(), &grid, &rule).unwrap();
        let b = oc_transform(|x| Ok(c * gauss(x)?), &p(), &grid, &rule).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u * c - v).norm() < 1e-13 * v.norm());
        }
    }

    #[test]
    fn cross_scheme_oracle() {
        let gl = QuadratureRule::default_x();
        let ts = build_rule(10.0, 24, Scheme::TanhSinh).unwrap();
        let a = oc_transform(gauss, &p(), &[-1.0, 1.0], &gl).unwrap();
        let b = oc_transform(gauss, &p(), &[-1.0, 1.0], &ts).unwrap();
        assert!((a.values[1] - b.values[1]).norm() < 1e-6);
    }

    #[test]
    fn even_function_transform_is_real_and_even() {
        let rule = QuadratureRule::default_x();
        let a = oc_transform(gauss, &p(), &[-1.5, 1.5], &rule).unwrap();
        assert!(a.values[0].im.abs() < 1e-12 * a.values[0].re.abs());
        assert!((a.values[0] - a.values[1]).norm() < 1e-12 * a.values[0].norm());
    }

    #[test]
    fn plancherel_gaussian() {
        let plan = TransformPlan::default_for(&p()).unwrap();
        let c = plancherel_check(gauss, &plan).unwrap();
        assert!(c.relative_error() < 1e-3, "{c:?}");
        assert!(c.rhs.im.abs() < 1e-6 * c.lhs);
        let z = plancherel_check(|_| Ok(Complex64::default()), &plan).unwrap();
        assert_eq!(z.lhs, 0.0);
        assert_eq!(z.rhs, Complex64::default());
    }

    #[test]
    fn roundtrip_gaussian() {
        let plan = TransformPlan::default_for(&p()).unwrap();
        let spec = SpectralFunction::new(plan.rule_lambda.nodes.clone(), plan.forward(&plan.sample(gauss).unwrap()).unwrap())
            .unwrap();
        let xs = crate::sampled::linspace(-2.0, 2.0, 21);
        let back = oc_inverse(&spec, &p(), &xs, &plan.rule_lambda).unwrap();
        for (x, v) in xs.iter().zip(&back.values) {
            assert!((v - gauss(*x).unwrap()).norm() < 1e-3, "x={x}: {v}");
        }
    }

    #[test]
    fn translation_by_zero_leaves_transform_unchanged() {
        let q = JCParams::new(1.0, 0.25).unwrap();
        let rule = build_rule(6.0, 12, Scheme::GaussLegendreComposite).unwrap();
        let r = translation_product_check(gauss, 0.0, &q, &[0.5, 1.0], &rule, &TranslationRules::default()).unwrap();
        assert!(r.iter().all(|v| *v < 1e-12), "{r:?}");
    }
}
