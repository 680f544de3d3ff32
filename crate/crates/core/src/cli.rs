//! The `cherednik` command line. Every output starts with `# key=value`
//! lines echoing the run configuration; re-running the echoed `command`
//! reproduces the file byte for byte.
//!
//! Exit codes: 0 success, 1 failed verification or other error, 2 domain
//! error, 3 budget exceeded, 4 convergence failure.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::measures::{plancherel_density, weight_a, weight_b, DENSITY_EPS};
use crate::modspace::{mod_norm_1d_samples, mod_norm_2d_samples, Exponent, ModNormRules, WeightFunction};
use crate::output::{json_document, parse_csv, Format, Header, Table};
use crate::params::JCParams;
use crate::quadrature::{build_rule, gaussian_quarter_tail, Scheme, DEFAULT_PPU, DEFAULT_X_RADIUS};
use crate::sampled::{check_grid, interpolate, linspace};
use crate::specfun::{cherednik_apply, jacobi_phi, opdam_g, DEFAULT_FD_STEP};
use crate::transform::oc_transform_samples;
use crate::translation::{kernel_k, translate, translation_mass, TranslationRules};
use crate::ucp::{
    classify_regime, conjugate, cowling_price_certify, hardy_extremal_check, morgan_threshold, Theorem, UcpRules,
};
use crate::windowed::{default_window, gaussian_x_radius, WindowedPlan, WindowedRules};

/// Default output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "CHEREDNIK_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "cherednik", version, about = "Jacobi-Cherednik harmonic analysis: special functions, transforms, norms and uncertainty diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// alpha (default 1). For `ucp morgan` this is the exponent alpha > 2.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// beta (default 0.5). For `ucp morgan`, the conjugate exponent (default alpha/(alpha-1)).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Truncation radius of the primary rule of the command.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Nodes per unit length of the primary rule.
    #[arg(long, global = true)]
    pub ppu: Option<usize>,
    /// Quadrature scheme: gl or tanh-sinh.
    #[arg(long, global = true, default_value = "gl")]
    pub scheme: Scheme,
    /// Output file; defaults to $CHEREDNIK_OUT_DIR/<command>.<format>, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    /// Seed for randomized sampling (verify).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate G, phi, A, B, the Plancherel density or the translation kernel.
    Eval(EvalArgs),
    /// Opdam-Cherednik transform of a builtin or sampled function.
    Transform(TransformArgs),
    /// Windowed transform with the window exp(-x^2).
    Wtransform(WtransformArgs),
    /// Translation kernel K(x, y, z) along z, with the total mass.
    Kernel(KernelArgs),
    /// Truncated modulation-space norm.
    Norm(NormArgs),
    /// Uncertainty-principle harness.
    #[command(subcommand)]
    Ucp(UcpCommand),
    /// Randomized property checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lower")]
pub enum Subject {
    #[value(alias = "G")]
    G,
    Phi,
    #[value(alias = "A")]
    A,
    #[value(alias = "B")]
    B,
    Density,
    Kernel,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum, ignore_case = true)]
    pub subject: Subject,
    /// Real parts of lambda: a list `a,b,c` or a range `start:end:count`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub lambda: Points,
    /// Imaginary part of lambda.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda_im: f64,
    #[arg(long = "x", default_value = "0", allow_hyphen_values = true)]
    pub x: Points,
    /// Second kernel argument.
    #[arg(long = "y", default_value_t = 1.0, allow_negative_numbers = true)]
    pub y: f64,
    /// Third kernel argument.
    #[arg(long = "z", default_value = "0.5", allow_hyphen_values = true)]
    pub z: Points,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Builtin: zero, gaussian[:s], x-gaussian, shifted[:c], bump, E_t[:t].
    #[arg(long = "f", default_value = "gaussian")]
    pub f: Builtin,
    /// Parameter t of E_t.
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// CSV samples (columns grid/x, re, im) used instead of the builtin.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Spectral points (symmetric about 0, avoiding 0).
    #[arg(long, default_value = "-4:4:16", allow_hyphen_values = true)]
    pub lambda: Points,
}

#[derive(Debug, Args)]
pub struct WtransformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long = "x", default_value = "-1:1:5", allow_hyphen_values = true)]
    pub x: Points,
    /// Frequencies (symmetric about 0, avoiding 0).
    #[arg(long, default_value = "-1,-0.6,-0.2,0.2,0.6,1", allow_hyphen_values = true)]
    pub xi: Points,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long = "x", allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long = "y", allow_negative_numbers = true)]
    pub y: f64,
    #[arg(long = "z", default_value = "-3:3:61", allow_hyphen_values = true)]
    pub z: Points,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long = "p", default_value = "2")]
    pub p: Exponent,
    #[arg(long = "q", default_value = "2")]
    pub q: Exponent,
    /// 1: f on R; 2: f(t1) f(t2) on R^2.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub dim: u8,
    /// Constant weight m >= 1.
    #[arg(long, default_value_t = 1.0)]
    pub weight: f64,
    /// Evaluation panels per axis (default 12 in one variable, 6 in two).
    #[arg(long)]
    pub panels: Option<usize>,
    /// Gauss-Legendre order per panel (default 8 in one variable, 6 in two).
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum UcpCommand {
    /// Classify (a, b); with --f also certify the hypotheses by radius doubling.
    CowlingPrice(CowlingPriceArgs),
    /// Morgan threshold; the exponent is --alpha.
    Morgan(MorganArgs),
    /// Compare W_g E_{1/(4a)} with exp(-(lambda^2+mu^2)/(4a)).
    Hardy(HardyArgs),
}

#[derive(Debug, Args)]
pub struct CowlingPriceArgs {
    #[arg(long = "a")]
    pub a: f64,
    #[arg(long = "b")]
    pub b: f64,
    /// Builtin to certify (omit to classify only).
    #[arg(long = "f")]
    pub f: Option<Builtin>,
    #[arg(long = "t")]
    pub t: Option<f64>,
    #[arg(long = "p", default_value = "2")]
    pub p: Exponent,
    #[arg(long = "q", default_value = "2")]
    pub q: Exponent,
}

#[derive(Debug, Args)]
pub struct MorganArgs {
    #[arg(long = "a")]
    pub a: f64,
    #[arg(long = "b")]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct HardyArgs {
    #[arg(long = "a")]
    pub a: f64,
    #[arg(long = "x", default_value = "-1:1:5", allow_hyphen_values = true)]
    pub x: Points,
    #[arg(long, default_value = "-1,-0.6,-0.2,0.2,0.6,1", allow_hyphen_values = true)]
    pub xi: Points,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random cases per property.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
}

/// A list `a,b,c` or an inclusive range `start:end:count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Points(pub Vec<f64>);

impl FromStr for Points {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::domain(format!("`{v}` is not a number")));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [a, b, n] => {
                let n: usize = n.trim().parse().map_err(|_| Error::domain(format!("`{n}` is not a count")))?;
                if n == 0 {
                    return Err(Error::domain("a range needs at least one point"));
                }
                Ok(Points(linspace(num(a)?, num(b)?, n)))
            }
            [list] => Ok(Points(list.split(',').map(num).collect::<Result<_>>()?)),
            _ => Err(Error::domain(format!("`{s}` is neither a list nor start:end:count"))),
        }
    }
}

/// Named input functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Zero,
    /// `exp(-s x^2)`.
    Gaussian(f64),
    /// `x exp(-x^2)`.
    XGaussian,
    /// `exp(-(x - c)^2)`.
    Shifted(f64),
    /// `exp(-1/(1 - x^2))` on `|x| < 1`.
    Bump,
    /// The Gaussian kernel `E_t` of the window `exp(-x^2)`.
    HeatKernel(Option<f64>),
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a.parse::<f64>().map_err(|_| Error::domain(format!("bad parameter in `{s}`")))?)),
            None => (s, None),
        };
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("zero", None) => Ok(Builtin::Zero),
            ("gaussian", s) => Ok(Builtin::Gaussian(s.unwrap_or(1.0))),
            ("x-gaussian", None) => Ok(Builtin::XGaussian),
            ("shifted", c) => Ok(Builtin::Shifted(c.unwrap_or(0.5))),
            ("bump", None) => Ok(Builtin::Bump),
            ("e_t" | "et", t) => Ok(Builtin::HeatKernel(t)),
            _ => Err(Error::domain(format!("unknown function `{s}`"))),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Zero => write!(f, "zero"),
            Builtin::Gaussian(s) => write!(f, "gaussian:{s}"),
            Builtin::XGaussian => write!(f, "x-gaussian"),
            Builtin::Shifted(c) => write!(f, "shifted:{c}"),
            Builtin::Bump => write!(f, "bump"),
            Builtin::HeatKernel(Some(t)) => write!(f, "E_t:{t}"),
            Builtin::HeatKernel(None) => write!(f, "E_t"),
        }
    }
}

impl Builtin {
    /// Pointwise value; `None` for `E_t`, which needs a plan.
    pub fn eval(&self, x: f64) -> Option<Complex64> {
        let r = match *self {
            Builtin::Zero => 0.0,
            Builtin::Gaussian(s) => (-s * x * x).exp(),
            Builtin::XGaussian => x * (-x * x).exp(),
            Builtin::Shifted(c) => (-(x - c) * (x - c)).exp(),
            Builtin::Bump if x.abs() < 1.0 => (-1.0 / (1.0 - x * x)).exp(),
            Builtin::Bump => 0.0,
            Builtin::HeatKernel(_) => return None,
        };
        Some(Complex64::new(r, 0.0))
    }

    fn heat_t(&self, t: Option<f64>) -> Result<Option<f64>> {
        match (self, t) {
            (Builtin::HeatKernel(Some(a)), Some(b)) if a != &b => {
                Err(Error::domain(format!("E_t given t = {a} and --t {b}")))
            }
            (Builtin::HeatKernel(Some(a)), _) => Ok(Some(*a)),
            (Builtin::HeatKernel(None), Some(b)) => Ok(Some(b)),
            (Builtin::HeatKernel(None), None) => Err(Error::domain("E_t needs --t")),
            _ => Ok(None),
        }
    }
}

/// Batch evaluator on an increasing grid.
type Sampler = Box<dyn Fn(&[f64]) -> Result<Vec<Complex64>> + Send + Sync>;

fn csv_sampler(path: &Path) -> Result<Sampler> {
    let (_, table) = parse_csv(&fs::read_to_string(path)?)?;
    let col = |names: &[&str]| {
        table
            .columns
            .iter()
            .position(|c| names.contains(&c.as_str()))
            .ok_or_else(|| Error::domain(format!("{} lacks a column among {names:?}", path.display())))
    };
    let (ig, ir) = (col(&["grid", "x"])?, col(&["re", "value"])?);
    let ii = col(&["im"]).ok();
    let grid: Vec<f64> = table.rows.iter().map(|r| r[ig]).collect();
    let values: Vec<Complex64> =
        table.rows.iter().map(|r| Complex64::new(r[ir], ii.map(|i| r[i]).unwrap_or(0.0))).collect();
    check_grid(&grid)?;
    Ok(Box::new(move |xs| Ok(xs.iter().map(|&x| interpolate(&grid, &values, x).unwrap_or_default()).collect())))
}

fn sampler(f: Builtin, t: Option<f64>, plan: Option<Arc<WindowedPlan>>) -> Result<Sampler> {
    match (f.heat_t(t)?, plan) {
        (Some(t), Some(plan)) => Ok(Box::new(move |xs| Ok(plan.gaussian_kernel(t, xs)?.values))),
        (Some(_), None) => Err(Error::domain("E_t needs a windowed plan")),
        (None, _) => Ok(Box::new(move |xs| Ok(xs.iter().map(|&x| f.eval(x).expect("pointwise builtin")).collect()))),
    }
}

impl ConfigArgs {
    fn params(&self) -> Result<JCParams> {
        JCParams::new(self.alpha.unwrap_or(1.0), self.beta.unwrap_or(0.5))
    }

    fn validate(&self) -> Result<()> {
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::domain(format!("--radius must be positive, got {r}")));
            }
        }
        if let Some(n) = self.ppu {
            if n < 4 {
                return Err(Error::domain(format!("--ppu must be at least 4, got {n}")));
            }
        }
        Ok(())
    }

    /// Coarse windowed rules; the x radius covers `E_t` when `t` is known.
    fn windowed_rules(&self, p: &JCParams, t: Option<f64>) -> Result<WindowedRules> {
        let mut rules = WindowedRules::with_density(self.ppu.unwrap_or(8));
        let radius = match (self.radius, t) {
            (Some(r), _) => r,
            (None, Some(t)) => gaussian_x_radius(p, t),
            (None, None) => DEFAULT_X_RADIUS,
        };
        let ppu = self.ppu.unwrap_or(8);
        rules.x = build_rule(radius, ppu, self.scheme)?;
        Ok(rules)
    }

    fn plan(&self, p: &JCParams, t: Option<f64>) -> Result<Arc<WindowedPlan>> {
        Ok(Arc::new(WindowedPlan::new(p, default_window, self.windowed_rules(p, t)?)?))
    }
}

/// Rendered output and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub name: &'static str,
    pub text: String,
    pub ok: bool,
}

fn ok(name: &'static str, text: String) -> Result<Output> {
    Ok(Output { name, text, ok: true })
}

/// Arguments echoed into the header, without `--out`.
pub fn echo_command(argv: &[String]) -> String {
    let mut out = vec!["cherednik".to_string()];
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        out.push(a.clone());
    }
    out.join(" ")
}

fn base_header(cfg: &ConfigArgs, argv: &[String]) -> Header {
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_else(|| "default".into());
    Header::new()
        .with("tool", format!("cherednik {}", env!("CARGO_PKG_VERSION")))
        .with("command", echo_command(argv))
        .with("alpha", opt(cfg.alpha))
        .with("beta", opt(cfg.beta))
        .with("radius", opt(cfg.radius))
        .with("ppu", cfg.ppu.map(|v| v.to_string()).unwrap_or_else(|| "default".into()))
        .with("scheme", cfg.scheme)
        .with("format", match cfg.format {
            Format::Csv => "csv",
            Format::Json => "json",
        })
        .with("seed", cfg.seed)
}

/// Rows of text cells; CSV as is, JSON as an array of objects.
fn render_rows(header: &Header, columns: &[&str], rows: &[Vec<String>], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut s = header.to_comment_lines();
            s.push_str(&columns.join(","));
            s.push('\n');
            for r in rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            Ok(s)
        }
        Format::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    Value::Object(
                        columns.iter().zip(r).map(|(c, v)| (c.to_string(), Value::String(v.clone()))).collect::<Map<_, _>>(),
                    )
                })
                .collect();
            json_document(header, &body)
        }
    }
}

fn render_record(header: &Header, fields: &[(&str, String)], format: Format) -> Result<String> {
    let rows: Vec<Vec<String>> = fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
    match format {
        Format::Csv => render_rows(header, &["field", "value"], &rows, format),
        Format::Json => {
            let body: Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
            json_document(header, &body)
        }
    }
}

/// Run a parsed command line. `argv` is echoed into the header.
pub fn execute(cli: &Cli, argv: &[String]) -> Result<Output> {
    let cfg = &cli.config;
    cfg.validate()?;
    let mut header = base_header(cfg, argv);
    let uses_params = !matches!(&cli.command, Command::Ucp(UcpCommand::Morgan(_)));
    if uses_params {
        header.push("params", cfg.params()?);
    }
    match &cli.command {
        Command::Eval(a) => ok("eval", cmd_eval(cfg, a, &mut header)?),
        Command::Transform(a) => ok("transform", cmd_transform(cfg, a, &mut header)?),
        Command::Wtransform(a) => ok("wtransform", cmd_wtransform(cfg, a, &mut header)?),
        Command::Kernel(a) => ok("kernel", cmd_kernel(cfg, a, &mut header)?),
        Command::Norm(a) => ok("norm", cmd_norm(cfg, a, &mut header)?),
        Command::Ucp(u) => ok("ucp", cmd_ucp(cfg, u, &mut header)?),
        Command::Verify(a) => cmd_verify(cfg, a, &mut header),
    }
}

fn cmd_eval(cfg: &ConfigArgs, a: &EvalArgs, header: &mut Header) -> Result<String> {
    let p = cfg.params()?;
    header.push("subject", format!("{:?}", a.subject).to_lowercase());
    let table = match a.subject {
        Subject::G | Subject::Phi => {
            let mut rows = Vec::new();
            for &l in &a.lambda.0 {
                let lam = Complex64::new(l, a.lambda_im);
                for &x in &a.x.0 {
                    let v = if a.subject == Subject::G { opdam_g(&p, lam, x)? } else { jacobi_phi(&p, lam, x)? };
                    rows.push(vec![x, l, a.lambda_im, v.re, v.im]);
                }
            }
            Table::new(&["x", "lambda_re", "lambda_im", "re", "im"], rows)
        }
        Subject::A | Subject::B => {
            let w = if a.subject == Subject::A { weight_a } else { weight_b };
            Table::new(&["x", "value"], a.x.0.iter().map(|&x| Ok(vec![x, w(&p, x)?])).collect::<Result<_>>()?)
        }
        Subject::Density => {
            header.push("eps", DENSITY_EPS);
            let rows = a
                .lambda
                .0
                .iter()
                .map(|&l| {
                    let d = plancherel_density(&p, l, DENSITY_EPS)?;
                    Ok(vec![l, d.raw.re, d.raw.im, d.abs])
                })
                .collect::<Result<_>>()?;
            Table::new(&["lambda", "re", "im", "abs"], rows)
        }
        Subject::Kernel => {
            let rules = TranslationRules::default();
            let mut rows = Vec::new();
            for &x in &a.x.0 {
                for &z in &a.z.0 {
                    rows.push(vec![x, a.y, z, kernel_k(&p, x, a.y, z, &rules.chi)?]);
                }
            }
            Table::new(&["x", "y", "z", "value"], rows)
        }
    };
    table.render(header, cfg.format)
}

fn cmd_transform(cfg: &ConfigArgs, a: &TransformArgs, header: &mut Header) -> Result<String> {
    let p = cfg.params()?;
    let radius = cfg.radius.unwrap_or(DEFAULT_X_RADIUS);
    let rule_x = build_rule(radius, cfg.ppu.unwrap_or(DEFAULT_PPU), cfg.scheme)?;
    let f = input_sampler(cfg, &a.input, &p)?;
    let spec = oc_transform_samples(&f(&rule_x.nodes)?, &p, &a.lambda.0, &rule_x)?;
    header.push("f", describe_input(&a.input));
    header.push("x_radius", radius);
    header.push("x_nodes", rule_x.len());
    header.push("tail_bound", gaussian_quarter_tail(radius));
    spec.table().render(header, cfg.format)
}

fn input_sampler(cfg: &ConfigArgs, input: &InputArgs, p: &JCParams) -> Result<Sampler> {
    if let Some(path) = &input.input {
        return csv_sampler(path);
    }
    let t = input.f.heat_t(input.t)?;
    let plan = match t {
        Some(t) => Some(cfg.plan(p, Some(t))?),
        None => None,
    };
    sampler(input.f, t, plan)
}

fn describe_input(input: &InputArgs) -> String {
    match &input.input {
        Some(path) => format!("file:{}", path.display()),
        None => match input.f.heat_t(input.t) {
            Ok(Some(t)) => format!("E_t:{t}"),
            _ => input.f.to_string(),
        },
    }
}

fn cmd_wtransform(cfg: &ConfigArgs, a: &WtransformArgs, header: &mut Header) -> Result<String> {
    let p = cfg.params()?;
    let t = if a.input.input.is_some() { None } else { a.input.f.heat_t(a.input.t)? };
    let plan = cfg.plan(&p, t)?;
    let samples = match t {
        // E_t is built with the same window as the transform
        Some(t) => plan.gaussian_kernel_on_nodes(t)?,
        None => input_sampler(cfg, &a.input, &p)?(&plan.base.rule_x.nodes)?,
    };
    let w = plan.transform_samples(&samples, &a.x.0, &a.xi.0)?;
    header.push("f", describe_input(&a.input));
    header.push("window", "exp(-x^2)");
    push_rule(header, "x", plan.rules.x.truncation_radius, plan.rules.x.len());
    push_rule(header, "lambda", plan.rules.lambda.truncation_radius, plan.rules.lambda.len());
    push_rule(header, "xi", plan.rules.xi.truncation_radius, plan.rules.xi.len());
    w.table().render(header, cfg.format)
}

fn push_rule(header: &mut Header, name: &str, radius: f64, nodes: usize) {
    header.push(&format!("{name}_radius"), radius);
    header.push(&format!("{name}_nodes"), nodes);
}

fn cmd_kernel(cfg: &ConfigArgs, a: &KernelArgs, header: &mut Header) -> Result<String> {
    let p = cfg.params()?;
    let rules = TranslationRules::default();
    let rows = a.z.0.iter().map(|&z| Ok(vec![z, kernel_k(&p, a.x, a.y, z, &rules.chi)?])).collect::<Result<_>>()?;
    header.push("x", a.x);
    header.push("y", a.y);
    header.push("mass", translation_mass(&p, a.x, a.y, &rules)?);
    Table::new(&["z", "k"], rows).render(header, cfg.format)
}

fn cmd_norm(cfg: &ConfigArgs, a: &NormArgs, header: &mut Header) -> Result<String> {
    let p = cfg.params()?;
    let m = WeightFunction::constant(a.weight)?;
    let base = if a.dim == 1 { ModNormRules::default_1d() } else { ModNormRules::default_2d() };
    let radius = cfg.radius.unwrap_or(base.radius);
    let t_ppu = cfg.ppu.unwrap_or_else(|| ModNormRules::t_ppu_for(radius));
    let rules = ModNormRules::new(radius, t_ppu, a.panels.unwrap_or(base.eval_panels), a.order.unwrap_or(base.eval_order))?
        .with_t_scheme(cfg.scheme)?;
    if a.dim == 2 {
        rules.check_budget()?;
    }
    let f = input_sampler(cfg, &a.input, &p)?;
    let t = &rules.t;
    let fs = f(&t.nodes)?;
    let report = if a.dim == 1 {
        let fw: Vec<Complex64> = fs.iter().zip(&t.weights).map(|(v, w)| v * w).collect();
        mod_norm_1d_samples(&fw, a.p, a.q, &m, &p, &rules)?
    } else {
        let samples: Vec<Complex64> = fs.iter().flat_map(|u| fs.iter().map(move |v| u * v)).collect();
        mod_norm_2d_samples(&samples, a.p, a.q, &m, &p, &rules)?
    };
    header.push("f", describe_input(&a.input));
    header.push("dim", a.dim);
    header.push("weight", a.weight);
    header.push("t_radius", t.truncation_radius);
    header.push("t_nodes", t.len());
    header.push("eval_nodes", rules.n_eval());
    match cfg.format {
        Format::Json => json_document(header, &report),
        Format::Csv => render_record(
            header,
            &[
                ("p", report.p.to_string()),
                ("q", report.q.to_string()),
                ("radius", report.radius.to_string()),
                ("value", report.value.to_string()),
            ],
            cfg.format,
        ),
    }
}

fn cmd_ucp(cfg: &ConfigArgs, u: &UcpCommand, header: &mut Header) -> Result<String> {
    match u {
        UcpCommand::CowlingPrice(a) => {
            let ab = a.a * a.b;
            let regime = classify_regime(Theorem::CowlingPrice, a.a, a.b);
            let cmp = if ab >= 0.25 { ">=" } else { "<" };
            let mut fields = vec![
                ("theorem", "cowling-price".to_string()),
                ("a", a.a.to_string()),
                ("b", a.b.to_string()),
                ("product_ab", ab.to_string()),
                ("comparison", format!("ab {cmp} 1/4")),
                ("regime", regime.to_string()),
            ];
            let Some(f) = a.f else {
                if !(a.a > 0.0 && a.b > 0.0) {
                    return Err(Error::domain("a and b must be positive"));
                }
                return render_record(header, &fields, cfg.format);
            };
            let p = cfg.params()?;
            let t = f.heat_t(a.t)?;
            let plan = cfg.plan(&p, t)?;
            let f = sampler(f, t, Some(plan.clone()))?;
            let one = WeightFunction::one();
            let report = cowling_price_certify(&plan, f, a.a, a.b, a.p, a.q, &one, &one, &UcpRules::coarse())?;
            header.push("f", a.f.map(|f| describe_input(&InputArgs { f, t: a.t, input: None })).unwrap_or_default());
            if cfg.format == Format::Json {
                return json_document(header, &report);
            }
            fields.extend([
                ("x_radius", report.x_growth.radius.to_string()),
                ("x_norm", report.x_norm.to_string()),
                ("x_norm_doubled", report.x_growth.doubled.to_string()),
                ("x_growing", report.growth_flags.x.to_string()),
                ("tf_radius", report.tf_growth.radius.to_string()),
                ("tf_norm", report.tf_norm.to_string()),
                ("tf_norm_doubled", report.tf_growth.doubled.to_string()),
                ("tf_growing", report.growth_flags.tf.to_string()),
            ]);
            render_record(header, &fields, cfg.format)
        }
        UcpCommand::Morgan(a) => {
            let alpha = cfg.alpha.ok_or_else(|| Error::domain("ucp morgan needs --alpha (the exponent)"))?;
            let beta = cfg.beta.unwrap_or_else(|| conjugate(alpha));
            let m = morgan_threshold(a.a, a.b, alpha, beta)?;
            let fields = [
                ("theorem", "morgan".to_string()),
                ("a", a.a.to_string()),
                ("b", a.b.to_string()),
                ("alpha_exp", alpha.to_string()),
                ("beta_exp", beta.to_string()),
                ("lhs", m.lhs.to_string()),
                ("rhs", m.rhs.to_string()),
                ("comparison", format!("lhs {} rhs", if m.vanishing { ">" } else { "<=" })),
                ("verdict", if m.vanishing { "vanishing" } else { "nonvanishing" }.to_string()),
            ];
            render_record(header, &fields, cfg.format)
        }
        UcpCommand::Hardy(a) => {
            if !(a.a > 0.0) {
                return Err(Error::domain(format!("a must be positive, got {}", a.a)));
            }
            let p = cfg.params()?;
            let plan = cfg.plan(&p, Some(0.25 / a.a))?;
            let r = hardy_extremal_check(&plan, a.a, &a.x.0, &a.xi.0)?;
            if cfg.format == Format::Json {
                return json_document(header, &r);
            }
            let fields = [
                ("theorem", "hardy".to_string()),
                ("a", r.a.to_string()),
                ("t", r.t.to_string()),
                ("regime_at_equality", r.regime_at_equality.to_string()),
                ("sup_relative_residual", r.sup_relative_residual.to_string()),
            ];
            render_record(header, &fields, cfg.format)
        }
    }
}

struct Property {
    name: &'static str,
    cases: usize,
    max_residual: f64,
    tolerance: f64,
}

impl Property {
    fn row(&self) -> Vec<String> {
        let pass = self.max_residual <= self.tolerance;
        vec![
            self.name.to_string(),
            self.cases.to_string(),
            format!("{:e}", self.max_residual),
            format!("{:e}", self.tolerance),
            if pass { "PASS" } else { "FAIL" }.to_string(),
        ]
    }
}

fn max_over<F: FnMut() -> Result<f64>>(n: usize, mut f: F) -> Result<f64> {
    let mut m = 0.0f64;
    for _ in 0..n {
        m = m.max(f()?);
    }
    Ok(m)
}

/// A triple `(x, y, z)` strictly inside the kernel support.
fn random_triple(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let x: f64 = rng.gen_range(0.2..2.0);
    let y: f64 = rng.gen_range(0.2..2.0);
    let (lo, hi) = ((x - y).abs(), x + y);
    let z = rng.gen_range(lo + 0.05 * (hi - lo)..hi - 0.05 * (hi - lo));
    (sign(rng) * x, sign(rng) * y, sign(rng) * z)
}

fn cmd_verify(cfg: &ConfigArgs, a: &VerifyArgs, header: &mut Header) -> Result<Output> {
    let p = cfg.params()?;
    let n = a.cases.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chi = TranslationRules::default().chi;
    let rel = |u: f64, v: f64| (u - v).abs() / u.abs().max(v.abs()).max(1.0);
    let mut props = Vec::new();

    let r = max_over(n, || {
        let l = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-1.0..1.0));
        Ok((opdam_g(&p, l, 0.0)? - 1.0).norm())
    })?;
    props.push(Property { name: "g_normalized_at_origin", cases: n, max_residual: r, tolerance: 1e-10 });

    let r = max_over(n.min(10), || {
        let l: f64 = rng.gen_range(0.5..4.0);
        let x: f64 = rng.gen_range(0.2..2.0);
        let lam = Complex64::new(l, 0.0);
        let tg = cherednik_apply(&p, |s| opdam_g(&p, lam, s), x, DEFAULT_FD_STEP)?;
        Ok((tg - Complex64::new(0.0, l) * opdam_g(&p, lam, x)?).norm())
    })?;
    props.push(Property { name: "eigen_equation", cases: n.min(10), max_residual: r, tolerance: 1e-6 });

    let r = max_over(n, || {
        let l: f64 = rng.gen_range(0.01..20.0);
        Ok(rel(plancherel_density(&p, l, DENSITY_EPS)?.abs, plancherel_density(&p, -l, DENSITY_EPS)?.abs))
    })?;
    props.push(Property { name: "density_even", cases: n, max_residual: r, tolerance: 1e-12 });

    let mut sym = [0.0f64; 3];
    for _ in 0..n {
        let (x, y, z) = random_triple(&mut rng);
        let k = kernel_k(&p, x, y, z, &chi)?;
        sym[0] = sym[0].max(rel(k, kernel_k(&p, y, x, z, &chi)?));
        sym[1] = sym[1].max(rel(k, kernel_k(&p, -z, y, -x, &chi)?));
        sym[2] = sym[2].max(rel(k, kernel_k(&p, x, -z, -y, &chi)?));
    }
    for (name, r) in ["kernel_swap_xy", "kernel_reflect_xz", "kernel_reflect_yz"].into_iter().zip(sym) {
        props.push(Property { name, cases: n, max_residual: r, tolerance: 1e-8 });
    }

    let mut support = 0.0f64;
    for _ in 0..n {
        let x: f64 = rng.gen_range(0.2..2.0);
        let y: f64 = rng.gen_range(0.2..2.0);
        let z = x + y + rng.gen_range(0.0..2.0);
        support = support.max(kernel_k(&p, x, y, z, &chi)?.abs());
    }
    props.push(Property { name: "kernel_zero_off_support", cases: n, max_residual: support, tolerance: 0.0 });

    let rules = TranslationRules::default();
    let gauss = |z: f64| Ok(Complex64::new((-z * z).exp(), 0.0));
    let m = n.min(3);
    let r = max_over(m, || {
        let x: f64 = rng.gen_range(0.3..1.5);
        let y: f64 = rng.gen_range(0.3..1.5);
        Ok((translate(&p, gauss, x, y, &rules)? - translate(&p, gauss, y, x, &rules)?).norm())
    })?;
    props.push(Property { name: "translation_symmetric", cases: m, max_residual: r, tolerance: 1e-6 });

    let r = max_over(n, || {
        let alpha: f64 = rng.gen_range(2.1..6.0);
        let beta = conjugate(alpha);
        let a: f64 = rng.gen_range(0.01..2.0);
        let b: f64 = rng.gen_range(0.01..2.0);
        let lo = morgan_threshold(a, b, alpha, beta)?.lhs;
        let hi = morgan_threshold(a * 1.5, b * 1.5, alpha, beta)?.lhs;
        Ok(if hi > lo { 0.0 } else { lo - hi })
    })?;
    props.push(Property { name: "morgan_monotone", cases: n, max_residual: r, tolerance: 0.0 });

    header.push("cases", n);
    let rows: Vec<Vec<String>> = props.iter().map(Property::row).collect();
    let all = props.iter().all(|p| p.max_residual <= p.tolerance);
    let text = render_rows(header, &["property", "cases", "max_residual", "tolerance", "status"], &rows, cfg.format)?;
    Ok(Output { name: "verify", text, ok: all })
}

/// Write `out` to `--out`, to `$CHEREDNIK_OUT_DIR/<command>.<ext>`, or to stdout.
pub fn write_output(cfg: &ConfigArgs, out: &Output) -> Result<Option<PathBuf>> {
    let ext = match cfg.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = match (&cfg.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            let dir = PathBuf::from(dir);
            fs::create_dir_all(&dir)?;
            Some(dir.join(format!("{}.{ext}", out.name)))
        }
        (None, None) => None,
    };
    match &path {
        Some(p) => fs::write(p, &out.text)?,
        None => print!("{}", out.text),
    }
    Ok(path)
}

/// Parse, execute and write; returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &argv).and_then(|out| write_output(&cli.config, &out).map(|_| out.ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
