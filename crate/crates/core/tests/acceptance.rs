//! Acceptance criteria 1 to 14. Every criterion runs, prints one
//! `criterion N: PASS|FAIL` line with its measured numbers, and the process
//! exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use cherednik::measures::fit_density_growth;
use cherednik::modspace::{box_norm_bound_check, gaussian_stft_of_one, gaussian_window, stft_2d, WeightFunction};
use cherednik::quadrature::{build_rule, Scheme};
use cherednik::sampled::{linspace, MeasureTag, SampledFunction1D};
use cherednik::specfun::{cherednik_apply, opdam_g};
use cherednik::transform::{oc_inverse, plancherel_check, translation_product_check, SpectralFunction, TransformPlan};
use cherednik::translation::{kernel_k, translate, TranslationRules};
use cherednik::ucp::{cowling_price_certify, gaussian_envelope_fit, morgan_rhs, morgan_threshold, UcpRules};
use cherednik::windowed::{default_window, sandwich_check, WindowedPlan, WindowedRules};
use cherednik::modspace::Exponent;
use cherednik::{Complex64, JCParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: [(f64, f64); 3] = [(1.0, 0.5), (0.5, -0.25), (2.0, 1.0)];

fn pairs() -> Vec<JCParams> {
    PAIRS.iter().map(|&(a, b)| JCParams::new(a, b).unwrap()).collect()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn bank() -> Vec<(&'static str, fn(f64) -> Result<Complex64>)> {
    vec![
        ("exp(-x^2)", |x| Ok(c((-x * x).exp()))),
        ("exp(-2x^2)", |x| Ok(c((-2.0 * x * x).exp()))),
        ("x exp(-x^2)", |x| Ok(c(x * (-x * x).exp()))),
    ]
}

fn gauss(x: f64) -> Result<Complex64> {
    Ok(c((-x * x).exp()))
}

/// 5 values of `lambda` times 6 of `mu`; the `mu` grid is symmetric and
/// avoids 0.
fn identity_grid() -> (Vec<f64>, Vec<f64>) {
    (linspace(-1.0, 1.0, 5), vec![-1.0, -0.6, -0.2, 0.2, 0.6, 1.0])
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn criterion_1() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for p in pairs() {
        let lambdas = [c(0.5), c(1.0), c(2.0), c(4.0), Complex64::new(0.0, p.rho())];
        for l in lambdas {
            worst = worst.max((opdam_g(&p, l, 0.0)? - 1.0).norm());
        }
    }
    verdict(worst <= 1e-10, format!("max |G_lambda(0) - 1| = {worst:.3e} (tol 1e-10)"))
}

fn criterion_2() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for p in pairs() {
        for l in [0.5, 1.0, 2.0] {
            let lam = c(l);
            for x in linspace(0.2, 2.0, 19) {
                let tg = cherednik_apply(&p, |s| opdam_g(&p, lam, s), x, 1e-3)?;
                worst = worst.max((tg - Complex64::new(0.0, l) * opdam_g(&p, lam, x)?).norm());
            }
        }
    }
    verdict(worst <= 1e-6, format!("sup |T G - i lambda G| = {worst:.3e} (tol 1e-6, h = 1e-3)"))
}

fn criterion_3() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for p in pairs() {
        let plan = TransformPlan::default_for(&p)?;
        for (_, f) in bank() {
            worst = worst.max(plancherel_check(f, &plan)?.relative_error());
        }
    }
    verdict(worst <= 1e-3, format!("max Plancherel relative error = {worst:.3e} (tol 1e-3)"))
}

fn criterion_4() -> Result<Verdict> {
    let xs = linspace(-2.0, 2.0, 41);
    let mut worst = 0.0f64;
    for p in pairs() {
        let plan = TransformPlan::default_for(&p)?;
        for (_, f) in bank() {
            let hf = plan.forward(&plan.sample(f)?)?;
            let spec = SpectralFunction::new(plan.rule_lambda.nodes.clone(), hf)?;
            let back = oc_inverse(&spec, &p, &xs, &plan.rule_lambda)?;
            for (x, v) in xs.iter().zip(&back.values) {
                worst = worst.max((v - f(*x)?).norm());
            }
        }
    }
    verdict(worst <= 1e-3, format!("roundtrip sup-error on [-2, 2] = {worst:.3e} (tol 1e-3)"))
}

fn criterion_5() -> Result<Verdict> {
    let p = JCParams::new(1.0, 0.25)?;
    let chi = TranslationRules::default().chi;
    let outside = [(1.0, 1.0, 3.0), (1.0, 2.0, 0.5), (0.5, 0.5, -1.5), (2.0, 0.5, 2.6), (1.0, 1.0, 0.0)];
    let mut support_ok = true;
    for (x, y, z) in outside {
        support_ok &= kernel_k(&p, x, y, z, &chi)? == 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x: f64 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let y: f64 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (lo, hi) = ((x.abs() - y.abs()).abs(), x.abs() + y.abs());
        let z = rng.gen_range(lo + 0.05 * (hi - lo)..hi - 0.05 * (hi - lo)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let k = kernel_k(&p, x, y, z, &chi)?;
        let scale = k.abs().max(1.0);
        for other in [kernel_k(&p, y, x, z, &chi)?, kernel_k(&p, -z, y, -x, &chi)?, kernel_k(&p, x, -z, -y, &chi)?] {
            worst = worst.max((k - other).abs() / scale);
        }
    }
    verdict(
        support_ok && worst <= 1e-8,
        format!("exact zeros off support: {support_ok}; max symmetry defect over 20 triples = {worst:.3e} (tol 1e-8)"),
    )
}

fn criterion_6() -> Result<Verdict> {
    let p = JCParams::new(1.0, 0.25)?;
    let rules = TranslationRules::default();
    let mut delta_ok = true;
    for y in [-1.3, 0.0, 0.7, 2.0] {
        delta_ok &= translate(&p, gauss, 0.0, y, &rules)? == gauss(y)?;
        delta_ok &= translate(&p, gauss, y, 0.0, &rules)? == gauss(y)?;
    }
    let mut sym = 0.0f64;
    for (x, y) in [(0.8, 1.1), (0.3, 0.9), (1.5, 0.4), (-0.7, 1.2), (2.0, -1.0)] {
        sym = sym.max((translate(&p, gauss, x, y, &rules)? - translate(&p, gauss, y, x, &rules)?).norm());
    }
    let rule_x = build_rule(8.0, 16, Scheme::GaussLegendreComposite)?;
    let prod = translation_product_check(gauss, 0.8, &p, &[0.5, 1.0, 2.0], &rule_x, &rules)?;
    let prod_max = prod.iter().cloned().fold(0.0, f64::max);
    verdict(
        delta_ok && sym <= 1e-6 && prod_max <= 1e-2,
        format!("delta branch exact: {delta_ok}; symmetry defect = {sym:.3e} (tol 1e-6); product-formula residual = {prod_max:.3e} (tol 1e-2)"),
    )
}

fn criterion_7() -> Result<Verdict> {
    let p = JCParams::new(1.0, 0.5)?;
    let plan = WindowedPlan::default_for(&p)?;
    let r = plan.plancherel(gauss)?;
    let e = r.relative_error();
    verdict(e <= 5e-2, format!("lhs = {:.6e}, rhs = {:.6e}, relative error = {e:.3e} (tol 5e-2)", r.lhs, r.rhs))
}

fn criterion_8() -> Result<Verdict> {
    let p = JCParams::new(1.0, 0.5)?;
    let (ls, ms) = identity_grid();
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [0.25, 0.5, 1.0] {
        let plan = WindowedPlan::new(&p, default_window, WindowedRules::for_gaussian(&p, t)?)?;
        let r = plan.gaussian_identity_residual(t, &ls, &ms)?.sup_relative_residual;
        pass &= r <= 5e-2;
        parts.push(format!("t = {t}: {r:.3e}"));
    }
    verdict(pass, format!("sup relative residual {} (tol 5e-2)", parts.join(", ")))
}

fn criterion_9() -> Result<Verdict> {
    let p = JCParams::new(1.0, 0.5)?;
    let xs = linspace(-3.0, 3.0, 61);
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [0.25, 0.5, 1.0] {
        let coarse = WindowedRules::for_gaussian(&p, t)?;
        let radius = coarse.x.truncation_radius;
        let fine = WindowedRules::with_density(12).with_x_radius(radius)?;
        let mut spreads = Vec::new();
        let mut fit_rate = f64::NAN;
        let mut positive = true;
        for (k, rules) in [coarse, fine].into_iter().enumerate() {
            let plan = WindowedPlan::new(&p, default_window, rules)?;
            let et = plan.gaussian_kernel(t, &xs)?;
            match sandwich_check(&p, &et, t) {
                Ok(r) => spreads.push(r.ratio_max / r.ratio_min),
                Err(_) => positive = false,
            }
            if k == 0 {
                let vals = et.values.iter().map(|v| c(v.re)).collect();
                let s = SampledFunction1D::new(xs.clone(), vals, MeasureTag::WeightA)?;
                fit_rate = gaussian_envelope_fit(&s, (1.0, 3.0)).map(|f| f.a_hat).unwrap_or(f64::NAN);
            }
        }
        let drift = if spreads.len() == 2 { (spreads[1] / spreads[0]).max(spreads[0] / spreads[1]) } else { f64::NAN };
        let target = 0.25 / t;
        let rate_err = (fit_rate - target).abs() / target;
        let ok = positive && drift < 2.0 && rate_err <= 0.1;
        pass &= ok;
        parts.push(format!(
            "t = {t}: positive {positive}, spread drift {drift:.3}, fitted rate {fit_rate:.4} vs {target:.4} ({:.1}%)",
            100.0 * rate_err
        ));
    }
    verdict(pass, parts.join("; "))
}

fn criterion_10() -> Result<Verdict> {
    let rule = build_rule(6.0, 16, Scheme::GaussLegendreComposite)?;
    let one = |_: f64, _: f64| Ok(c(1.0));
    let window = |a: f64, b: f64| Ok(c(gaussian_window(a) * gaussian_window(b)));
    let pts = [-1.0, 0.0, 1.0];
    let mut worst = 0.0f64;
    for &a in &pts {
        for &b in &pts {
            for &x in &pts {
                for &y in &pts {
                    let v = stft_2d(one, window, [a, b], [x, y], &rule)?;
                    worst = worst.max((v - gaussian_stft_of_one([a, b], [x, y])).norm());
                }
            }
        }
    }
    let m = WeightFunction::one();
    let mut box_ok = true;
    let mut slack = f64::INFINITY;
    for rho1 in [1.0, 2.0] {
        for rho2 in [1.0, 2.0] {
            for p in [1.0, 2.0] {
                let r = box_norm_bound_check(p, rho1, rho2, 1.0, &m)?;
                box_ok &= r.holds();
                slack = slack.min(r.rhs - r.lhs);
            }
        }
    }
    verdict(
        worst <= 1e-8 && box_ok,
        format!("closed-form defect on 3^4 points = {worst:.3e} (tol 1e-8); box bounds hold: {box_ok} (min slack {slack:.3e})"),
    )
}

fn criterion_11() -> Result<Verdict> {
    let p = JCParams::new(1.0, 0.5)?;
    let plan = WindowedPlan::new(&p, default_window, WindowedRules::for_gaussian(&p, 0.3)?)?;
    let rules = UcpRules::coarse();
    let one = WeightFunction::one();
    let two = Exponent::Finite(2.0);
    let mut parts = Vec::new();
    let mut pass = true;
    let mut settings: Vec<(f64, f64, f64, bool)> = [0.3, 0.5, 0.8].iter().map(|&t| (t, 1.0 / (8.0 * t), t / 2.0, false)).collect();
    settings.push((0.3, 0.5, 0.4, true));
    for (t, a, b, expect_tf_growth) in settings {
        let f = |xs: &[f64]| Ok(plan.gaussian_kernel(t, xs)?.values);
        let r = cowling_price_certify(&plan, f, a, b, two, two, &one, &one, &rules)?;
        let ok = if expect_tf_growth { r.growth_flags.tf } else { !r.growth_flags.x && !r.growth_flags.tf };
        pass &= ok;
        parts.push(format!(
            "(t, a, b) = ({t}, {a:.4}, {b}): x {:.4e} -> {:.4e}, tf {:.4e} -> {:.4e}, flags x {} tf {}",
            r.x_growth.value, r.x_growth.doubled, r.tf_growth.value, r.tf_growth.doubled, r.growth_flags.x, r.growth_flags.tf
        ));
    }
    verdict(pass, parts.join("; "))
}

fn criterion_12() -> Result<Verdict> {
    // 30-digit arithmetic oracle, alpha = 4, beta = 4/3
    let rhs = 0.59460355750136053335874998528;
    let grid = [0.05, 0.2, 1.0];
    let lhs = [
        [0.08773826753016616405461459, 0.2481612957605598930509917, 0.8297773030513044438745924],
        [0.1240806478802799465254958, 0.3509530701206646562184584, 1.173482315724524529694777],
        [0.1855438455809160401405004, 0.5247972456707814449437939, 1.754765350603323281092292],
    ];
    let mut worst = 0.0f64;
    let mut verdicts_ok = true;
    for (i, &a) in grid.iter().enumerate() {
        for (j, &b) in grid.iter().enumerate() {
            let m = morgan_threshold(a, b, 4.0, 4.0 / 3.0)?;
            worst = worst.max((m.lhs - lhs[i][j]).abs()).max((m.rhs - rhs).abs());
            verdicts_ok &= m.vanishing == (lhs[i][j] > rhs);
        }
    }
    let limit = (morgan_rhs(2.0) - 1.0).abs();
    verdict(
        worst <= 1e-12 && verdicts_ok && limit <= 1e-15,
        format!("max deviation from oracle = {worst:.3e} (tol 1e-12); verdicts match: {verdicts_ok}; |rhs(2) - 1| = {limit:.1e}"),
    )
}

fn criterion_13() -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut pass = true;
    for p in pairs() {
        let fit = fit_density_growth(&p, 1.0, 20.0, 200)?;
        let ok = fit.k1_hat > 0.0 && fit.k1_hat <= fit.k2_hat && fit.k2_hat.is_finite();
        pass &= ok;
        parts.push(format!("{p}: k1 = {:.4e}, k2 = {:.4e}", fit.k1_hat, fit.k2_hat));
    }
    verdict(pass, parts.join("; "))
}

fn run_cli(args: &[&str]) -> std::io::Result<(i32, Vec<u8>)> {
    let out = Command::new(env!("CARGO_BIN_EXE_cherednik")).args(args).env_remove("CHEREDNIK_OUT_DIR").output()?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn criterion_14() -> Result<Verdict> {
    let commands: &[&[&str]] = &[
        &["eval", "G", "--lambda", "0.5,2", "--x", "-1:1:5"],
        &["eval", "phi", "--lambda", "1", "--lambda-im", "0.5", "--x", "0.5"],
        &["eval", "density", "--lambda", "-2,-1,1,2"],
        &["--alpha", "1", "--beta", "0.25", "eval", "kernel", "--x", "1", "--y", "1", "--z", "0.5,1.5"],
        &["transform", "--f", "gaussian:2", "--lambda", "-2,-1,1,2"],
        &["--ppu", "4", "wtransform", "--f", "gaussian", "--x", "0,1", "--xi", "-0.5,0.5"],
        &["--alpha", "1", "--beta", "0.25", "kernel", "--x", "0.8", "--y", "1.1", "--z", "-2:2:9"],
        &["norm", "--f", "gaussian", "--p", "1", "--q", "inf"],
        &["ucp", "cowling-price", "--a", "0.25", "--b", "0.5"],
        &["ucp", "morgan", "--a", "1", "--b", "1", "--alpha", "4"],
        &["--format", "json", "ucp", "morgan", "--a", "0.2", "--b", "0.05", "--alpha", "4"],
        &["--seed", "7", "verify", "--cases", "5"],
    ];
    let mut mismatches = Vec::new();
    for args in commands {
        let (code, first) = run_cli(args)?;
        let text = String::from_utf8_lossy(&first).to_string();
        let echoed = text
            .lines()
            .find_map(|l| l.strip_prefix("# command=").or_else(|| l.trim().strip_prefix("\"command\": \"")))
            .map(|s| s.trim_end_matches(['"', ',']).to_string());
        let Some(echoed) = echoed else {
            mismatches.push(format!("{args:?}: no echoed command"));
            continue;
        };
        let again: Vec<&str> = echoed.split(' ').skip(1).collect();
        let (code2, second) = run_cli(&again)?;
        if code != 0 || code2 != code || first != second {
            mismatches.push(format!("{args:?} (exit {code}/{code2})"));
        }
    }
    verdict(
        mismatches.is_empty(),
        format!("{} commands re-run from their echoed headers; mismatches: {mismatches:?}", commands.len()),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Result<Verdict>, Duration); 14] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_secs(10)),
        (3, criterion_3, Duration::from_secs(120)),
        (4, criterion_4, Duration::from_secs(120)),
        (5, criterion_5, Duration::from_secs(60)),
        (6, criterion_6, Duration::from_secs(300)),
        (7, criterion_7, Duration::from_secs(300)),
        (8, criterion_8, Duration::from_secs(600)),
        (9, criterion_9, Duration::from_secs(600)),
        (10, criterion_10, Duration::from_secs(60)),
        (11, criterion_11, Duration::from_secs(900)),
        (12, criterion_12, Duration::from_secs(1)),
        (13, criterion_13, Duration::from_secs(5)),
        (14, criterion_14, Duration::from_secs(600)),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (n, f, budget) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match v {
            Ok(v) => (v.pass && elapsed <= budget, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let status = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2}: {status} [{:.2}s of {}s] {detail}",
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
