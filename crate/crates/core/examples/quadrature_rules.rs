//! Composite Gauss-Legendre and tanh-sinh rules on a truncated line, with
//! the tail bound of the truncation.

use cherednik::quadrature::{build_rule, gaussian_quarter_tail, integrate_line, Scheme};
use cherednik::Complex64;

fn main() -> cherednik::Result<()> {
    let exact = (4.0 * std::f64::consts::PI).sqrt();
    for scheme in [Scheme::GaussLegendreComposite, Scheme::TanhSinh] {
        for (radius, ppu) in [(6.0, 8), (8.0, 16), (10.0, 24)] {
            let rule = build_rule(radius, ppu, scheme)?;
            let v = integrate_line(|x| Ok(Complex64::new((-x * x / 4.0).exp(), 0.0)), &rule)?;
            println!(
                "{scheme:<26} R = {radius:>4} ppu = {ppu:>2} nodes = {:>4} error = {:.2e} tail bound = {:.2e}",
                rule.len(),
                (v.re - exact).abs(),
                gaussian_quarter_tail(radius)
            );
        }
    }
    Ok(())
}
