//! Build commuting pairs from the catalog, check their boundary frame and
//! look at the kernel near the origin.

use std::f64::consts::PI;

use commutant::catalog::{build_pair, classify_regularity, gauge_transform, kernel_laurent, validate_pair, PairCase, VARIANTS};
use commutant::c;

fn main() -> commutant::Result<()> {
    for (name, domain) in VARIANTS {
        println!("{name:<10} {domain}");
    }
    println!();

    let cases = [
        PairCase::Main { lambda: c(0.0, 0.0), mu: c(0.0, 1.0), alpha1: c(1.0, 0.0), alpha2: c(0.0, 0.0) },
        PairCase::Special2 { lambda: c(1.2, 0.0), alpha: c(1.0, 0.0), beta: c(0.0, 0.5) },
        PairCase::C2Item1 { lambda: c(0.0, PI / 2.0), mu: c(0.0, PI / 8.0), alpha1: c(0.0, 0.0), alpha2: c(1.0, 0.0), n: 1 },
    ];
    for case in &cases {
        let pair = build_pair(case)?;
        let [a, b, cc] = pair.op.formulas();
        let v = validate_pair(&pair);
        println!("{}: a = {a}\n  b = {b}\n  c = {cc}", case.name());
        println!("  boundary ok {}, pole order at 0: {}", v.boundary_ok, v.pole_order_at_zero);
        let l = kernel_laurent(&pair.kernel, 4)?;
        let reg: Vec<String> = l.plain[..3].iter().map(|v| format!("{v:.6}")).collect();
        println!("  residue {:.6}, regular part {}", l.pole, reg.join(", "));
        if pair.op_target.is_some() {
            let r = classify_regularity(&pair)?;
            println!("  {:?}; removable points {:?}", r.verdict, r.removable);
        }
    }

    // e^{τy} L e^{−τy} pairs with e^{τz} k(z)
    let pair = build_pair(&cases[1])?;
    let g = gauge_transform(&pair, c(0.4, -0.2));
    println!("\ngauged b = {}", g.op.b.display_in("y"));
    Ok(())
}
