//! Principal-value quadrature for the Cauchy kernel: the finite Hilbert
//! transform of 1 on (−1, 1) is log((1 + x)/(1 − x)).

use commutant::c;
use commutant::catalog::{unit_segment, DenomKind, KernelSpec};
use commutant::quadrature::QuadratureRule;
use commutant::verify::discretize_k;
use commutant::ExpPoly;

fn main() -> commutant::Result<()> {
    let k = KernelSpec::new(ExpPoly::constant(c(1.0, 0.0)), DenomKind::Z, c(0.0, 0.0))?;
    for n in [8, 16, 32, 64] {
        let src = QuadratureRule::gauss_legendre(n, unit_segment())?;
        let tgt = QuadratureRule::gauss_legendre(11, unit_segment())?;
        let kop = discretize_k(&k, &src, &tgt)?;
        let v = kop.apply(&vec![c(1.0, 0.0); n]);
        let err = v
            .iter()
            .zip(&tgt.mapped)
            .map(|(v, y)| (v.re - ((1.0 + y.re) / (1.0 - y.re)).ln()).abs())
            .fold(0.0, f64::max);
        println!("N = {n:>2}: max error {err:.2e}");
    }
    Ok(())
}
