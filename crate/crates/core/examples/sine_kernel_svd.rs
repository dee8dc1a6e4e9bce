//! Singular system of `1/sin(πz/8)` from (−1, 1) to (3, 5), built from the
//! eigenfunctions of the source operator alone.

use std::f64::consts::PI;

use commutant::catalog::{build_pair, classify_regularity, PairCase};
use commutant::c;
use commutant::spectral::svd_pipeline;

fn main() -> commutant::Result<()> {
    let pair = build_pair(&PairCase::C2Item1 {
        lambda: c(0.0, PI / 2.0),
        mu: c(0.0, PI / 8.0),
        alpha1: c(0.0, 0.0),
        alpha2: c(1.0, 0.0),
        n: 1,
    })?;
    let reg = classify_regularity(&pair)?;
    println!("target {:?}: {:?}, removable {:?}", pair.target_op().segment, reg.verdict, reg.removable);

    let svd = svd_pipeline(&pair, 64, 128, 5)?;
    println!(" n        sigma          chi   cross res   K*K res");
    for i in 0..svd.sigmas.len() {
        println!(
            "{i:>2} {:>12.6e} {:>12.4} {:>11.2e} {:>9.2e}",
            svd.sigmas[i], svd.chis[i].re, svd.cross_residuals[i], svd.normal_residuals[i]
        );
    }
    println!("Gram defects: u {:.1e}, v {:.1e}", svd.gram_u, svd.gram_v);
    if let Some(c) = svd.caveat {
        println!("caveat: {c}");
    }
    Ok(())
}
