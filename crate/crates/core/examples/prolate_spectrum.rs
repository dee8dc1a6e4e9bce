//! Prolate spheroidal functions: eigenpairs of the differential operator,
//! then the eigenvalues of the sinc kernel as Rayleigh quotients.

use commutant::catalog::{build_pair, PairCase};
use commutant::c;
use commutant::quadrature::QuadratureRule;
use commutant::spectral::{dense_oracle, k_spectrum_from_l, solve_l_eigen};
use commutant::verify::discretize_k;

fn main() -> commutant::Result<()> {
    let pair = build_pair(&PairCase::Main {
        lambda: c(0.0, 0.0),
        mu: c(0.0, 1.0),
        alpha1: c(1.0, 0.0),
        alpha2: c(0.0, 0.0),
    })?;
    let spec = solve_l_eigen(&pair.op, 96)?;
    let (kappas, res) = k_spectrum_from_l(&pair, &spec, 128)?;

    let rule = QuadratureRule::gauss_legendre(128, pair.op.segment)?;
    let oracle = dense_oracle(&discretize_k(&pair.kernel, &rule, &rule)?)?;
    let eig = oracle.eigenvalues.unwrap_or_default();

    println!(" n         chi            kappa     K residual   dense eigenvalue");
    for n in 0..6 {
        println!(
            "{n:>2} {:>12.6} {:>16.9e} {:>12.2e} {:>18.9e}",
            spec.eigenvalues[n].re, kappas[n].re, res[n], eig[n].re
        );
    }
    println!("parity defects: {:?}", (0..6).map(|n| format!("{:.0e}", spec.parity_defect(n))).collect::<Vec<_>>());
    Ok(())
}
