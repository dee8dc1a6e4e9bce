//! Three independent checks that K and L commute: the pointwise residue
//! identity, the discrete commutator, and the excised boundary term.

use commutant::catalog::{build_pair, PairCase};
use commutant::c;
use commutant::verify::{commutator_norm, grid_residual, phi_study, TestFn, PHI_EPS};

fn main() -> commutant::Result<()> {
    let prolate = build_pair(&PairCase::Main {
        lambda: c(0.0, 0.0),
        mu: c(0.0, 1.0),
        alpha1: c(1.0, 0.0),
        alpha2: c(0.0, 0.0),
    })?;
    let r = grid_residual(&prolate)?;
    let control = grid_residual(&prolate.with_c_scaled(1.1))?;
    println!("residue identity: {:.2e} ({} points), control {:.2e}", r.max_relative, r.points.len(), control.max_relative);
    for n in [8, 16, 32, 64, 128] {
        println!("  ||KL - LK|| at N = {n:>3}: {:.2e}", commutator_norm(&prolate, n, &TestFn::BATTERY)?);
    }

    // a kernel with a simple pole: the commutator only makes sense after
    // excising a ball around the diagonal
    let singular = build_pair(&PairCase::Special2 { lambda: c(1.1, 0.0), alpha: c(1.0, 0.0), beta: c(0.0, 0.0) })?;
    println!("singular pair residue identity: {:.2e}", grid_residual(&singular)?.max_relative);
    let phi = phi_study(&singular, 0.3, &PHI_EPS)?;
    for (e, p) in phi.eps.iter().zip(&phi.phi) {
        println!("  eps = {e:.0e}: |Phi| = {p:.3e}");
    }
    println!("  log-log slope {:.5}", phi.slope);
    Ok(())
}
