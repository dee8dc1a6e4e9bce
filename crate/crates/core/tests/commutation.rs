use std::path::PathBuf;

use commutant::catalog::{build_pair, gauge_transform, CommutingPair, PairCase};
use commutant::cli::load_scenarios;
use commutant::verify::{commutator_norm, grid_residual, phi_study, TestFn, PHI_EPS};
use commutant::{c, Cplx};
use proptest::prelude::*;

const RESIDUE_TOL: f64 = 1e-10;

fn grid() -> Vec<(String, CommutingPair)> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/residue_grid.json");
    load_scenarios(&path)
        .unwrap()
        .into_iter()
        .map(|s| {
            let pair = s.build().unwrap();
            (s.name, pair)
        })
        .collect()
}

fn prolate() -> CommutingPair {
    build_pair(&PairCase::Main {
        lambda: c(0.0, 0.0),
        mu: c(0.0, 1.0),
        alpha1: c(1.0, 0.0),
        alpha2: c(0.0, 0.0),
    })
    .unwrap()
}

#[test]
fn every_grid_pair_certifies_and_its_control_does_not() {
    for (name, pair) in grid() {
        let r = grid_residual(&pair).unwrap();
        assert!(r.max_relative <= RESIDUE_TOL, "{name}: {:e}", r.max_relative);
        let control = grid_residual(&pair.with_c_scaled(1.1)).unwrap();
        assert!(control.max_relative > 1e-3, "{name} control: {:e}", control.max_relative);
    }
}

#[test]
fn analytic_commutator_converges_before_the_floor() {
    let pair = prolate();
    let norms: Vec<f64> = [8, 16]
        .iter()
        .map(|&n| commutator_norm(&pair, n, &TestFn::BATTERY).unwrap())
        .collect();
    assert!(norms[0] <= 1e-6, "{norms:?}");
    assert!(norms[1] < norms[0] * 1e-3, "{norms:?}");
    for n in [32, 64, 128] {
        let v = commutator_norm(&pair, n, &TestFn::BATTERY).unwrap();
        assert!(v <= 1e-8, "N = {n}: {v:e}");
    }
}

#[test]
fn boundary_term_vanishes_linearly_for_singular_kernels() {
    for (name, pair) in grid() {
        if pair.kernel.pole_order_at_zero() == 0 || pair.op_target.is_some() {
            continue;
        }
        let s = phi_study(&pair, 0.3, &PHI_EPS).unwrap();
        assert!((s.slope - 1.0).abs() < 1e-2, "{name}: slope {}", s.slope);
        assert!(s.phi.windows(2).all(|w| w[1] < w[0]), "{name}: {:?}", s.phi);
    }
}

fn arb_tau() -> impl Strategy<Value = Cplx> {
    (-1.4f64..1.4, -1.4f64..1.4).prop_map(|(r, i)| c(r, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certification_is_gauge_invariant(tau in arb_tau(), which in 0usize..4) {
        let case = match which {
            0 => PairCase::Main { lambda: c(1.0, 0.0), mu: c(0.3, 0.0), alpha1: c(1.0, 0.0), alpha2: c(1.0, 0.0) },
            1 => PairCase::Main { lambda: c(0.0, 1.0), mu: c(0.7, 0.2), alpha1: c(1.0, 0.0), alpha2: c(0.0, 0.0) },
            2 => PairCase::Special2 { lambda: c(1.3, 0.0), alpha: c(1.0, 0.0), beta: c(0.0, 0.4) },
            _ => PairCase::Special4 { p: vec![c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)], beta: c(0.2, 0.0) },
        };
        let pair = build_pair(&case).unwrap();
        let base = grid_residual(&pair).unwrap().max_relative;
        let gauged = grid_residual(&gauge_transform(&pair, tau)).unwrap().max_relative;
        prop_assert!(base <= RESIDUE_TOL);
        prop_assert!(gauged <= 10.0 * RESIDUE_TOL, "tau = {}: {:e}", tau, gauged);
    }
}
