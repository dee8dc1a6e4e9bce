use std::f64::consts::PI;
use std::path::PathBuf;

use commutant::catalog::{
    build_pair, build_unchecked, gauge_transform, kernel_laurent, validate_pair, DiffOp, PairCase,
};
use commutant::cli::load_scenarios;
use commutant::{c, Cplx};
use proptest::prelude::*;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn grid_pairs() -> Vec<PairCase> {
    load_scenarios(&scenario("residue_grid.json"))
        .unwrap()
        .into_iter()
        .map(|s| s.pair.unwrap().case)
        .collect()
}

/// `op = s·reference` with `c` compared modulo a constant.
fn same_up_to_scale(op: &DiffOp, reference: &DiffOp) -> bool {
    let Some(s) = op.a.least_squares_factor(&reference.a) else {
        return false;
    };
    op.approx_eq_mod_constant(&reference.scale(s), 1e-12)
}

fn main_op(lambda: Cplx, mu: Cplx) -> DiffOp {
    build_unchecked(&PairCase::Main {
        lambda,
        mu,
        alpha1: c(0.0, 0.0),
        alpha2: c(1.0, 0.0),
    })
    .unwrap()
    .op
}

#[test]
fn committed_grid_covers_every_family() {
    let cases = grid_pairs();
    assert!(cases.len() >= 22);
    for (name, _) in commutant::catalog::VARIANTS {
        let n = cases.iter().filter(|p| p.name() == name).count();
        assert!(n >= 3, "{name}: {n} points");
    }
}

#[test]
fn grid_pairs_meet_the_boundary_frame() {
    for case in grid_pairs() {
        let pair = build_pair(&case).unwrap();
        let r = validate_pair(&pair);
        assert!(r.boundary_ok, "{case:?}: {:?}", r.endpoints);
        assert!(r.passed, "{case:?}");
    }
}

#[test]
fn special_cases_degenerate_to_the_main_family() {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    for m in [-2, 0, 1, 3] {
        let lambda = c(0.0, PI);
        let mu = lambda * ((2 * m + 1) as f64 / 4.0);
        let s1 = build_unchecked(&PairCase::Special1 { m, alpha: c(0.7, 0.2), beta: c(0.7, 0.2) }).unwrap();
        assert!(same_up_to_scale(&s1.op, &main_op(lambda, mu)), "m = {m}");
    }
    for lambda in [c(1.1, 0.0), c(0.0, 1.3), c(0.4, -0.6)] {
        let s2 = build_unchecked(&PairCase::Special2 { lambda, alpha: c(2.0, 1.0), beta: zero }).unwrap();
        assert!(same_up_to_scale(&s2.op, &main_op(lambda, zero)), "{lambda}");
    }
    let legendre = main_op(zero, zero);
    for beta in [one, c(0.0, 0.5), c(-2.0, 1.0)] {
        let s3 = build_unchecked(&PairCase::Special3 { beta, p: vec![one] }).unwrap();
        assert!(same_up_to_scale(&s3.op, &legendre), "{beta}");
    }
    let s4 = build_unchecked(&PairCase::Special4 { p: vec![one], beta: zero }).unwrap();
    assert!(same_up_to_scale(&s4.op, &legendre));
}

#[test]
fn generic_special_parameters_leave_the_main_family() {
    let s2 = build_unchecked(&PairCase::Special2 { lambda: c(1.1, 0.0), alpha: c(1.0, 0.0), beta: c(0.0, 0.4) }).unwrap();
    assert!(!same_up_to_scale(&s2.op, &main_op(c(1.1, 0.0), c(0.0, 0.0))));
    let s4 = build_unchecked(&PairCase::Special4 { p: vec![c(1.0, 0.0)], beta: c(0.3, 0.0) }).unwrap();
    assert!(!same_up_to_scale(&s4.op, &main_op(c(0.0, 0.0), c(0.0, 0.0))));
}

fn arb_lambda() -> impl Strategy<Value = Cplx> {
    (0.1f64..2.0, -1.5f64..1.5).prop_map(|(r, i)| c(r, i))
}

fn arb_small() -> impl Strategy<Value = Cplx> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(r, i)| c(r, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn main_operators_have_the_closed_form(lambda in arb_lambda(), mu in arb_small()) {
        let pair = build_unchecked(&PairCase::Main { lambda, mu, alpha1: c(1.0, 0.0), alpha2: c(0.5, 0.0) }).unwrap();
        let op = &pair.op;
        prop_assert!(op.b.approx_eq(&op.a.diff(), 1e-13));
        let nu = lambda * lambda / 4.0 - mu * mu;
        prop_assert!(op.c.approx_eq_mod_constant(&op.a.scale(nu), 1e-12));
    }

    #[test]
    fn gauges_compose(lambda in arb_lambda(), t1 in arb_small(), t2 in arb_small()) {
        let pair = build_pair(&PairCase::Special2 { lambda, alpha: c(1.0, 0.0), beta: c(0.3, 0.1) }).unwrap();
        let g12 = gauge_transform(&gauge_transform(&pair, t1), t2);
        let g = gauge_transform(&pair, t1 + t2);
        prop_assert!(g12.op.approx_eq_mod_constant(&g.op, 1e-12));
        prop_assert!(g12.op.c.approx_eq(&g.op.c, 1e-12));
        prop_assert!((g12.kernel.tau - g.kernel.tau).norm() < 1e-14);
    }

    #[test]
    fn ungauged_main_kernels_have_no_linear_term(lambda in arb_lambda(), mu in arb_small(), singular in any::<bool>()) {
        prop_assume!((mu - lambda / 2.0).norm() > 0.05 && (mu + lambda / 2.0).norm() > 0.05);
        let (alpha1, alpha2) = if singular { (c(0.0, 0.0), c(1.0, 0.0)) } else { (c(1.0, 0.0), c(0.0, 0.0)) };
        let pair = build_unchecked(&PairCase::Main { lambda, mu, alpha1, alpha2 }).unwrap();
        let l = kernel_laurent(&pair.kernel, 6).unwrap();
        let scale = l.plain.iter().map(|v| v.norm()).fold(l.pole.norm(), f64::max);
        if singular {
            // k(z) = z⁻¹(K₀ + K₁z + …): the z⁰ term of the regular part
            prop_assert!(l.plain[0].norm() <= 1e-12 * scale);
        } else {
            prop_assert!(l.factorial[1].norm() <= 1e-12 * scale);
        }
    }
}
