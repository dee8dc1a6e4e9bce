#![allow(dead_code)]

use std::path::PathBuf;

use commutant::catalog::{unit_segment, DiffOp};
use commutant::{c, Cplx, ExpPoly};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

pub fn arb_cplx(r: f64) -> impl Strategy<Value = Cplx> {
    (-r..r, -r..r).prop_map(|(x, y)| c(x, y))
}

pub fn arb_real_poly(deg: usize) -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec(-1.0f64..1.0, deg + 1)
        .prop_map(|v| ExpPoly::real_polynomial(&v).unwrap())
}

pub fn arb_cplx_poly(deg: usize) -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec(arb_cplx(1.0), deg + 1).prop_map(|v| ExpPoly::polynomial(&v).unwrap())
}

/// Polynomials plus one exponential term, so conjugation has exponents to move.
pub fn arb_coefficient() -> impl Strategy<Value = ExpPoly> {
    (arb_cplx_poly(2), arb_cplx(1.0), arb_cplx(1.5))
        .prop_map(|(p, w, lam)| p.add(&ExpPoly::exponential(lam).scale(w)))
}

pub fn arb_op() -> impl Strategy<Value = DiffOp> {
    (arb_coefficient(), arb_coefficient(), arb_coefficient())
        .prop_map(|(a, b, cc)| DiffOp::new(a, b, cc, unit_segment()).unwrap())
}

/// Complex coefficients, or a real leading coefficient with a complex drift.
pub fn arb_non_normal() -> impl Strategy<Value = DiffOp> {
    let generic = (arb_cplx_poly(2), arb_cplx_poly(2), arb_cplx_poly(2))
        .prop_map(|(a, b, cc)| DiffOp::new(a.add_constant(c(2.0, 0.0)), b, cc, unit_segment()).unwrap());
    let drift = (arb_real_poly(2), arb_cplx_poly(1), arb_cplx_poly(2)).prop_map(|(a, db, cc)| {
        let a = a.add_constant(c(2.0, 0.0));
        let b = a.diff().add(&db.scale(c(0.0, 1.0)));
        DiffOp::new(a, b, cc.scale(c(0.0, 1.0)), unit_segment()).unwrap()
    });
    prop_oneof![generic, drift]
}

/// `s·(a u″ + a′u′ + cu)` with real `a`, `c`.
pub fn arb_scaled_self_adjoint() -> impl Strategy<Value = DiffOp> {
    (arb_real_poly(3), arb_real_poly(2), arb_cplx(2.0)).prop_map(|(a, cc, s)| {
        let a = a.add_constant(c(2.0, 0.0));
        DiffOp::new(a.clone(), a.diff(), cc, unit_segment()).unwrap().scale(s + c(0.1, 0.0))
    })
}

/// `a = s²`, `b = a′ + γs`, `c = ss″/2 + s′²/4 + γs′/2 + κ` for real `s`, `γ`,
/// `κ`, times a complex scalar. Normal, and self-adjoint only when `γ = 0`.
pub fn arb_normal_family() -> impl Strategy<Value = DiffOp> {
    (arb_real_poly(2), 0.2f64..2.0, -1.0f64..1.0, arb_cplx(2.0)).prop_map(|(s, gamma, kappa, w)| {
        let s = s.add_constant(c(1.5, 0.0));
        normal_family(&s, gamma, kappa).scale(w + c(0.1, 0.0))
    })
}

pub fn normal_family(s: &ExpPoly, gamma: f64, kappa: f64) -> DiffOp {
    let g = c(gamma, 0.0);
    let s1 = s.diff();
    let s2 = s1.diff();
    let a = s.try_mul(s).unwrap();
    let b = a.diff().add(&s.scale(g));
    let cc = s
        .try_mul(&s2)
        .unwrap()
        .scale(c(0.5, 0.0))
        .add(&s1.try_mul(&s1).unwrap().scale(c(0.25, 0.0)))
        .add(&s1.scale(g * 0.5))
        .add_constant(c(kappa, 0.0));
    DiffOp::new(a, b, cc, unit_segment()).unwrap()
}

/// `n` draws from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}
