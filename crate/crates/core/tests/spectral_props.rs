use std::f64::consts::PI;

use commutant::catalog::{build_pair, unit_segment, CommutingPair, DiffOp, PairCase};
use commutant::linalg::hermitian_defect;
use commutant::quadrature::QuadratureRule;
use commutant::spectral::{
    dense_oracle, galerkin_matrix, k_spectrum_from_l, solve_l_eigen, svd_pipeline,
};
use commutant::verify::discretize_k;
use commutant::{c, Cplx, ExpPoly};
use proptest::prelude::*;

fn main_pair(lambda: Cplx, mu: Cplx) -> CommutingPair {
    build_pair(&PairCase::Main {
        lambda,
        mu,
        alpha1: c(1.0, 0.0),
        alpha2: c(0.0, 0.0),
    })
    .unwrap()
}

fn sine_pair() -> CommutingPair {
    build_pair(&PairCase::C2Item1 {
        lambda: c(0.0, PI / 2.0),
        mu: c(0.0, PI / 8.0),
        alpha1: c(0.0, 0.0),
        alpha2: c(1.0, 0.0),
        n: 1,
    })
    .unwrap()
}

#[test]
fn analytic_pairs_share_eigenfunctions() {
    let cases = [
        (c(0.0, 0.0), c(0.0, 1.0)),
        (c(1.0, 0.0), c(0.3, 0.0)),
        (c(0.0, 1.2), c(0.0, 0.2)),
        (c(0.0, 0.8), c(1.5, 0.0)),
        (c(0.5, 0.5), c(0.2, -0.1)),
    ];
    for (lambda, mu) in cases {
        let pair = main_pair(lambda, mu);
        let spec = solve_l_eigen(&pair.op, 96).unwrap();
        let (kappas, res) = k_spectrum_from_l(&pair, &spec, 128).unwrap();
        let top = kappas.iter().map(|k| k.norm()).fold(0.0, f64::max);
        for m in 0..5 {
            // modes with κ at roundoff carry no proportionality information
            if kappas[m].norm() < 1e-10 * top {
                continue;
            }
            assert!(res[m] <= 1e-6, "λ = {lambda}, μ = {mu}, mode {m}: {:e}", res[m]);
        }
    }
}

#[test]
fn prolate_rayleigh_quotients_are_oracle_eigenvalues() {
    let pair = main_pair(c(0.0, 0.0), c(0.0, 1.0));
    let spec = solve_l_eigen(&pair.op, 96).unwrap();
    let (kappas, _) = k_spectrum_from_l(&pair, &spec, 128).unwrap();
    let rule = QuadratureRule::gauss_legendre(128, pair.op.segment).unwrap();
    let oracle = dense_oracle(&discretize_k(&pair.kernel, &rule, &rule).unwrap()).unwrap();
    let eig = oracle.eigenvalues.unwrap();
    for k in &kappas[..5] {
        let d = eig.iter().map(|e| (e - k).norm()).fold(f64::INFINITY, f64::min);
        assert!(d <= 1e-7 * k.norm().max(1.0), "κ = {k}: {d:e}");
    }
}

#[test]
fn symmetric_kernels_give_modes_of_definite_parity() {
    for (lambda, mu) in [(c(0.0, 0.0), c(0.0, 1.0)), (c(1.0, 0.0), c(0.3, 0.0))] {
        let spec = solve_l_eigen(&main_pair(lambda, mu).op, 64).unwrap();
        for n in 0..6 {
            assert!(spec.parity_defect(n) <= 1e-10, "mode {n}: {:e}", spec.parity_defect(n));
        }
    }
}

#[test]
fn second_class_operators_are_hermitian_in_the_orthonormal_basis() {
    let cases = [
        PairCase::C2Item1 { lambda: c(0.0, PI / 2.0), mu: c(0.0, PI / 8.0), alpha1: c(0.0, 0.0), alpha2: c(1.0, 0.0), n: 1 },
        PairCase::C2Item2 { lambda: c(1.0, 0.0), alpha: c(1.0, 0.0), beta: c(0.0, 0.5), n: 1 },
        PairCase::C2Item3 { beta: c(0.0, 1.0), b: 2.0 },
        PairCase::C2Item4 { beta: c(0.0, 0.0), a: 0.0, b: 2.0 },
    ];
    for case in cases {
        let pair = build_pair(&case).unwrap();
        let g = galerkin_matrix(&pair.op, 48).unwrap();
        let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(hermitian_defect(&g) <= 1e-12 * scale, "{case:?}");
    }
}

#[test]
fn sine_kernel_singular_system() {
    let pair = sine_pair();
    let svd = svd_pipeline(&pair, 64, 128, 5).unwrap();
    let src = QuadratureRule::gauss_legendre(128, pair.op.segment).unwrap();
    let tgt = QuadratureRule::gauss_legendre(128, pair.target_op().segment).unwrap();
    let oracle = dense_oracle(&discretize_k(&pair.kernel, &src, &tgt).unwrap()).unwrap();
    for (s, o) in svd.sigmas.iter().zip(&oracle.singular_values) {
        assert!((s - o).abs() <= 1e-6 * o.max(1.0), "σ = {s}, oracle {o}");
    }
    assert!(svd.sigmas.windows(2).all(|w| w[0] > w[1]));
    assert!(svd.gram_u <= 1e-8, "{:e}", svd.gram_u);
    assert!(svd.gram_v <= 1e-6, "{:e}", svd.gram_v);
    assert!(svd.cross_residuals.iter().all(|&r| r <= 1e-6), "{:?}", svd.cross_residuals);
}

fn legendre() -> DiffOp {
    let a = ExpPoly::real_polynomial(&[-1.0, 0.0, 1.0]).unwrap();
    DiffOp::new(a.clone(), a.diff(), ExpPoly::zero(), unit_segment()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn spectrum_follows_affine_changes_of_the_operator(s in 0.2f64..5.0, shift in -3.0f64..3.0) {
        let op = legendre().scale(c(s, 0.0)).shift(c(shift, 0.0));
        let spec = solve_l_eigen(&op, 24).unwrap();
        prop_assert!(spec.self_adjoint);
        for n in 0..5 {
            let want = s * (n * (n + 1)) as f64 + shift;
            prop_assert!((spec.eigenvalues[n].re - want).abs() <= 1e-8 * want.abs().max(1.0));
        }
    }
}
