use commutant::catalog::{build_unchecked, gauge_transform, CommutingPair, PairCase};
use commutant::classifier::{classify, verify_candidate, CaseAB, Convention, TaylorData, Verdict};
use commutant::{c, Cplx};
use proptest::prelude::*;

fn main_pair(lambda: Cplx, mu: Cplx, alpha1: Cplx, alpha2: Cplx) -> CommutingPair {
    build_unchecked(&PairCase::Main { lambda, mu, alpha1, alpha2 }).unwrap()
}

fn analytic_data(pair: &CommutingPair) -> TaylorData {
    TaylorData::from_kernel(&pair.kernel, 6, Convention::Factorial).unwrap()
}

fn close(a: Cplx, b: Cplx, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// λ on the real or imaginary axis, μ anywhere, away from the trivial lines
/// `μ = ±λ/2`.
fn arb_params() -> impl Strategy<Value = (Cplx, Cplx)> {
    (0.3f64..2.5, any::<bool>(), -1.5f64..1.5, -1.5f64..1.5)
        .prop_map(|(l, imag, mr, mi)| {
            let lambda = if imag { c(0.0, l) } else { c(l, 0.0) };
            (lambda, c(mr, mi))
        })
        .prop_filter("trivial kernel", |(l, m)| {
            (m - l / 2.0).norm() > 0.1 && (m + l / 2.0).norm() > 0.1
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn analytic_kernels_recover_their_parameters((lambda, mu) in arb_params()) {
        let pair = main_pair(lambda, mu, c(1.0, 0.0), c(0.0, 0.0));
        let data = analytic_data(&pair);
        let r = classify(&data).unwrap();
        let Verdict::RegularCommuting { lambda2, mu2, nu } = r.verdict else {
            return Err(TestCaseError::fail(format!("{:?}", r.verdict)));
        };
        prop_assert!(close(lambda2, lambda * lambda, 1e-8), "λ² = {}", lambda2);
        prop_assert!(close(mu2, mu * mu, 1e-8), "μ² = {}", mu2);
        prop_assert!(close(nu, lambda * lambda / 4.0 - mu * mu, 1e-8), "ν = {}", nu);
        prop_assert!(verify_candidate(&data, &pair.op).unwrap() <= 1e-10);
    }

    #[test]
    fn classification_is_gauge_equivariant(
        (lambda, mu) in arb_params(),
        tr in -1.0f64..1.0,
        ti in -1.0f64..1.0,
    ) {
        let tau = c(tr, ti);
        let pair = main_pair(lambda, mu, c(1.0, 0.0), c(0.0, 0.0));
        let base = classify(&analytic_data(&pair)).unwrap();
        let gauged = gauge_transform(&pair, tau);
        let data = analytic_data(&gauged);
        let r = classify(&data).unwrap();
        prop_assert!(close(r.gauge_applied, -tau, 1e-10), "{}", r.gauge_applied);
        match (base.verdict, r.verdict) {
            (
                Verdict::RegularCommuting { lambda2: l0, mu2: m0, .. },
                Verdict::RegularCommuting { lambda2: l1, mu2: m1, .. },
            ) => {
                prop_assert!(close(l1, l0, 1e-8));
                prop_assert!(close(m1, m0, 1e-8));
            }
            other => return Err(TestCaseError::fail(format!("{other:?}"))),
        }
        prop_assert!(verify_candidate(&data, &gauged.op).unwrap() <= 1e-10);
    }
}

#[test]
fn third_coefficient_perturbation_is_rejected() {
    let pair = main_pair(c(1.3, 0.0), c(0.4, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let mut data = analytic_data(&pair);
    let k0 = data.coeffs[0].norm();
    data.coeffs[3] += c(1e-3 * k0, 0.0);
    assert!(matches!(classify(&data).unwrap().verdict, Verdict::NoCommutant { .. }));
}

#[test]
fn fourth_coefficient_perturbation_breaks_the_operator() {
    let pair = main_pair(c(1.3, 0.0), c(0.4, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let data = analytic_data(&pair);
    assert!(verify_candidate(&data, &pair.op).unwrap() <= 1e-10);
    let mut bent = data.clone();
    bent.coeffs[4] *= 1.001;
    assert!(verify_candidate(&bent, &pair.op).unwrap() > 1e-6);
}

#[test]
fn singular_kernels_split_on_the_third_coefficient() {
    let odd = main_pair(c(1.1, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    let mixed = main_pair(c(1.1, 0.0), c(0.3, 0.0), c(1.0, 0.0), c(1.0, 0.0));
    for (pair, want) in [(odd, CaseAB::A), (mixed, CaseAB::B)] {
        let data = TaylorData::from_kernel(&pair.kernel, 6, Convention::Plain).unwrap();
        let r = classify(&data).unwrap();
        let Verdict::SingularCandidate { case, .. } = r.verdict else {
            panic!("{:?}", r.verdict);
        };
        assert_eq!(case, want);
        assert!(verify_candidate(&data, &pair.op).unwrap() <= 1e-10);
    }
}
