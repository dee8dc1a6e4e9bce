//! Regular/singular split for two-segment pairs: target endpoints must be
//! zeros of `a` that avoid the logarithmic singularities `zⱼ ± 1` of `Ku`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::pairs::{CommutingPair, PairCase};
use crate::error::{Error, Result};
use crate::expalg::Cplx;

const POINT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Regular,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointWitness {
    pub point: Cplx,
    pub zero_of_a: bool,
    pub log_singular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub verdict: Regularity,
    pub poles: Vec<Cplx>,
    pub log_points: Vec<Cplx>,
    pub zeros_of_a: Vec<Cplx>,
    pub removable: Vec<Cplx>,
    pub witnesses: Vec<EndpointWitness>,
}

fn near(p: Cplx, set: &[Cplx]) -> bool {
    set.iter().any(|q| (p - q).norm() <= POINT_TOL * (1.0 + p.norm()))
}

fn dedup(mut v: Vec<Cplx>) -> Vec<Cplx> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v.dedup_by(|a, b| (*a - *b).norm() <= POINT_TOL * (1.0 + a.norm()));
    v
}

/// Zeros of the leading coefficient within `radius` of `center`, from the
/// closed form of each family.
fn zeros_of_a(case: &PairCase, center: Cplx, radius: f64) -> Vec<Cplx> {
    let one = Cplx::new(1.0, 0.0);
    let pts = match *case {
        PairCase::C2Item1 { lambda, .. } | PairCase::C2Item2 { lambda, .. } => {
            // cosh(λy) = cosh λ  ⇔  y = ±1 + 2πik/λ
            let step = Cplx::new(0.0, 2.0 * PI) / lambda;
            let kmax = ((center.norm() + radius) / step.norm()).ceil() as i64 + 1;
            (-kmax..=kmax)
                .flat_map(|k| [one + step * k as f64, -one + step * k as f64])
                .collect()
        }
        PairCase::C2Item3 { b, .. } => vec![-one, one, Cplx::new(-b, 0.0), Cplx::new(b, 0.0)],
        PairCase::C2Item4 { a, b, .. } => vec![-one, one, Cplx::new(a, 0.0), Cplx::new(b, 0.0)],
        _ => Vec::new(),
    };
    dedup(pts.into_iter().filter(|p| (p - center).norm() <= radius).collect())
}

pub fn classify_regularity(pair: &CommutingPair) -> Result<RegularityReport> {
    let Some(target) = &pair.op_target else {
        return Err(Error::InvalidInput(
            "regularity classification needs a two-segment pair".into(),
        ));
    };
    if !pair.case.is_c2() {
        return Err(Error::InvalidInput(format!(
            "{} is not a two-segment family",
            pair.case.name()
        )));
    }
    let (ta, tb) = target.segment;
    let (sa, sb) = pair.op.segment;
    let mid_t = (ta + tb) * 0.5;
    let half_t = (tb - ta).norm() * 0.5;
    let window = half_t + 2.0;
    let zeros = zeros_of_a(&pair.case, mid_t, window);
    // poles whose shifted copies can reach the window
    let mid_s = (sa + sb) * 0.5;
    let half_s = (sb - sa).norm() * 0.5;
    let poles: Vec<Cplx> = pair
        .kernel
        .poles_near(mid_t - mid_s, window + half_s + 1.0)
        .into_iter()
        .map(|(z, _)| z)
        .collect();
    let one = Cplx::new(1.0, 0.0);
    let log_points = dedup(poles.iter().flat_map(|&z| [z - one, z + one]).collect());
    let removable: Vec<Cplx> = zeros
        .iter()
        .copied()
        .filter(|z| !near(*z, &log_points))
        .collect();
    let witnesses: Vec<EndpointWitness> = [ta, tb]
        .iter()
        .map(|&p| EndpointWitness {
            point: p,
            zero_of_a: near(p, &zeros),
            log_singular: near(p, &log_points),
        })
        .collect();
    let verdict = if witnesses.iter().all(|w| w.zero_of_a && !w.log_singular) {
        Regularity::Regular
    } else {
        Regularity::Singular
    };
    Ok(RegularityReport {
        verdict,
        poles,
        log_points,
        zeros_of_a: zeros,
        removable,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::pairs::build_pair;
    use crate::expalg::c;

    #[test]
    fn sine_kernel_three_to_five_is_regular() {
        let pair = build_pair(&PairCase::C2Item1 {
            lambda: c(0.0, PI / 2.0),
            mu: c(0.0, PI / 8.0),
            alpha1: c(0.0, 0.0),
            alpha2: c(1.0, 0.0),
            n: 1,
        })
        .unwrap();
        let t = pair.op_target.as_ref().unwrap().segment;
        assert!((t.0 - c(3.0, 0.0)).norm() < 1e-14 && (t.1 - c(5.0, 0.0)).norm() < 1e-14);
        let r = classify_regularity(&pair).unwrap();
        assert_eq!(r.verdict, Regularity::Regular);
        assert!(near(c(3.0, 0.0), &r.removable) && near(c(5.0, 0.0), &r.removable));
        assert!(near(c(7.0, 0.0), &r.log_points));
    }

    #[test]
    fn generic_item1_is_singular() {
        let pair = build_pair(&PairCase::C2Item1 {
            lambda: c(1.0, 0.0),
            mu: c(0.4, 0.0),
            alpha1: c(1.0, 0.0),
            alpha2: c(0.5, 0.0),
            n: 1,
        })
        .unwrap();
        assert_eq!(classify_regularity(&pair).unwrap().verdict, Regularity::Singular);
    }

    #[test]
    fn hilbert_item4_is_regular() {
        let pair = build_pair(&PairCase::C2Item4 { beta: c(0.0, 0.0), a: 0.0, b: 2.0 }).unwrap();
        let r = classify_regularity(&pair).unwrap();
        assert_eq!(r.verdict, Regularity::Regular);
        assert_eq!(r.poles.len(), 1);
    }
}
