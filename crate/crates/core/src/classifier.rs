//! The inverse problem: from the coefficients of a kernel about the origin,
//! decide whether a commuting second-order operator can exist and recover
//! its parameters.

use serde::{Deserialize, Serialize};

use crate::catalog::{kernel_laurent, DiffOp, KernelSpec};
use crate::error::{Error, Result};
use crate::expalg::{relative_defect, Cplx, ExpPoly};

/// A coefficient is zero when below this times the largest one.
pub const ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `k(z) − pole/z = Σ kₙ zⁿ/n!`
    Factorial,
    /// `k(z) − pole/z = Σ kₙ zⁿ`
    Plain,
}

/// Residue at the origin plus the coefficients of the regular part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorData {
    pub pole: Cplx,
    pub coeffs: Vec<Cplx>,
    pub convention: Convention,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn scale_of(v: &[Cplx]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl TaylorData {
    pub fn new(pole: Cplx, coeffs: Vec<Cplx>, convention: Convention) -> Result<Self> {
        let d = TaylorData {
            pole,
            coeffs,
            convention,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.len() < 5 {
            return Err(Error::InvalidInput(format!(
                "need at least 5 coefficients, got {}",
                self.coeffs.len()
            )));
        }
        if !self.pole.is_finite() || self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("Taylor coefficients"));
        }
        Ok(())
    }

    /// Coefficients of `k` about 0, up to `order`.
    pub fn from_kernel(k: &KernelSpec, order: usize, convention: Convention) -> Result<Self> {
        let l = kernel_laurent(k, order)?;
        let coeffs = match convention {
            Convention::Factorial => l.factorial,
            Convention::Plain => l.plain,
        };
        Self::new(l.pole, coeffs, convention)
    }

    pub fn to_convention(&self, convention: Convention) -> TaylorData {
        let coeffs = match (self.convention, convention) {
            (a, b) if a == b => self.coeffs.clone(),
            (Convention::Plain, Convention::Factorial) => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * factorial(n))
                .collect(),
            _ => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c / factorial(n))
                .collect(),
        };
        TaylorData {
            pole: self.pole,
            coeffs,
            convention,
        }
    }

    /// Largest magnitude among all coefficients, the residue included.
    pub fn scale(&self) -> f64 {
        scale_of(&self.coeffs).max(self.pole.norm())
    }

    pub fn is_singular(&self) -> bool {
        self.pole.norm() > ZERO_TOL * self.scale()
    }

    /// `[K₀, K₁, …]` with `k(z) = z⁻¹(K₀ + K₁z + …)`.
    pub fn singular_series(&self) -> Vec<Cplx> {
        let p = self.to_convention(Convention::Plain);
        std::iter::once(p.pole).chain(p.coeffs).collect()
    }
}

/// Truncated product of a power series with `e^{τz}`.
fn times_exp(series: &[Cplx], tau: Cplx) -> Vec<Cplx> {
    let n = series.len();
    let mut e = vec![Cplx::new(1.0, 0.0); n];
    for m in 1..n {
        e[m] = e[m - 1] * tau / m as f64;
    }
    (0..n)
        .map(|p| (0..=p).map(|j| series[j] * e[p - j]).sum())
        .collect()
}

/// Multiplies `k` by `e^{τz}` so the first-order coefficient vanishes;
/// singular data is also rescaled to unit residue.
pub fn gauge_normalize(data: &TaylorData) -> Result<(TaylorData, Cplx)> {
    data.validate()?;
    let tol = ZERO_TOL * data.scale();
    if data.is_singular() {
        let k = data.singular_series();
        let tau = -k[1] / k[0];
        let g: Vec<Cplx> = times_exp(&k, tau).into_iter().map(|v| v / k[0]).collect();
        let plain = TaylorData {
            pole: g[0],
            coeffs: g[1..].to_vec(),
            convention: Convention::Plain,
        };
        return Ok((plain.to_convention(data.convention), tau));
    }
    let plain = data.to_convention(Convention::Plain);
    if plain.coeffs[0].norm() <= tol {
        return Err(Error::ZeroLeading);
    }
    let tau = -plain.coeffs[1] / plain.coeffs[0];
    let g = TaylorData {
        pole: Cplx::default(),
        coeffs: times_exp(&plain.coeffs, tau),
        convention: Convention::Plain,
    };
    Ok((g.to_convention(data.convention), tau))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseAB {
    A,
    B,
}

/// Necessary relations for `(a, b, c)` once the singular data is normalized
/// (`K₀ = 1`, `K₁ = 0`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularConstraints {
    pub k2: Cplx,
    pub k3: Cplx,
}

impl SingularConstraints {
    pub fn describe(&self) -> Vec<String> {
        vec![
            format!("c = -a''/3 - 2*({})*a + b'/2 + const", self.k2),
            format!(
                "b''' = a'''' + 24*({k2})*a'' - 72*({k3})*a' - 24*({k2})*b'",
                k2 = self.k2,
                k3 = self.k3
            ),
        ]
    }

    /// Relative defects of the two relations for an operator in the
    /// normalized gauge.
    pub fn residuals(&self, op: &DiffOp) -> [f64; 2] {
        let (a, b, c) = (&op.a, &op.b, &op.c);
        let third = Cplx::new(1.0 / 3.0, 0.0);
        let half = Cplx::new(0.5, 0.0);
        let parts1 = [
            c.clone(),
            a.diff_n(2).scale(third),
            a.scale(self.k2 * 2.0),
            b.diff().scale(-half),
        ];
        // constancy: only the derivative has to vanish
        let r1 = relative_defect(&parts1.iter().map(|p| p.diff()).collect::<Vec<_>>());
        let parts2 = [
            b.diff_n(3),
            a.diff_n(4).neg(),
            a.diff_n(2).scale(self.k2 * -24.0),
            a.diff().scale(self.k3 * 72.0),
            b.diff().scale(self.k2 * 24.0),
        ];
        [r1, relative_defect(&parts2)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    RegularCommuting {
        lambda2: Cplx,
        mu2: Cplx,
        nu: Cplx,
    },
    SingularCandidate {
        alpha1: Cplx,
        case: CaseAB,
        constraints: SingularConstraints,
        relations: Vec<String>,
    },
    Trivial,
    NoCommutant {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub gauge_applied: Cplx,
    pub diagnostics: Vec<String>,
}

/// Analytic kernels: `ν = −3k₂/k₀`, `k₃ = 0`, and `a‴ = λ²a′` with
/// `λ² = −(5k₀k₄ − 9k₂²)/(k₀k₂)`.
pub fn classify_regular(data: &TaylorData) -> Result<ClassificationResult> {
    data.validate()?;
    if data.convention != Convention::Factorial {
        return Err(Error::ConventionMismatch(
            "regular classification expects factorial-normalized coefficients".into(),
        ));
    }
    if data.is_singular() {
        return Err(Error::ConventionMismatch(
            "regular classification expects a kernel without a pole".into(),
        ));
    }
    let k = &data.coeffs;
    let tol = ZERO_TOL * scale_of(k);
    if k[0].norm() <= tol {
        return Err(Error::ZeroLeading);
    }
    if k[1].norm() > tol {
        return Err(Error::NotNormalized(format!("k1 = {} is not zero", k[1])));
    }
    let mut diagnostics = vec![format!("k0..k4 = {:?}", &k[..5])];
    if k[3].norm() > tol {
        return Ok(ClassificationResult {
            verdict: Verdict::NoCommutant {
                reason: format!("k3 = {} must vanish", k[3]),
            },
            gauge_applied: Cplx::default(),
            diagnostics,
        });
    }
    if k[2].norm() <= tol {
        let nonzero: Vec<usize> = (1..k.len()).filter(|&j| k[j].norm() > tol).collect();
        let verdict = if nonzero.is_empty() {
            Verdict::Trivial
        } else {
            Verdict::NoCommutant {
                reason: format!("k2 = 0 forces every higher coefficient to vanish, but k{} does not", nonzero[0]),
            }
        };
        return Ok(ClassificationResult {
            verdict,
            gauge_applied: Cplx::default(),
            diagnostics,
        });
    }
    let nu = -k[2] * 3.0 / k[0];
    let lambda2 = -(k[0] * k[4] * 5.0 - k[2] * k[2] * 9.0) / (k[0] * k[2]);
    let mu2 = lambda2 / 4.0 - nu;
    diagnostics.push(format!("a''' - ({lambda2})*a' = 0, b = a', c = ({nu})*a"));
    Ok(ClassificationResult {
        verdict: Verdict::RegularCommuting { lambda2, mu2, nu },
        gauge_applied: Cplx::default(),
        diagnostics,
    })
}

/// Singular kernels: split on `α₁ = −1080K₃` and hand back the necessary
/// relations for any candidate `(a, b, c)`.
pub fn classify_singular(data: &TaylorData) -> Result<ClassificationResult> {
    data.validate()?;
    if data.convention != Convention::Plain {
        return Err(Error::ConventionMismatch(
            "singular classification expects plain power coefficients".into(),
        ));
    }
    if !data.is_singular() {
        return Err(Error::ConventionMismatch(
            "singular classification expects a simple pole at 0".into(),
        ));
    }
    let k = data.singular_series();
    let tol = ZERO_TOL * scale_of(&k);
    if (k[0] - Cplx::new(1.0, 0.0)).norm() > tol || k[1].norm() > tol {
        return Err(Error::NotNormalized(format!(
            "need K0 = 1 and K1 = 0, got {} and {}",
            k[0], k[1]
        )));
    }
    let alpha1 = -k[3] * 1080.0;
    let case = if alpha1.norm() <= 1080.0 * tol {
        CaseAB::A
    } else {
        CaseAB::B
    };
    let constraints = SingularConstraints { k2: k[2], k3: k[3] };
    let mut relations = constraints.describe();
    relations.push(match case {
        CaseAB::A => "a'''' + b1*a'' + b2*a = b0".to_string(),
        CaseAB::B => "a'''''' + b3*a'''' + b1*a'' + b2*a = b0".to_string(),
    });
    Ok(ClassificationResult {
        verdict: Verdict::SingularCandidate {
            alpha1,
            case,
            constraints,
            relations,
        },
        gauge_applied: Cplx::default(),
        diagnostics: vec![format!("K0..K5 = {:?}", &k[..k.len().min(6)])],
    })
}

/// Gauge-normalizes and dispatches on the presence of a pole.
pub fn classify(data: &TaylorData) -> Result<ClassificationResult> {
    data.validate()?;
    if data.is_singular() {
        let (g, tau) = gauge_normalize(&data.to_convention(Convention::Plain))?;
        let mut r = classify_singular(&g)?;
        r.gauge_applied = tau;
        return Ok(r);
    }
    let fact = data.to_convention(Convention::Factorial);
    let (g, tau) = match gauge_normalize(&fact) {
        Ok(v) => v,
        Err(Error::ZeroLeading) if fact.coeffs.iter().any(|c| *c != Cplx::default()) => {
            return Ok(ClassificationResult {
                verdict: Verdict::NoCommutant {
                    reason: "k0 = 0 forces every coefficient to vanish".into(),
                },
                gauge_applied: Cplx::default(),
                diagnostics: vec![],
            });
        }
        Err(e) => return Err(e),
    };
    let mut r = classify_regular(&g)?;
    r.gauge_applied = tau;
    Ok(r)
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Certifies a concrete operator against coefficient data: the relations
/// obtained by differentiating the residue identity at `z = 0` (analytic
/// kernels, `n = 0..3`), or the Taylor coefficients of `z³` times it up to
/// order 5 (kernels with a pole). Returns the largest relative defect.
pub fn verify_candidate(data: &TaylorData, op: &DiffOp) -> Result<f64> {
    data.validate()?;
    let (a, b, c) = (&op.a, &op.b, &op.c);
    let ad: Vec<ExpPoly> = (0..=6).map(|m| a.diff_n(m)).collect();
    let bd: Vec<ExpPoly> = (0..=6).map(|m| b.diff_n(m)).collect();
    let cd: Vec<ExpPoly> = (0..=6).map(|m| c.diff_n(m)).collect();
    let mut worst: f64 = 0.0;
    if !data.is_singular() {
        let k = data.to_convention(Convention::Factorial).coeffs;
        for n in 0..=3 {
            let mut parts = vec![
                ad[1].scale(k[n + 1] * 2.0),
                bd[1].scale(k[n]),
                ad[2].scale(-k[n]),
            ];
            for j in 0..n {
                let w = binom(n, j);
                parts.push(ad[n - j].scale(k[j + 2] * w));
                parts.push(bd[n - j].scale(k[j + 1] * w));
                parts.push(cd[n - j].scale(k[j] * w));
            }
            worst = worst.max(relative_defect(&parts));
        }
        return Ok(worst);
    }
    let k = data.singular_series();
    let kk = |j: usize| k.get(j).copied().unwrap_or_default();
    let inv_fact = |m: usize| Cplx::new(1.0 / factorial(m), 0.0);
    // Taylor coefficients in z of a(y+z) − a(y), 2a′ + b(y+z) − b(y), and
    // c(y+z) − c(y) + b′ − a″
    let am = |m: usize| if m == 0 { ExpPoly::zero() } else { ad[m].scale(inv_fact(m)) };
    let bm = |m: usize| {
        if m == 0 {
            ad[1].scale(Cplx::new(2.0, 0.0))
        } else {
            bd[m].scale(inv_fact(m))
        }
    };
    let cm = |m: usize| if m == 0 { bd[1].sub(&ad[2]) } else { cd[m].scale(inv_fact(m)) };
    for p in 0..=5usize {
        let mut parts = Vec::new();
        for j in 0..=p {
            let f = (j as f64 - 1.0) * (j as f64 - 2.0);
            if f != 0.0 {
                parts.push(am(p - j).scale(kk(j) * f));
            }
            if j < p && j != 1 {
                parts.push(bm(p - j - 1).scale(kk(j) * (j as f64 - 1.0)));
            }
            if j + 2 <= p {
                parts.push(cm(p - j - 2).scale(kk(j)));
            }
        }
        worst = worst.max(relative_defect(&parts));
    }
    Ok(worst)
}

/// Largest relative residual of the kernel equation
/// `k″ + λ coth(λz/2) k′ + νk = 0` (or `zk″ + 2k′ + νzk = 0` for `λ = 0`)
/// over `grid`, together with its `u = k sinh(λz/2)` form `u″ + (ν − λ²/4)u = 0`.
pub fn fit_kernel_ode(k: &KernelSpec, lambda: Cplx, nu: Cplx, grid: &[Cplx]) -> Result<f64> {
    let ev = k.evaluator();
    let mut worst: f64 = 0.0;
    for &z in grid {
        let kv = ev.eval(z)?;
        if lambda.norm() == 0.0 {
            let r = z * kv.d2k + kv.dk * 2.0 + nu * z * kv.k;
            let s = (z * kv.d2k).norm() + 2.0 * kv.dk.norm() + (nu * z * kv.k).norm();
            worst = worst.max(ratio(r.norm(), s));
            // u = zk: u″ = zk″ + 2k′
            let u = z * kv.k;
            let u2 = z * kv.d2k + kv.dk * 2.0;
            worst = worst.max(ratio((u2 + nu * u).norm(), u2.norm() + (nu * u).norm()));
            continue;
        }
        let sh = (lambda * z * 0.5).sinh();
        let ch = (lambda * z * 0.5).cosh();
        if sh.norm() <= f64::EPSILON * ch.norm() {
            return Err(Error::PoleHit(z));
        }
        let coth = ch / sh;
        let r = kv.d2k + lambda * coth * kv.dk + nu * kv.k;
        let s = kv.d2k.norm() + (lambda * coth * kv.dk).norm() + (nu * kv.k).norm();
        worst = worst.max(ratio(r.norm(), s));
        let u = kv.k * sh;
        let u2 = kv.d2k * sh + lambda * kv.dk * ch + lambda * lambda * 0.25 * kv.k * sh;
        let shift = nu - lambda * lambda * 0.25;
        worst = worst.max(ratio((u2 + shift * u).norm(), u2.norm() + (shift * u).norm()));
    }
    Ok(worst)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_pair, DenomKind, PairCase};
    use crate::expalg::c;

    #[test]
    fn gauge_inverse_of_exponential() {
        // e^z / z
        let k = KernelSpec::new(ExpPoly::constant(c(1.0, 0.0)), DenomKind::Z, c(1.0, 0.0)).unwrap();
        let d = TaylorData::from_kernel(&k, 6, Convention::Plain).unwrap();
        let (g, tau) = gauge_normalize(&d).unwrap();
        assert!((tau - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((g.pole - c(1.0, 0.0)).norm() < 1e-14);
        assert!(g.coeffs.iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn prolate_recovery() {
        let mu = c(0.0, 1.0);
        let pair = build_pair(&PairCase::Main { lambda: c(0.0, 0.0), mu, alpha1: c(1.0, 0.0), alpha2: c(0.0, 0.0) }).unwrap();
        let d = TaylorData::from_kernel(&pair.kernel, 6, Convention::Factorial).unwrap();
        let r = classify(&d).unwrap();
        let Verdict::RegularCommuting { lambda2, mu2, nu } = r.verdict else { panic!("{:?}", r.verdict) };
        assert!(lambda2.norm() < 1e-10);
        assert!((mu2 - mu * mu).norm() < 1e-10);
        assert!((nu + mu * mu).norm() < 1e-10);
        assert!(verify_candidate(&d, &pair.op).unwrap() < 1e-12);
    }

    #[test]
    fn conversions_roundtrip() {
        let d = TaylorData::new(c(0.0, 0.0), (0..6).map(|n| c(n as f64 + 1.0, 0.5)).collect(), Convention::Plain).unwrap();
        let back = d.to_convention(Convention::Factorial).to_convention(Convention::Plain);
        for (x, y) in d.coeffs.iter().zip(&back.coeffs) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
