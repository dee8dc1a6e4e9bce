//! Kernels `k(z) = e^{τz} N(z) / D(z)` with `D ∈ {1, z, sinh(λz/2)}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expalg::{Cplx, ExpPoly};

/// Terms kept in Laurent expansions about denominator zeros.
pub const SERIES_TERMS: usize = 30;

/// Inside this distance of a non-removable pole evaluation is refused.
pub const POLE_RADIUS: f64 = 1e-12;

/// Relative size below which the numerator is taken to vanish at a
/// denominator zero (the singularity is then removable).
pub const REMOVABLE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "lambda")]
pub enum DenomKind {
    One,
    Z,
    SinhHalf(Cplx),
}

impl DenomKind {
    pub fn as_exppoly(&self) -> ExpPoly {
        match *self {
            DenomKind::One => ExpPoly::constant(Cplx::new(1.0, 0.0)),
            DenomKind::Z => ExpPoly::identity(),
            DenomKind::SinhHalf(l) => ExpPoly::sinh(l * 0.5),
        }
    }

    /// Distance between consecutive denominator zeros (infinite for `z`).
    pub fn spacing(&self) -> f64 {
        match *self {
            DenomKind::One | DenomKind::Z => f64::INFINITY,
            DenomKind::SinhHalf(l) => 2.0 * PI / l.norm(),
        }
    }

    /// The zero `2πin/λ` (or `0`), by index.
    pub fn zero(&self, n: i64) -> Option<Cplx> {
        match *self {
            DenomKind::One => None,
            DenomKind::Z => (n == 0).then_some(Cplx::new(0.0, 0.0)),
            DenomKind::SinhHalf(l) => Some(Cplx::new(0.0, 2.0 * PI * n as f64) / l),
        }
    }

    /// Index of the zero closest to `z`.
    pub fn nearest_zero(&self, z: Cplx) -> Option<(i64, Cplx)> {
        match *self {
            DenomKind::One => None,
            DenomKind::Z => Some((0, Cplx::new(0.0, 0.0))),
            DenomKind::SinhHalf(l) => {
                let n = (z * l / Cplx::new(0.0, 2.0 * PI)).re.round() as i64;
                self.zero(n).map(|zn| (n, zn))
            }
        }
    }

    /// Zeros within `radius` of `center`.
    pub fn zeros_near(&self, center: Cplx, radius: f64) -> Vec<(i64, Cplx)> {
        match *self {
            DenomKind::One => Vec::new(),
            DenomKind::Z => {
                if center.norm() <= radius {
                    vec![(0, Cplx::new(0.0, 0.0))]
                } else {
                    Vec::new()
                }
            }
            DenomKind::SinhHalf(_) => {
                let sp = self.spacing();
                let nmax = ((center.norm() + radius) / sp).ceil() as i64 + 1;
                (-nmax..=nmax)
                    .filter_map(|n| self.zero(n).map(|z| (n, z)))
                    .filter(|(_, z)| (z - center).norm() <= radius)
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub numerator: ExpPoly,
    pub denom: DenomKind,
    #[serde(default)]
    pub tau: Cplx,
}

/// Laurent data about a denominator zero `z₀`:
/// `k(z₀ + h) = pole/h + Σₘ regular[m] hᵐ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalLaurent {
    pub center: Cplx,
    pub pole: Cplx,
    pub removable: bool,
    pub regular: Vec<Cplx>,
}

impl LocalLaurent {
    /// `(k, k′, k″)` at offset `h`, with the pole part included.
    pub fn eval(&self, h: Cplx) -> (Cplx, Cplx, Cplx) {
        let (mut v, mut d1, mut d2) = (Cplx::default(), Cplx::default(), Cplx::default());
        for (m, &q) in self.regular.iter().enumerate().rev() {
            let mf = m as f64;
            v = v * h + q;
            if m >= 1 {
                d1 = d1 * h + q * mf;
            }
            if m >= 2 {
                d2 = d2 * h + q * (mf * (mf - 1.0));
            }
        }
        if self.pole != Cplx::default() {
            let inv = h.inv();
            v += self.pole * inv;
            d1 -= self.pole * inv * inv;
            d2 += self.pole * inv * inv * inv * 2.0;
        }
        (v, d1, d2)
    }
}

/// Value and first two derivatives of a kernel at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub k: Cplx,
    pub dk: Cplx,
    pub d2k: Cplx,
}

impl KernelSpec {
    pub fn new(numerator: ExpPoly, denom: DenomKind, tau: Cplx) -> Result<Self> {
        if let DenomKind::SinhHalf(l) = denom {
            if l.norm() == 0.0 {
                return Err(Error::ParameterDomain("sinh denominator needs λ ≠ 0".into()));
            }
        }
        Ok(KernelSpec {
            numerator,
            denom,
            tau,
        })
    }

    /// Numerator with the gauge folded in, `G = e^{τz} N`.
    pub fn gauged_numerator(&self) -> ExpPoly {
        self.numerator.shift_exponents(self.tau)
    }

    pub fn evaluator(&self) -> KernelEval {
        let g = self.gauged_numerator();
        let d = self.denom.as_exppoly();
        KernelEval {
            denom: self.denom,
            g1: g.diff(),
            g2: g.diff_n(2),
            d1: d.diff(),
            d2: d.diff_n(2),
            g,
            d,
        }
    }

    /// Single-value evaluation; see [`KernelEval::eval`].
    pub fn eval(&self, z: Cplx) -> Result<Cplx> {
        self.evaluator().eval(z).map(|v| v.k)
    }

    /// Trivial in the sense of being an exponential polynomial itself.
    pub fn is_trivial(&self) -> bool {
        let g = self.gauged_numerator();
        match self.denom {
            DenomKind::One => true,
            DenomKind::Z => g.terms().iter().all(|t| {
                let p0 = t.poly.first().copied().unwrap_or_default();
                p0.norm() <= REMOVABLE_TOL * g.max_coeff().max(f64::MIN_POSITIVE)
            }),
            DenomKind::SinhHalf(l) => {
                // divisibility of G·e^{λz/2} by e^{λz} − 1: sum the polynomials
                // in each exponent class modulo λ and test for zero
                let mut classes: Vec<(Cplx, Vec<Cplx>)> = Vec::new();
                for t in g.terms() {
                    let slot = classes.iter_mut().find(|(e, _)| {
                        let q = (t.exp - *e) / l;
                        (q.re - q.re.round()).abs() < 1e-9 && q.im.abs() < 1e-9
                    });
                    match slot {
                        Some((_, acc)) => {
                            if acc.len() < t.poly.len() {
                                acc.resize(t.poly.len(), Cplx::default());
                            }
                            for (a, p) in acc.iter_mut().zip(&t.poly) {
                                *a += p;
                            }
                        }
                        None => classes.push((t.exp, t.poly.clone())),
                    }
                }
                let tol = REMOVABLE_TOL * g.max_coeff().max(f64::MIN_POSITIVE);
                classes
                    .iter()
                    .all(|(_, p)| p.iter().all(|c| c.norm() <= tol))
            }
        }
    }

    /// 1 when `k` has a genuine pole at the origin, else 0.
    pub fn pole_order_at_zero(&self) -> u8 {
        match self.denom {
            DenomKind::One => 0,
            _ => {
                let l = self.evaluator().laurent_at(Cplx::default());
                u8::from(!l.removable)
            }
        }
    }

    /// Genuine (non-removable) poles within `radius` of `center`, with residues.
    pub fn poles_near(&self, center: Cplx, radius: f64) -> Vec<(Cplx, Cplx)> {
        let ev = self.evaluator();
        self.denom
            .zeros_near(center, radius)
            .into_iter()
            .filter_map(|(_, z)| {
                let l = ev.laurent_at(z);
                (!l.removable).then_some((z, l.pole))
            })
            .collect()
    }
}

/// Cached numerator/denominator derivatives for repeated evaluation.
#[derive(Clone, Debug)]
pub struct KernelEval {
    denom: DenomKind,
    g: ExpPoly,
    g1: ExpPoly,
    g2: ExpPoly,
    d: ExpPoly,
    d1: ExpPoly,
    d2: ExpPoly,
}

impl KernelEval {
    /// Radius around a denominator zero inside which the Laurent path is used.
    pub fn series_radius(&self) -> f64 {
        match self.denom {
            DenomKind::One => 0.0,
            _ => (0.25 * self.denom.spacing()).min(0.5),
        }
    }

    /// Laurent expansion about a zero `z₀` of the denominator.
    pub fn laurent_at(&self, z0: Cplx) -> LocalLaurent {
        let m = SERIES_TERMS;
        let gs = self.g.taylor_at(z0, m);
        let ds = self.d.taylor_at(z0, m + 1);
        // G / (D/h): D₀ vanishes at a zero, so shift by one
        let dt = &ds[1..];
        let mut q = vec![Cplx::default(); m + 1];
        for i in 0..=m {
            let mut acc = gs[i];
            for j in 1..=i {
                acc -= dt[j] * q[i - j];
            }
            q[i] = acc / dt[0];
        }
        let removable = gs[0].norm() <= REMOVABLE_TOL * self.g.eval_magnitude(z0).max(f64::MIN_POSITIVE);
        let pole = if removable { Cplx::default() } else { q[0] };
        LocalLaurent {
            center: z0,
            pole,
            removable,
            regular: q[1..].to_vec(),
        }
    }

    /// Quotient-rule evaluation with no special handling near zeros of `D`.
    pub fn eval_direct(&self, z: Cplx) -> KernelValue {
        let (g, g1, g2) = (self.g.eval(z), self.g1.eval(z), self.g2.eval(z));
        let (d, d1, d2) = (self.d.eval(z), self.d1.eval(z), self.d2.eval(z));
        let k = g / d;
        let dk = (g1 - k * d1) / d;
        let d2k = (g2 - dk * d1 * 2.0 - k * d2) / d;
        KernelValue { k, dk, d2k }
    }

    /// Laurent evaluation about the denominator zero nearest to `z`.
    pub fn eval_series(&self, z: Cplx) -> Result<KernelValue> {
        let Some((_, z0)) = self.denom.nearest_zero(z) else {
            return Ok(self.eval_direct(z));
        };
        let l = self.laurent_at(z0);
        let h = z - z0;
        if !l.removable && h.norm() < POLE_RADIUS {
            return Err(Error::PoleHit(z));
        }
        let (k, dk, d2k) = l.eval(h);
        Ok(KernelValue { k, dk, d2k })
    }

    /// Series within [`KernelEval::series_radius`] of a denominator zero,
    /// quotient rule elsewhere.
    pub fn eval(&self, z: Cplx) -> Result<KernelValue> {
        match self.denom.nearest_zero(z) {
            Some((_, z0)) if (z - z0).norm() < self.series_radius() => self.eval_series(z),
            _ => {
                let v = self.eval_direct(z);
                if !(v.k.is_finite() && v.dk.is_finite() && v.d2k.is_finite()) {
                    return Err(Error::PoleHit(z));
                }
                Ok(v)
            }
        }
    }

    /// `k(z) − Σ rₚ/(z − zₚ)` over the given poles, evaluated without
    /// cancellation near each of them.
    pub fn eval_regular_part(&self, z: Cplx, poles: &[(Cplx, Cplx)]) -> Result<Cplx> {
        let near = poles
            .iter()
            .find(|(zp, _)| (z - zp).norm() < self.series_radius());
        let mut v = match near {
            Some(&(zp, _)) => {
                let mut l = self.laurent_at(zp);
                l.pole = Cplx::default();
                l.eval(z - zp).0
            }
            None => self.eval(z)?.k,
        };
        for &(zp, r) in poles {
            if near.is_some_and(|&(zn, _)| zn == zp) {
                continue;
            }
            v -= r / (z - zp);
        }
        Ok(v)
    }
}
