//! Exact-coefficient algebra for exponential polynomials
//! `f(y) = Σⱼ pⱼ(y) e^{λⱼ y}`.
//!
//! Every coefficient function of the commuting operators (and every kernel
//! numerator) lives in this class, which is closed under sums, products,
//! derivatives and shifts of the argument. Hyperbolic and trigonometric
//! functions are expanded into exponentials at construction.
//!
//! Values are kept in a canonical form: exponents pairwise distinct (merged
//! within [`MERGE_TOL`]), trailing zero polynomial coefficients trimmed and
//! terms sorted lexicographically by `(Re λ, Im λ)`. Two canonical values with
//! identical terms are structurally equal.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Cplx = Complex64;

/// Exponents closer than this (complex distance) are treated as equal.
pub const MERGE_TOL: f64 = 1e-12;

/// Highest polynomial degree a term may carry.
pub const MAX_DEGREE: usize = 8;

/// Shorthand for a complex literal.
#[inline]
pub fn c(re: f64, im: f64) -> Cplx {
    Cplx::new(re, im)
}

/// Validating complex constructor.
pub fn cplx(re: f64, im: f64) -> Result<Cplx> {
    if re.is_finite() && im.is_finite() {
        Ok(Cplx::new(re, im))
    } else {
        Err(Error::NonFinite("complex scalar"))
    }
}

fn is_finite(z: Cplx) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// One summand `p(y) e^{λ y}`; `poly` is in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exp: Cplx,
    pub poly: Vec<Cplx>,
}

impl Term {
    fn degree(&self) -> usize {
        self.poly.len().saturating_sub(1)
    }

    fn horner(&self, y: Cplx) -> Cplx {
        self.poly.iter().rev().fold(Cplx::new(0.0, 0.0), |acc, &p| acc * y + p)
    }
}

#[derive(Deserialize)]
struct ExpPolyRepr {
    terms: Vec<Term>,
}

/// A finite sum of polynomial-times-exponential terms.
///
/// Besides its terms the value carries the largest coefficient magnitude
/// of the inputs that produced it (`scale`). [`ExpPoly::is_zero`] uses it to
/// decide cancellation relative to those inputs; a freshly constructed value
/// has no such history and is compared in absolute terms.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ExpPolyRepr")]
pub struct ExpPoly {
    terms: Vec<Term>,
    #[serde(skip)]
    scale: f64,
}

impl TryFrom<ExpPolyRepr> for ExpPoly {
    type Error = Error;

    fn try_from(raw: ExpPolyRepr) -> Result<Self> {
        ExpPoly::from_terms(raw.terms.into_iter().map(|t| (t.exp, t.poly)))
    }
}

impl PartialEq for ExpPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Default for ExpPoly {
    fn default() -> Self {
        Self::zero()
    }
}

fn cmp_exp(a: &Cplx, b: &Cplx) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn add_into(acc: &mut Vec<Cplx>, p: &[Cplx]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Cplx::new(0.0, 0.0));
    }
    for (a, &b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

fn convolve(p: &[Cplx], q: &[Cplx]) -> Vec<Cplx> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Cplx::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Coefficients of `p(y + s)` in ascending powers of `y`.
fn shift_poly(p: &[Cplx], s: Cplx) -> Vec<Cplx> {
    // repeated synthetic division (Taylor shift)
    let mut q = p.to_vec();
    let n = q.len();
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let hi = q[j + 1];
            q[j] += s * hi;
        }
    }
    q
}

fn poly_diff(p: &[Cplx]) -> Vec<Cplx> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| a * k as f64)
        .collect()
}

fn max_abs(p: &[Cplx]) -> f64 {
    p.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly {
            terms: Vec::new(),
            scale: 0.0,
        }
    }

    pub fn constant(value: Cplx) -> Self {
        Self::from_terms([(Cplx::new(0.0, 0.0), vec![value])]).expect("constant is always valid")
    }

    /// Pure polynomial with coefficients in ascending degree.
    pub fn polynomial(coeffs: &[Cplx]) -> Result<Self> {
        Self::from_terms([(Cplx::new(0.0, 0.0), coeffs.to_vec())])
    }

    /// Real-coefficient polynomial convenience constructor.
    pub fn real_polynomial(coeffs: &[f64]) -> Result<Self> {
        let cs: Vec<Cplx> = coeffs.iter().map(|&x| Cplx::new(x, 0.0)).collect();
        Self::polynomial(&cs)
    }

    /// The identity function `y`.
    pub fn identity() -> Self {
        Self::real_polynomial(&[0.0, 1.0]).expect("degree one")
    }

    /// `e^{λ y}`.
    pub fn exponential(lambda: Cplx) -> Self {
        Self::from_terms([(lambda, vec![Cplx::new(1.0, 0.0)])]).expect("single exponential")
    }

    /// `cosh(λ y) = (e^{λy} + e^{−λy})/2`.
    pub fn cosh(lambda: Cplx) -> Self {
        let half = Cplx::new(0.5, 0.0);
        Self::from_terms([(lambda, vec![half]), (-lambda, vec![half])]).expect("cosh")
    }

    /// `sinh(λ y) = (e^{λy} − e^{−λy})/2`.
    pub fn sinh(lambda: Cplx) -> Self {
        let half = Cplx::new(0.5, 0.0);
        Self::from_terms([(lambda, vec![half]), (-lambda, vec![-half])]).expect("sinh")
    }

    /// `cos(ω y) = cosh(iω y)`.
    pub fn cos(omega: Cplx) -> Self {
        Self::cosh(omega * Cplx::i())
    }

    /// `sin(ω y) = −i sinh(iω y)`.
    pub fn sin(omega: Cplx) -> Self {
        Self::sinh(omega * Cplx::i()).scale(-Cplx::i())
    }

    /// Builds a canonical value from arbitrary `(exponent, poly)` pairs.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cplx, Vec<Cplx>)>,
    {
        let mut raw = Vec::new();
        for (exp, poly) in terms {
            if !is_finite(exp) || !poly.iter().all(|&p| is_finite(p)) {
                return Err(Error::NonFinite("exponential polynomial term"));
            }
            raw.push(Term { exp, poly });
        }
        Self::canonical(raw, 0.0)
    }

    fn canonical(raw: Vec<Term>, scale: f64) -> Result<Self> {
        let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
        for t in raw {
            match merged
                .iter_mut()
                .find(|m| (m.exp - t.exp).norm() <= MERGE_TOL)
            {
                Some(m) => add_into(&mut m.poly, &t.poly),
                None => merged.push(t),
            }
        }
        for t in merged.iter_mut() {
            while t.poly.last().is_some_and(|z| z.re == 0.0 && z.im == 0.0) {
                t.poly.pop();
            }
        }
        merged.retain(|t| !t.poly.is_empty());
        merged.sort_by(|a, b| cmp_exp(&a.exp, &b.exp));
        if let Some(t) = merged.iter().find(|t| t.degree() > MAX_DEGREE) {
            return Err(Error::DegreeCap {
                degree: t.degree(),
                cap: MAX_DEGREE,
            });
        }
        Ok(ExpPoly {
            terms: merged,
            scale,
        })
    }

    /// Re-canonicalizes; idempotent on canonical values.
    pub fn normalized(&self) -> Self {
        Self::canonical(self.terms.clone(), self.scale).expect("canonical input stays within cap")
    }

    fn rebuild(terms: Vec<Term>, scale: f64) -> Self {
        Self::canonical(terms, scale).expect("operation cannot raise the degree")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    /// True when the only exponent present is zero.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.exp.norm() <= MERGE_TOL)
    }

    /// Polynomial part (coefficients of the `e^{0·y}` term).
    pub fn polynomial_part(&self) -> Vec<Cplx> {
        self.terms
            .iter()
            .find(|t| t.exp.norm() <= MERGE_TOL)
            .map(|t| t.poly.clone())
            .unwrap_or_default()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| max_abs(&t.poly)).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude among the inputs that produced this value.
    pub fn reference_scale(&self) -> f64 {
        self.scale.max(self.max_coeff())
    }

    /// Drops the provenance metadata so `is_zero` compares absolutely.
    pub fn without_history(mut self) -> Self {
        self.scale = 0.0;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let scale = self.reference_scale().max(other.reference_scale());
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Self::rebuild(terms, scale)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Cplx::new(-1.0, 0.0))
    }

    /// Multiplication by a complex constant.
    pub fn scale(&self, factor: Cplx) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: t.exp,
                poly: t.poly.iter().map(|&p| p * factor).collect(),
            })
            .collect();
        Self::rebuild(terms, self.scale * factor.norm())
    }

    /// Adds a complex constant.
    pub fn add_constant(&self, value: Cplx) -> Self {
        self.add(&Self::constant(value))
    }

    /// Pointwise product; fails only when a product degree exceeds [`MAX_DEGREE`].
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for s in &self.terms {
            for o in &other.terms {
                raw.push(Term {
                    exp: s.exp + o.exp,
                    poly: convolve(&s.poly, &o.poly),
                });
            }
        }
        Self::canonical(raw, self.reference_scale() * other.reference_scale())
    }

    /// Multiplies by `e^{τ y}`.
    pub fn shift_exponents(&self, tau: Cplx) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: t.exp + tau,
                poly: t.poly.clone(),
            })
            .collect();
        Self::rebuild(terms, self.scale)
    }

    /// Termwise derivative `(pⱼ′ + λⱼ pⱼ) e^{λⱼ y}`.
    pub fn diff(&self) -> Self {
        let mut growth: f64 = 1.0;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                growth = growth.max(t.exp.norm() + t.degree() as f64);
                let mut poly: Vec<Cplx> = t.poly.iter().map(|&p| p * t.exp).collect();
                add_into(&mut poly, &poly_diff(&t.poly));
                Term { exp: t.exp, poly }
            })
            .collect();
        Self::rebuild(terms, self.reference_scale() * growth)
    }

    pub fn diff_n(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |f, _| f.diff())
    }

    /// Value at a complex point, Horner per polynomial.
    pub fn eval(&self, y: Cplx) -> Cplx {
        self.terms
            .iter()
            .map(|t| t.horner(y) * (t.exp * y).exp())
            .sum()
    }

    /// `Σ |pⱼ(y) e^{λⱼ y}|`, the magnitude scale of [`ExpPoly::eval`] at `y`.
    pub fn eval_magnitude(&self, y: Cplx) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let ay = y.norm();
                let p: f64 = t
                    .poly
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.norm() * ay.powi(k as i32))
                    .sum();
                p * (t.exp * y).exp().norm()
            })
            .sum()
    }

    /// The shifted function `y ↦ f(y + z)`.
    pub fn translate(&self, z: Cplx) -> Self {
        let mut growth: f64 = 1.0;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let factor = (t.exp * z).exp();
                growth = growth.max(factor.norm() * (1.0 + z.norm()).powi(t.degree() as i32));
                Term {
                    exp: t.exp,
                    poly: shift_poly(&t.poly, z).into_iter().map(|p| p * factor).collect(),
                }
            })
            .collect();
        Self::rebuild(terms, self.reference_scale() * growth)
    }

    /// The reparametrized function `t ↦ f(m + h t)`.
    pub fn affine(&self, m: Cplx, h: Cplx) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let factor = (t.exp * m).exp();
                let shifted = shift_poly(&t.poly, m);
                let mut hp = Cplx::new(1.0, 0.0);
                let poly = shifted
                    .into_iter()
                    .map(|p| {
                        let v = p * factor * hp;
                        hp *= h;
                        v
                    })
                    .collect();
                Term {
                    exp: t.exp * h,
                    poly,
                }
            })
            .collect();
        Self::rebuild(terms, 0.0)
    }

    /// Complex conjugate as a function of a real variable: `(λ, p) ↦ (λ̄, p̄)`.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: t.exp.conj(),
                poly: t.poly.iter().map(|p| p.conj()).collect(),
            })
            .collect();
        Self::rebuild(terms, self.scale)
    }

    /// Real part on the real line, `(f + f̄)/2`.
    pub fn re(&self) -> Self {
        self.add(&self.conj()).scale(Cplx::new(0.5, 0.0))
    }

    /// Imaginary part on the real line, `(f − f̄)/(2i)`.
    pub fn im(&self) -> Self {
        self.sub(&self.conj()).scale(Cplx::new(0.0, -0.5))
    }

    /// True iff every coefficient is at most `tol` times the reference scale,
    /// or at most `tol` in absolute terms when no history is carried.
    pub fn is_zero(&self, tol: f64) -> bool {
        let bound = if self.scale > 0.0 { tol * self.scale } else { tol };
        self.terms.iter().all(|t| t.poly.iter().all(|p| p.norm() <= bound))
    }

    /// Relative size of the largest surviving coefficient.
    pub fn relative_magnitude(&self) -> f64 {
        let m = self.max_coeff();
        if m == 0.0 {
            0.0
        } else if self.scale > 0.0 {
            m / self.scale
        } else {
            m
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).is_zero(tol)
    }

    /// Structural equality modulo an additive constant.
    pub fn approx_eq_mod_constant(&self, other: &Self, tol: f64) -> bool {
        let d = self.sub(other);
        let shift = -d.polynomial_part().first().copied().unwrap_or_default();
        d.add_constant(shift).is_zero(tol)
    }

    /// Flattened `(exponent, degree) -> coefficient` pairs of `self` aligned
    /// with `other`, zero-padded where one side lacks a coefficient.
    fn aligned(&self, other: &Self) -> Vec<(Cplx, Cplx)> {
        let mut out = Vec::new();
        for t in &self.terms {
            let o = other
                .terms
                .iter()
                .find(|u| (u.exp - t.exp).norm() <= MERGE_TOL);
            let n = t.poly.len().max(o.map_or(0, |u| u.poly.len()));
            for k in 0..n {
                let a = t.poly.get(k).copied().unwrap_or_default();
                let b = o.and_then(|u| u.poly.get(k)).copied().unwrap_or_default();
                out.push((a, b));
            }
        }
        for u in &other.terms {
            if !self.terms.iter().any(|t| (u.exp - t.exp).norm() <= MERGE_TOL) {
                out.extend(u.poly.iter().map(|&b| (Cplx::default(), b)));
            }
        }
        out
    }

    /// Least-squares `s` minimizing `‖self − s·other‖` over coefficients.
    pub fn least_squares_factor(&self, other: &Self) -> Option<Cplx> {
        let pairs = self.aligned(other);
        let den: f64 = pairs.iter().map(|(_, b)| b.norm_sqr()).sum();
        if den == 0.0 {
            return None;
        }
        let num: Cplx = pairs.iter().map(|(a, b)| a * b.conj()).sum();
        Some(num / den)
    }

    /// `Some(s)` when `self = s·other` to relative tolerance `tol`.
    pub fn proportional_to(&self, other: &Self, tol: f64) -> Option<Cplx> {
        let s = self.least_squares_factor(other)?;
        let resid = self.sub(&other.scale(s));
        resid.is_zero(tol).then_some(s)
    }

    /// Taylor coefficients of `h ↦ f(center + h)` up to `h^order`.
    pub fn taylor_at(&self, center: Cplx, order: usize) -> Vec<Cplx> {
        let mut out = vec![Cplx::default(); order + 1];
        for t in &self.terms {
            let factor = (t.exp * center).exp();
            let mut shifted = shift_poly(&t.poly, center);
            shifted.truncate(order + 1);
            // e^{λh} = Σ λ^m h^m / m!
            let mut expser = Vec::with_capacity(order + 1);
            let mut v = Cplx::new(1.0, 0.0);
            for m in 0..=order {
                if m > 0 {
                    v = v * t.exp / m as f64;
                }
                expser.push(v);
            }
            for (i, &p) in shifted.iter().enumerate() {
                for (j, &e) in expser.iter().enumerate().take(order + 1 - i) {
                    out[i + j] += factor * p * e;
                }
            }
        }
        out
    }

    /// Exact square root when `self` is a single term whose polynomial is a
    /// perfect square (checked to relative tolerance `tol`).
    pub fn sqrt_exact(&self, tol: f64) -> Option<Self> {
        match self.terms.as_slice() {
            [] => Some(Self::zero()),
            [t] => {
                let p = &t.poly;
                let deg = p.len() - 1;
                if deg % 2 == 1 {
                    return None;
                }
                let half = deg / 2;
                // leading-coefficient-first recursion for q with q² = p
                let lead = p[deg].sqrt();
                let mut q = vec![Cplx::default(); half + 1];
                q[half] = lead;
                for k in (0..half).rev() {
                    // coefficient of y^{half + k} in q² determines q[k]
                    let idx = half + k;
                    let mut acc = p[idx];
                    for i in (k + 1)..=half {
                        let j = idx as isize - i as isize;
                        if j > k as isize && (j as usize) <= half {
                            acc -= q[i] * q[j as usize];
                        }
                    }
                    q[k] = acc / (lead * 2.0);
                }
                let cand = Self::from_terms([(t.exp / 2.0, q)]).ok()?;
                let sq = cand.try_mul(&cand).ok()?;
                let resid = sq.sub(self);
                (resid.max_coeff() <= tol * self.max_coeff().max(f64::MIN_POSITIVE)).then_some(cand)
            }
            _ => None,
        }
    }

    /// Renders the function with the given variable name.
    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        Rendered { f: self, var }
    }
}

struct Rendered<'a> {
    f: &'a ExpPoly,
    var: &'a str,
}

fn fmt_c(z: Cplx) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("({}{:+}i)", z.re, z.im)
    }
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, t) in self.f.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let poly: Vec<String> = t
                .poly
                .iter()
                .enumerate()
                .filter(|(_, p)| p.norm() != 0.0)
                .map(|(k, &p)| match k {
                    0 => fmt_c(p),
                    1 => format!("{}*{}", fmt_c(p), self.var),
                    _ => format!("{}*{}^{}", fmt_c(p), self.var, k),
                })
                .collect();
            let poly = poly.join(" + ");
            if t.exp.norm() <= MERGE_TOL {
                write!(f, "({poly})")?;
            } else {
                write!(f, "({poly})*exp({}*{})", fmt_c(t.exp), self.var)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("y"))
    }
}

/// `‖Σ parts‖ / Σ‖part‖` in the max-coefficient norm: how far a sum of
/// terms is from cancelling, relative to the size of the terms.
pub fn relative_defect(parts: &[ExpPoly]) -> f64 {
    let scale: f64 = parts.iter().map(|p| p.max_coeff()).sum();
    if scale == 0.0 {
        return 0.0;
    }
    let total = parts.iter().fold(ExpPoly::zero(), |acc, p| acc.add(p));
    total.without_history().max_coeff() / scale
}

impl std::ops::Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::sub(self, rhs)
    }
}

impl std::ops::Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly::neg(self)
    }
}

/// Panics when the product exceeds [`MAX_DEGREE`]; use [`ExpPoly::try_mul`]
/// on untrusted input.
impl std::ops::Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        self.try_mul(rhs).expect("exponential polynomial degree cap exceeded")
    }
}

impl std::ops::Mul<&ExpPoly> for Cplx {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        rhs.scale(self)
    }
}
