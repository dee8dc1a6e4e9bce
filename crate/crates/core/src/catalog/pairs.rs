use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::diffop::{unit_segment, DiffOp};
use super::kernel::{DenomKind, KernelSpec};
use crate::error::{Error, Result};
use crate::expalg::{Cplx, ExpPoly};

/// Below this magnitude a parameter counts as zero, and a real or imaginary
/// part as absent.
pub const PARAM_TOL: f64 = 1e-12;

/// Grid residual accepted when a pair is constructed.
pub const CONSTRUCTION_TOL: f64 = 1e-10;

fn zero() -> Cplx {
    Cplx::new(0.0, 0.0)
}

fn one() -> Cplx {
    Cplx::new(1.0, 0.0)
}

fn is_zero(z: Cplx) -> bool {
    z.norm() <= PARAM_TOL
}

fn is_real(z: Cplx) -> bool {
    z.im.abs() <= PARAM_TOL
}

fn is_imag(z: Cplx) -> bool {
    z.re.abs() <= PARAM_TOL
}

/// The parametrized families of commuting pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum PairCase {
    Main {
        lambda: Cplx,
        mu: Cplx,
        alpha1: Cplx,
        alpha2: Cplx,
    },
    Special1 {
        m: i64,
        alpha: Cplx,
        beta: Cplx,
    },
    Special2 {
        lambda: Cplx,
        alpha: Cplx,
        beta: Cplx,
    },
    Special3 {
        beta: Cplx,
        p: Vec<Cplx>,
    },
    Special4 {
        p: Vec<Cplx>,
        beta: Cplx,
    },
    C2Item1 {
        lambda: Cplx,
        mu: Cplx,
        alpha1: Cplx,
        alpha2: Cplx,
        n: i64,
    },
    C2Item2 {
        lambda: Cplx,
        alpha: Cplx,
        beta: Cplx,
        n: i64,
    },
    C2Item3 {
        beta: Cplx,
        b: f64,
    },
    C2Item4 {
        beta: Cplx,
        a: f64,
        b: f64,
    },
}

/// A case plus an optional gauge, as read from scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseDescriptor {
    #[serde(flatten)]
    pub case: PairCase,
    #[serde(default)]
    pub tau: Cplx,
}

impl From<PairCase> for CaseDescriptor {
    fn from(case: PairCase) -> Self {
        CaseDescriptor { case, tau: zero() }
    }
}

/// Variant name and parameter domain, for listings.
pub const VARIANTS: [(&str, &str); 9] = [
    ("Main", "lambda, mu, alpha1, alpha2 complex; alpha1, alpha2 not both 0; for imaginary lambda: |lambda| < pi, or pi <= |lambda| < 2pi with alpha1 = 0 and mu = lambda(2m+1)/4"),
    ("Special1", "integer m; alpha, beta complex (lambda = pi i, mu = (2m+1)lambda/4, alpha1 = 0)"),
    ("Special2", "lambda != 0 complex (imaginary lambda needs |lambda| < pi); alpha, beta complex, not both 0"),
    ("Special3", "beta != 0 complex; p quadratic with p'(0) = 0"),
    ("Special4", "p polynomial of degree <= 2 (not identically 0); beta complex"),
    ("C2Item1", "lambda != 0 and mu in R or iR; alpha1, alpha2 complex; integer n; target (-1 + 2 pi i n/lambda, 1 + 2 pi i n/lambda)"),
    ("C2Item2", "lambda != 0 in R or iR; alpha real; beta imaginary; integer n; same target as C2Item1"),
    ("C2Item3", "beta != 0 imaginary; b > 0 real; target (-b, b)"),
    ("C2Item4", "beta imaginary; a < b real; target (a, b)"),
];

impl PairCase {
    pub fn name(&self) -> &'static str {
        match self {
            PairCase::Main { .. } => "Main",
            PairCase::Special1 { .. } => "Special1",
            PairCase::Special2 { .. } => "Special2",
            PairCase::Special3 { .. } => "Special3",
            PairCase::Special4 { .. } => "Special4",
            PairCase::C2Item1 { .. } => "C2Item1",
            PairCase::C2Item2 { .. } => "C2Item2",
            PairCase::C2Item3 { .. } => "C2Item3",
            PairCase::C2Item4 { .. } => "C2Item4",
        }
    }

    pub fn is_c2(&self) -> bool {
        matches!(
            self,
            PairCase::C2Item1 { .. }
                | PairCase::C2Item2 { .. }
                | PairCase::C2Item3 { .. }
                | PairCase::C2Item4 { .. }
        )
    }

    /// Whether the coefficients promise `b = a′` at the target endpoints too.
    pub fn target_flux_matches(&self) -> bool {
        match self {
            PairCase::C2Item3 { beta, .. } | PairCase::C2Item4 { beta, .. } => is_zero(*beta),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutingPair {
    pub case: PairCase,
    pub kernel: KernelSpec,
    pub op: DiffOp,
    pub op_target: Option<DiffOp>,
}

impl CommutingPair {
    /// The operator acting on the range of `K` (the source operator for one-segment pairs).
    pub fn target_op(&self) -> &DiffOp {
        self.op_target.as_ref().unwrap_or(&self.op)
    }

    pub fn with_op(&self, op: DiffOp) -> CommutingPair {
        let op_target = self.op_target.as_ref().map(|t| op.with_segment(t.segment));
        CommutingPair {
            op,
            op_target,
            ..self.clone()
        }
    }

    /// Control pair with `c` multiplied by `s`.
    pub fn with_c_scaled(&self, s: f64) -> CommutingPair {
        let mut op = self.op.clone();
        op.c = op.c.scale(Cplx::new(s, 0.0));
        self.with_op(op)
    }
}

/// `cosh(λy) − cosh λ`.
pub fn cosh_profile(lambda: Cplx) -> ExpPoly {
    ExpPoly::cosh(lambda).add_constant(-lambda.cosh())
}

/// `(y² − 1)`.
fn y2m1() -> ExpPoly {
    ExpPoly::real_polynomial(&[-1.0, 0.0, 1.0]).expect("quadratic")
}

/// `sinh(μz)/μ`, or `z` when `μ = 0`.
fn sinh_over(mu: Cplx) -> ExpPoly {
    if is_zero(mu) {
        ExpPoly::identity()
    } else {
        ExpPoly::sinh(mu).scale(mu.inv())
    }
}

fn cosh_or_one(mu: Cplx) -> ExpPoly {
    if is_zero(mu) {
        ExpPoly::constant(one())
    } else {
        ExpPoly::cosh(mu)
    }
}

/// Restrictions for imaginary `λ`: either `|λ| < π`, or `π ≤ |λ| < 2π`
/// with `α₁ = 0` and `μ = λ(2m+1)/4`.
pub fn imaginary_lambda_check(lambda: Cplx, mu: Cplx, alpha1: Cplx) -> std::result::Result<(), String> {
    if is_zero(lambda) || !is_imag(lambda) {
        return Ok(());
    }
    let r = lambda.norm();
    if r < PI - PARAM_TOL {
        return Ok(());
    }
    if r >= 2.0 * PI - PARAM_TOL {
        return Err(format!("imaginary lambda with |lambda| = {r} >= 2 pi"));
    }
    if !is_zero(alpha1) {
        return Err(format!(
            "imaginary lambda with pi <= |lambda| = {r} < 2 pi requires alpha1 = 0"
        ));
    }
    // μ = λ(2m+1)/4  ⇔  4μ/λ is an odd integer
    let q = mu * 4.0 / lambda;
    let odd = q.im.abs() <= 1e-9 && {
        let k = q.re.round();
        (q.re - k).abs() <= 1e-9 && (k as i64).rem_euclid(2) == 1
    };
    if odd {
        Ok(())
    } else {
        Err(format!(
            "imaginary lambda with pi <= |lambda| = {r} < 2 pi requires mu = lambda(2m+1)/4"
        ))
    }
}

fn domain(msg: impl Into<String>) -> Error {
    Error::ParameterDomain(msg.into())
}

fn main_kernel(lambda: Cplx, mu: Cplx, alpha1: Cplx, alpha2: Cplx) -> Result<KernelSpec> {
    let body = sinh_over(mu).scale(alpha1).add(&cosh_or_one(mu).scale(alpha2));
    if is_zero(lambda) {
        KernelSpec::new(body.scale(Cplx::new(2.0, 0.0)), DenomKind::Z, zero())
    } else {
        KernelSpec::new(body.scale(lambda), DenomKind::SinhHalf(lambda), zero())
    }
}

fn main_op(lambda: Cplx, mu: Cplx) -> DiffOp {
    let a = if is_zero(lambda) {
        y2m1().scale(Cplx::new(0.5, 0.0))
    } else {
        cosh_profile(lambda).scale((lambda * lambda).inv())
    };
    let nu = lambda * lambda / 4.0 - mu * mu;
    let c = a.scale(nu);
    DiffOp::symmetric(a, c)
}

fn c2_target(lambda: Cplx, n: i64) -> (Cplx, Cplx) {
    let shift = Cplx::new(0.0, 2.0 * PI * n as f64) / lambda;
    (Cplx::new(-1.0, 0.0) + shift, Cplx::new(1.0, 0.0) + shift)
}

fn special2_op(lambda: Cplx, alpha: Cplx, beta: Cplx) -> DiffOp {
    let a0 = cosh_profile(lambda);
    let a0p = a0.diff();
    let a = a0.scale(alpha);
    let b = a0p.scale(alpha).add(&a0.scale(beta));
    let c = a0p
        .scale(beta * 0.5)
        .add(&a0.scale(alpha * lambda * lambda / 4.0));
    DiffOp {
        a,
        b,
        c,
        segment: unit_segment(),
    }
}

fn special3_op(beta: Cplx, p: &ExpPoly) -> Result<DiffOp> {
    let a = y2m1().try_mul(p)?;
    let p1 = p.diff();
    let b = a
        .diff()
        .add(&ExpPoly::identity().try_mul(&p1)?.scale(beta))
        .sub(&p.diff_n(2).scale(beta));
    let c = p1.scale(beta);
    Ok(DiffOp {
        a,
        b,
        c,
        segment: unit_segment(),
    })
}

fn special4_op(p: &ExpPoly, beta: Cplx) -> Result<DiffOp> {
    let a = y2m1().try_mul(p)?;
    let b = a.diff().add(&y2m1().scale(beta));
    let y = ExpPoly::identity();
    let c = y.try_mul(&p.diff())?.add(&y.scale(beta));
    Ok(DiffOp {
        a,
        b,
        c,
        segment: unit_segment(),
    })
}

fn quadratic(p: &[Cplx]) -> Result<ExpPoly> {
    if p.len() > 3 {
        return Err(domain("p must have degree at most two"));
    }
    let poly = ExpPoly::polynomial(p)?;
    if poly.is_empty() {
        return Err(Error::Degenerate("p is identically zero".into()));
    }
    Ok(poly)
}

fn reciprocal_plus_pole(beta: Cplx) -> Result<KernelSpec> {
    // 1/β + 1/z = (z/β + 1)/z
    let num = ExpPoly::polynomial(&[one(), beta.inv()])?;
    KernelSpec::new(num, DenomKind::Z, zero())
}

fn one_over_z() -> KernelSpec {
    KernelSpec::new(ExpPoly::constant(one()), DenomKind::Z, zero()).expect("1/z")
}

/// Builds the pair without running the commutation check.
pub fn build_unchecked(case: &PairCase) -> Result<CommutingPair> {
    let (kernel, op, target) = match *case {
        PairCase::Main {
            lambda,
            mu,
            alpha1,
            alpha2,
        } => {
            if is_zero(alpha1) && is_zero(alpha2) {
                return Err(Error::Degenerate("alpha1 = alpha2 = 0".into()));
            }
            imaginary_lambda_check(lambda, mu, alpha1).map_err(Error::ParameterDomain)?;
            (main_kernel(lambda, mu, alpha1, alpha2)?, main_op(lambda, mu), None)
        }
        PairCase::Special1 { m, alpha, beta } => {
            if is_zero(alpha) && is_zero(beta) {
                return Err(Error::Degenerate("alpha = beta = 0".into()));
            }
            let lambda = Cplx::new(0.0, PI);
            let mu = lambda * ((2 * m + 1) as f64 / 4.0);
            // cos(ωz)/sin(πz/2) = i cosh(μz)/sinh(λz/2)
            let kernel = KernelSpec::new(
                ExpPoly::cosh(mu).scale(Cplx::i()),
                DenomKind::SinhHalf(lambda),
                zero(),
            )?;
            let a = ExpPoly::exponential(lambda)
                .add_constant(-lambda.exp())
                .scale(alpha)
                .add(&ExpPoly::exponential(-lambda).add_constant(-(-lambda).exp()).scale(beta));
            let nu = Cplx::new(PI * PI / 4.0 * (((2 * m + 1) * (2 * m + 1)) as f64 / 4.0 - 1.0), 0.0);
            let c = a.scale(nu);
            (kernel, DiffOp::symmetric(a, c), None)
        }
        PairCase::Special2 { lambda, alpha, beta } => {
            if is_zero(lambda) {
                return Err(domain("Special2 requires lambda != 0"));
            }
            if is_zero(alpha) && is_zero(beta) {
                return Err(Error::Degenerate("alpha = beta = 0".into()));
            }
            imaginary_lambda_check(lambda, zero(), zero()).map_err(Error::ParameterDomain)?;
            let kernel = KernelSpec::new(ExpPoly::constant(one()), DenomKind::SinhHalf(lambda), zero())?;
            (kernel, special2_op(lambda, alpha, beta), None)
        }
        PairCase::Special3 { beta, ref p } => {
            if is_zero(beta) {
                return Err(domain("Special3 requires beta != 0"));
            }
            let poly = quadratic(p)?;
            if p.get(1).is_some_and(|c| !is_zero(*c)) {
                return Err(domain("Special3 requires p'(0) = 0"));
            }
            (reciprocal_plus_pole(beta)?, special3_op(beta, &poly)?, None)
        }
        PairCase::Special4 { ref p, beta } => {
            let poly = quadratic(p)?;
            (one_over_z(), special4_op(&poly, beta)?, None)
        }
        PairCase::C2Item1 {
            lambda,
            mu,
            alpha1,
            alpha2,
            n,
        } => {
            if is_zero(lambda) {
                return Err(domain("C2Item1 requires lambda != 0"));
            }
            if !(is_real(lambda) || is_imag(lambda)) || !(is_real(mu) || is_imag(mu)) {
                return Err(domain("C2Item1 requires lambda, mu in R or iR"));
            }
            if is_zero(alpha1) && is_zero(alpha2) {
                return Err(Error::Degenerate("alpha1 = alpha2 = 0".into()));
            }
            imaginary_lambda_check(lambda, mu, alpha1).map_err(Error::ParameterDomain)?;
            let op = main_op(lambda, mu);
            let t = op.with_segment(c2_target(lambda, n));
            (main_kernel(lambda, mu, alpha1, alpha2)?, op, Some(t))
        }
        PairCase::C2Item2 {
            lambda,
            alpha,
            beta,
            n,
        } => {
            if is_zero(lambda) || !(is_real(lambda) || is_imag(lambda)) {
                return Err(domain("C2Item2 requires 0 != lambda in R or iR"));
            }
            if !is_real(alpha) || !is_imag(beta) {
                return Err(domain("C2Item2 requires alpha real and beta imaginary"));
            }
            if is_zero(alpha) && is_zero(beta) {
                return Err(Error::Degenerate("alpha = beta = 0".into()));
            }
            imaginary_lambda_check(lambda, zero(), zero()).map_err(Error::ParameterDomain)?;
            let kernel = KernelSpec::new(ExpPoly::constant(one()), DenomKind::SinhHalf(lambda), zero())?;
            let op = special2_op(lambda, alpha, beta);
            let t = op.with_segment(c2_target(lambda, n));
            (kernel, op, Some(t))
        }
        PairCase::C2Item3 { beta, b } => {
            if is_zero(beta) || !is_imag(beta) {
                return Err(domain("C2Item3 requires beta != 0 imaginary"));
            }
            if !(b > 0.0 && b.is_finite()) {
                return Err(domain("C2Item3 requires b > 0"));
            }
            // (y² − 1)(y² − b²) with P = y² − b²
            let poly = ExpPoly::real_polynomial(&[-b * b, 0.0, 1.0])?;
            let op = special3_op(beta, &poly)?;
            let t = op.with_segment((Cplx::new(-b, 0.0), Cplx::new(b, 0.0)));
            (reciprocal_plus_pole(beta)?, op, Some(t))
        }
        PairCase::C2Item4 { beta, a, b } => {
            if !is_imag(beta) {
                return Err(domain("C2Item4 requires beta imaginary"));
            }
            if !(a < b && a.is_finite() && b.is_finite()) {
                return Err(domain("C2Item4 requires real a < b"));
            }
            let poly = ExpPoly::real_polynomial(&[a * b, -(a + b), 1.0])?;
            let op = special4_op(&poly, beta)?;
            let t = op.with_segment((Cplx::new(a, 0.0), Cplx::new(b, 0.0)));
            (one_over_z(), op, Some(t))
        }
    };
    Ok(CommutingPair {
        case: case.clone(),
        kernel,
        op,
        op_target: target,
    })
}

/// Builds and certifies a pair: the commutation residual over the standard
/// grid must stay below [`CONSTRUCTION_TOL`].
pub fn build_pair(case: &PairCase) -> Result<CommutingPair> {
    let pair = build_unchecked(case)?;
    certify(&pair)?;
    Ok(pair)
}

/// [`build_pair`] followed by the descriptor's gauge.
pub fn build_descriptor(desc: &CaseDescriptor) -> Result<CommutingPair> {
    let pair = build_pair(&desc.case)?;
    if desc.tau == zero() {
        Ok(pair)
    } else {
        let g = gauge_transform(&pair, desc.tau);
        certify(&g)?;
        Ok(g)
    }
}

fn certify(pair: &CommutingPair) -> Result<()> {
    let res = crate::verify::grid_residual(pair)?;
    if res.max_relative > CONSTRUCTION_TOL {
        return Err(Error::ResidueCheck {
            case: pair.case.name().into(),
            residual: res.max_relative,
            tolerance: CONSTRUCTION_TOL,
        });
    }
    Ok(())
}

/// Conjugation by multiplication with `e^{τy}`: the kernel picks up `e^{τz}`
/// and `L ↦ e^{τy} L e^{−τy}`, i.e. `b − 2τa`, `c − τb + τ²a`.
pub fn gauge_transform(pair: &CommutingPair, tau: Cplx) -> CommutingPair {
    let conj = |op: &DiffOp| op.gauged(tau);
    let mut kernel = pair.kernel.clone();
    kernel.tau += tau;
    CommutingPair {
        case: pair.case.clone(),
        kernel,
        op: conj(&pair.op),
        op_target: pair.op_target.as_ref().map(conj),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub segment: String,
    pub point: Cplx,
    /// `|a(e)|`.
    pub a_residual: f64,
    /// `|b(e) − a′(e)|`.
    pub flux_residual: f64,
    /// Whether the flux condition is part of the family's promise here.
    pub flux_required: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub case: String,
    pub endpoints: Vec<EndpointCheck>,
    pub boundary_ok: bool,
    pub lambda_range_ok: bool,
    pub lambda_range_message: Option<String>,
    pub nontrivial: bool,
    pub pole_order_at_zero: u8,
    pub passed: bool,
}

pub const BOUNDARY_TOL: f64 = 1e-12;

fn case_lambda_mu_alpha1(case: &PairCase) -> Option<(Cplx, Cplx, Cplx)> {
    match *case {
        PairCase::Main {
            lambda, mu, alpha1, ..
        }
        | PairCase::C2Item1 {
            lambda, mu, alpha1, ..
        } => Some((lambda, mu, alpha1)),
        PairCase::Special2 { lambda, .. } | PairCase::C2Item2 { lambda, .. } => {
            Some((lambda, zero(), zero()))
        }
        _ => None,
    }
}

pub fn validate_pair(pair: &CommutingPair) -> ValidationReport {
    let mut endpoints = Vec::new();
    let mut push = |name: &str, op: &DiffOp, required: bool| {
        let ap = op.a.diff();
        for e in op.endpoints() {
            endpoints.push(EndpointCheck {
                segment: name.into(),
                point: e,
                a_residual: op.a.eval(e).norm(),
                flux_residual: (op.b.eval(e) - ap.eval(e)).norm(),
                flux_required: required,
            });
        }
    };
    push("source", &pair.op, true);
    if let Some(t) = &pair.op_target {
        push("target", t, pair.case.target_flux_matches());
    }
    let tol_a = BOUNDARY_TOL * pair.op.a.max_coeff().max(1.0);
    let tol_b = BOUNDARY_TOL * pair.op.b.max_coeff().max(1.0);
    let boundary_ok = endpoints
        .iter()
        .all(|e| e.a_residual <= tol_a && (!e.flux_required || e.flux_residual <= tol_b));
    let range = case_lambda_mu_alpha1(&pair.case)
        .map(|(l, m, a1)| imaginary_lambda_check(l, m, a1))
        .unwrap_or(Ok(()));
    let nontrivial = !pair.kernel.is_trivial();
    ValidationReport {
        case: pair.case.name().into(),
        boundary_ok,
        lambda_range_ok: range.is_ok(),
        lambda_range_message: range.err(),
        nontrivial,
        pole_order_at_zero: pair.kernel.pole_order_at_zero(),
        passed: boundary_ok && nontrivial,
        endpoints,
    }
}

/// Extra gauge freedom of `C2Item2`:
/// `β = 2iα Im τ` keeps the gauged operator self-adjoint.
pub fn item2_gauge_admissible(alpha: f64, beta: Cplx, tau: Cplx) -> bool {
    (beta - Cplx::new(0.0, 2.0 * alpha * tau.im)).norm() <= 1e-12 * (1.0 + beta.norm())
}
