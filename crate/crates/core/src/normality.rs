//! Adjoints, self-adjointness, commutation of two second-order operators and
//! the normality test `LL* = L*L`.
//!
//! Formal adjoints are taken with respect to arc length. On a segment that
//! leaves the real axis the operator is first rewritten in the segment
//! parameter ([`DiffOp::in_parameter`]), where conjugating coefficients is
//! pointwise meaningful.

use serde::{Deserialize, Serialize};

use crate::catalog::DiffOp;
use crate::error::Result;
use crate::expalg::{relative_defect, Cplx, ExpPoly};
use crate::quadrature::QuadratureRule;

/// Tolerance for the self-adjointness identities.
pub const SELF_ADJOINT_TOL: f64 = 1e-12;

/// Tolerance for the commutation relations and the direct `LL* − L*L` check.
pub const COMMUTE_TOL: f64 = 1e-10;

const GRID: usize = 24;

fn real_form(op: &DiffOp) -> DiffOp {
    if op.is_real_segment() {
        op.clone()
    } else {
        op.in_parameter()
    }
}

fn half() -> Cplx {
    Cplx::new(0.5, 0.0)
}

/// `L*u = āu″ + (2ā′ − b̄)u′ + (ā″ − b̄′ + c̄)u`.
pub fn adjoint(op: &DiffOp) -> DiffOp {
    let op = real_form(op);
    let (a, b, c) = (op.a.conj(), op.b.conj(), op.c.conj());
    DiffOp {
        b: a.diff().scale(Cplx::new(2.0, 0.0)).sub(&b),
        c: a.diff_n(2).sub(&b.diff()).add(&c),
        a,
        segment: op.segment,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfAdjointReport {
    pub self_adjoint: bool,
    /// Relative defects of `Im a = 0`, `Re b = a′`, `Im c = ½ Im b′`.
    pub residuals: [f64; 3],
}

pub fn is_self_adjoint(op: &DiffOp) -> SelfAdjointReport {
    let op = real_form(op);
    let (a, b, c) = (&op.a, &op.b, &op.c);
    let r_a = relative_defect(&[a.clone(), a.conj().neg()]);
    let r_b = relative_defect(&[
        b.scale(half()),
        b.conj().scale(half()),
        a.diff().neg(),
    ]);
    let bd = b.diff();
    let r_c = relative_defect(&[
        c.clone(),
        c.conj().neg(),
        bd.scale(-half()),
        bd.conj().scale(half()),
    ]);
    let residuals = [r_a, r_b, r_c];
    SelfAdjointReport {
        self_adjoint: residuals.iter().all(|&r| r <= SELF_ADJOINT_TOL),
        residuals,
    }
}

/// Outcome of checking `LD = DL` for `Lu = au″ + bu′ + cu`, `Du = 𝒜u″ + ℬu′ + 𝒞u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpPairTest {
    pub l: DiffOp,
    pub d: DiffOp,
    /// Relative defects of the four coefficient relations, highest order first.
    pub residuals: [f64; 4],
    pub tol: f64,
    pub commutes: bool,
    /// `𝒜 = αa`, when that holds.
    pub alpha: Option<Cplx>,
    /// `βa = (ℬ − αb)²`, when that holds.
    pub beta: Option<Cplx>,
    /// Grid defect of the integrated form `𝒞 = αc + f/2 + const`,
    /// `2βc = (ℬ − αb)f′ + f²/2 + const`.
    pub f_form_residual: Option<f64>,
}

fn prod(x: &ExpPoly, y: &ExpPoly) -> Result<ExpPoly> {
    x.try_mul(y)
}

fn two() -> Cplx {
    Cplx::new(2.0, 0.0)
}

/// The four relations, each as its list of signed summands.
fn relations(l: &DiffOp, d: &DiffOp) -> Result<[Vec<ExpPoly>; 4]> {
    let (a, b, c) = (&l.a, &l.b, &l.c);
    let (aa, bb, cc) = (&d.a, &d.b, &d.c);
    let r1 = vec![prod(a, &aa.diff())?, prod(aa, &a.diff())?.neg()];
    let r2 = vec![
        prod(a, &bb.diff())?.scale(two()),
        prod(b, &aa.diff())?,
        prod(aa, &b.diff())?.scale(-two()),
        prod(bb, &a.diff())?.neg(),
    ];
    let r3 = vec![
        prod(a, &bb.diff_n(2))?,
        prod(a, &cc.diff())?.scale(two()),
        prod(b, &bb.diff())?,
        prod(aa, &b.diff_n(2))?.neg(),
        prod(aa, &c.diff())?.scale(-two()),
        prod(bb, &b.diff())?.neg(),
    ];
    let r4 = vec![
        prod(a, &cc.diff_n(2))?,
        prod(b, &cc.diff())?,
        prod(aa, &c.diff_n(2))?.neg(),
        prod(bb, &c.diff())?.neg(),
    ];
    Ok([r1, r2, r3, r4])
}

pub fn commute_ops(l: &DiffOp, d: &DiffOp) -> Result<OpPairTest> {
    commute_ops_with(l, d, COMMUTE_TOL)
}

pub fn commute_ops_with(l: &DiffOp, d: &DiffOp, tol: f64) -> Result<OpPairTest> {
    let rel = relations(l, d)?;
    let residuals = rel.each_ref().map(|parts| relative_defect(parts));
    let commutes = residuals.iter().all(|&r| r <= tol);
    let mut test = OpPairTest {
        l: l.clone(),
        d: d.clone(),
        residuals,
        tol,
        commutes,
        alpha: None,
        beta: None,
        f_form_residual: None,
    };
    if l.a.is_zero(0.0) {
        return Ok(test);
    }
    let alpha = match d.a.least_squares_factor(&l.a) {
        Some(s) if relative_defect(&[d.a.clone(), l.a.scale(-s)]) <= tol => s,
        None if d.a.is_zero(0.0) => Cplx::default(),
        _ => return Ok(test),
    };
    test.alpha = Some(alpha);
    let m = d.b.sub(&l.b.scale(alpha));
    let m2 = prod(&m, &m)?;
    let m_scale = d.b.max_coeff() + l.b.scale(alpha).max_coeff();
    let beta = if m.clone().without_history().max_coeff() <= tol * m_scale {
        Cplx::default()
    } else {
        match m2.least_squares_factor(&l.a) {
            Some(s) if relative_defect(&[m2.clone(), l.a.scale(-s)]) <= tol => s,
            _ => return Ok(test),
        }
    };
    test.beta = Some(beta);
    test.f_form_residual = Some(f_form_residual(l, d, alpha, beta, &m)?);
    Ok(test)
}

/// Spread of `g` over interior grid points relative to `scale`, after
/// removing the value at the first point (the free constant).
fn spread(values: &[(Cplx, f64)]) -> f64 {
    let Some(&(g0, _)) = values.first() else {
        return 0.0;
    };
    let scale = values.iter().map(|v| v.1).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    values
        .iter()
        .map(|(g, _)| (g - g0).norm())
        .fold(0.0, f64::max)
        / scale
}

fn f_form_residual(l: &DiffOp, d: &DiffOp, alpha: Cplx, beta: Cplx, m: &ExpPoly) -> Result<f64> {
    let rule = QuadratureRule::gauss_legendre(GRID, l.segment)?;
    let n = l.b.scale(two()).sub(&l.a.diff());
    let (nd, md) = (n.diff(), m.diff());
    let floor = 1e-8 * rule.mapped.iter().map(|&y| m.eval(y).norm()).fold(0.0, f64::max);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &y in &rule.mapped {
        let (mv, mdv) = (m.eval(y), md.eval(y));
        let (f, fd) = if beta == Cplx::default() {
            (Cplx::default(), Cplx::default())
        } else if mv.norm() <= floor {
            continue;
        } else {
            let (nv, ndv) = (n.eval(y), nd.eval(y));
            (beta * 0.5 * nv / mv, beta * 0.5 * (ndv * mv - nv * mdv) / (mv * mv))
        };
        let (cv, cl) = (d.c.eval(y), l.c.eval(y));
        first.push((
            cv - alpha * cl - f * 0.5,
            cv.norm() + (alpha * cl).norm() + (f * 0.5).norm(),
        ));
        let lhs = beta * 2.0 * cl;
        let rhs = mv * fd + f * f * 0.5;
        second.push((lhs - rhs, lhs.norm() + (mv * fd).norm() + (f * f * 0.5).norm()));
    }
    Ok(spread(&first).max(spread(&second)))
}

/// Coefficients of `LD` by derivative order, `[u, u′, u″, u‴, u⁗]`.
pub fn compose(l: &DiffOp, d: &DiffOp) -> Result<[ExpPoly; 5]> {
    let (a, b, c) = (&l.a, &l.b, &l.c);
    let (aa, bb, cc) = (&d.a, &d.b, &d.c);
    let (aa1, aa2) = (aa.diff(), aa.diff_n(2));
    let (bb1, bb2) = (bb.diff(), bb.diff_n(2));
    let (cc1, cc2) = (cc.diff(), cc.diff_n(2));
    let u4 = prod(a, aa)?;
    let u3 = prod(a, &aa1.scale(two()).add(bb))?.add(&prod(b, aa)?);
    let u2 = prod(a, &aa2.add(&bb1.scale(two())).add(cc))?
        .add(&prod(b, &aa1.add(bb))?)
        .add(&prod(c, aa)?);
    let u1 = prod(a, &bb2.add(&cc1.scale(two())))?
        .add(&prod(b, &bb1.add(cc))?)
        .add(&prod(c, bb)?);
    let u0 = prod(a, &cc2)?.add(&prod(b, &cc1)?).add(&prod(c, cc)?);
    Ok([u0, u1, u2, u3, u4])
}

/// `max |LD − DL|` over all coefficients, relative to the largest coefficient
/// of either composition.
pub fn commutator_defect(l: &DiffOp, d: &DiffOp) -> Result<f64> {
    let ld = compose(l, d)?;
    let dl = compose(d, l)?;
    let scale = ld
        .iter()
        .chain(&dl)
        .map(|p| p.max_coeff())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let worst = ld
        .iter()
        .zip(&dl)
        .map(|(x, y)| x.sub(y).without_history().max_coeff())
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub normal: bool,
    pub self_adjoint: SelfAdjointReport,
    /// `Im a = α Re a`; `None` when `Re a ≡ 0` or no real `α` fits.
    pub alpha: Option<f64>,
    /// Factor applied before splitting, `1 − iα` (or `−i` when `Re a ≡ 0`).
    pub rescale: Cplx,
    /// `2L₀ = L̃ + L̃*`.
    pub l0: DiffOp,
    /// `2L₁ = L̃ − L̃*`.
    pub l1: DiffOp,
    pub split_test: OpPairTest,
    /// Relative size of `LL* − L*L` from the fourth-order composition.
    pub direct_defect: f64,
    pub final_conditions: Option<FinalConditions>,
}

/// The explicit description of normal, non-self-adjoint operators,
/// evaluated on `L̃ = L₀ + L₁` with `L₁ = ℬ₁u′ + c₁u` and
/// `L₀ = au″ + ℬ₀u′ + c₀u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalConditions {
    /// `γ` with `ℬ₁ = γ√a`.
    pub gamma: Option<f64>,
    /// Whether `√a` was found as an exponential polynomial.
    pub exact_sqrt: bool,
    /// Named residuals, each relative to the size of its terms.
    pub residuals: Vec<(String, f64)>,
}

pub fn is_normal(op: &DiffOp) -> Result<NormalityReport> {
    let op = real_form(op);
    let self_adjoint = is_self_adjoint(&op);
    let (re_a, im_a) = (op.a.re(), op.a.im());
    let (alpha, rescale) = if re_a.clone().without_history().is_zero(1e-14 * op.a.max_coeff()) {
        (None, Cplx::new(0.0, -1.0))
    } else {
        match im_a.least_squares_factor(&re_a) {
            Some(s) if relative_defect(&[im_a.clone(), re_a.scale(-s)]) <= COMMUTE_TOL => {
                (Some(s.re), Cplx::new(1.0, -s.re))
            }
            _ => (None, Cplx::new(1.0, 0.0)),
        }
    };
    let mut lt = op.scale(rescale);
    if rescale != Cplx::new(1.0, 0.0) || alpha.is_some() {
        // real up to the certified tolerance; the leftover imaginary noise
        // would make the leading relations compare roundoff with roundoff
        lt.a = lt.a.re();
    }
    let ls = adjoint(&lt);
    let l0 = lt.add(&ls).scale(half());
    let l1 = lt.sub(&ls).scale(half());
    let split_test = commute_ops(&l0, &l1)?;
    let direct_defect = commutator_defect(&op, &adjoint(&op))?;
    // a skew part at roundoff level commutes with anything; the relative
    // defects of the split test would only measure its noise
    let size = |d: &DiffOp| d.a.max_coeff() + d.b.max_coeff() + d.c.max_coeff();
    let negligible = size(&l1) <= SELF_ADJOINT_TOL * size(&lt);
    let normal = negligible || split_test.commutes;
    let final_conditions = if normal && !self_adjoint.self_adjoint {
        Some(final_conditions(&l0, &l1)?)
    } else {
        None
    };
    Ok(NormalityReport {
        normal,
        self_adjoint,
        alpha,
        rescale,
        l0,
        l1,
        split_test,
        direct_defect,
        final_conditions,
    })
}

/// `√a` at the grid points, the branch continued from the point nearest the
/// midpoint.
fn sqrt_on_grid(a: &ExpPoly, ys: &[Cplx]) -> Vec<Cplx> {
    let mut out: Vec<Cplx> = ys.iter().map(|&y| a.eval(y).sqrt()).collect();
    let start = ys.len() / 2;
    for i in start + 1..ys.len() {
        if (out[i] + out[i - 1]).norm() < (out[i] - out[i - 1]).norm() {
            out[i] = -out[i];
        }
    }
    for i in (0..start).rev() {
        if (out[i] + out[i + 1]).norm() < (out[i] - out[i + 1]).norm() {
            out[i] = -out[i];
        }
    }
    out
}

fn final_conditions(l0: &DiffOp, l1: &DiffOp) -> Result<FinalConditions> {
    let a = &l0.a;
    let rule = QuadratureRule::gauss_legendre(GRID, l0.segment)?;
    let ys = &rule.mapped;
    let exact = a.sqrt_exact(1e-12);
    let root: Vec<Cplx> = match &exact {
        Some(r) => ys.iter().map(|&y| r.eval(y)).collect(),
        None => sqrt_on_grid(a, ys),
    };
    let mut residuals = Vec::new();
    residuals.push(("a real".into(), relative_defect(&[a.clone(), a.conj().neg()])));

    let b1: Vec<Cplx> = ys.iter().map(|&y| l1.b.eval(y)).collect();
    let ratios: Vec<Cplx> = b1.iter().zip(&root).map(|(b, r)| b / r).collect();
    let gamma_c = ratios.iter().sum::<Cplx>() / ratios.len() as f64;
    let spread_b1 = ratios
        .iter()
        .map(|r| (r - gamma_c).norm())
        .fold(0.0, f64::max)
        / gamma_c.norm().max(f64::MIN_POSITIVE);
    residuals.push(("B1 = gamma sqrt(a)".into(), spread_b1));
    let gamma = (gamma_c.im.abs() <= 1e-10 * gamma_c.norm()).then_some(gamma_c.re);

    let b0 = &l0.b;
    let ad = a.diff();
    residuals.push((
        "Re B0 = a'".into(),
        relative_defect(&[b0.scale(half()), b0.conj().scale(half()), ad.neg()]),
    ));

    let (b0d, add) = (b0.diff(), a.diff_n(2));
    let mut c1_rel = Vec::new();
    let mut c0_rel = Vec::new();
    for (i, &y) in ys.iter().enumerate() {
        let g = gamma_c;
        let c1 = l1.c.eval(y) / g;
        let shown = (b0.eval(y) * 2.0 - ad.eval(y)) / root[i];
        // only the real part is pinned; the imaginary constant is free
        c1_rel.push((Cplx::new((c1 - shown).re, 0.0), c1.norm() + shown.norm()));
        let (av, adv, bv) = (a.eval(y), ad.eval(y), b0.eval(y));
        let rhs = b0d.eval(y) * 2.0 - add.eval(y)
            + (adv - bv * 2.0) * (adv * 3.0 - bv * 2.0) / (av * 2.0);
        let lhs = l0.c.eval(y) * 4.0;
        c0_rel.push((lhs - rhs, lhs.norm() + rhs.norm()));
    }
    residuals.push(("c1 = (2B0 - a')/sqrt(a) + iR".into(), spread(&c1_rel)));
    residuals.push(("4c0 relation + R".into(), spread(&c0_rel)));
    Ok(FinalConditions {
        gamma,
        exact_sqrt: exact.is_some(),
        residuals,
    })
}
