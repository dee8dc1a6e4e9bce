//! Commutation checks: the pointwise residue identity, discretized
//! commutators, and the principal-value boundary term.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{CommutingPair, DiffOp, KernelEval, KernelSpec};
use crate::error::{Error, Result};
use crate::expalg::{Cplx, ExpPoly};
use crate::quadrature::{differentiation_matrix, interpolation_row, QuadratureRule};

/// Points of the residue grid closer than this to a pole are skipped.
pub const POLE_EXCLUSION: f64 = 0.05;
pub const GRID_SIZE: usize = 20;
/// Collocation matrices are not trusted beyond this many nodes.
pub const MAX_COLLOCATION: usize = 200;

/// Coefficients and the derivatives the residue identity needs.
#[derive(Clone, Debug)]
pub struct OpDerivs {
    a: ExpPoly,
    a1: ExpPoly,
    a2: ExpPoly,
    b: ExpPoly,
    b1: ExpPoly,
    c: ExpPoly,
}

impl OpDerivs {
    pub fn new(op: &DiffOp) -> Self {
        OpDerivs {
            a1: op.a.diff(),
            a2: op.a.diff_n(2),
            b1: op.b.diff(),
            a: op.a.clone(),
            b: op.b.clone(),
            c: op.c.clone(),
        }
    }
}

/// Value of the two-operator residue identity together with the sum of the
/// magnitudes of its constituent products.
pub fn residue_terms(
    kv: &crate::catalog::KernelValue,
    l1: &OpDerivs,
    l2: &OpDerivs,
    y: Cplx,
    z: Cplx,
) -> (Cplx, f64) {
    let yz = y + z;
    let (a2s, b2s, c2s) = (l2.a.eval(yz), l2.b.eval(yz), l2.c.eval(yz));
    let (a1, b1, c1) = (l1.a.eval(y), l1.b.eval(y), l1.c.eval(y));
    let (a1p, a1pp, b1p) = (l1.a1.eval(y), l1.a2.eval(y), l1.b1.eval(y));
    let f = (a2s - a1) * kv.d2k + (a1p * 2.0 + b2s - b1) * kv.dk + (c2s - c1 + b1p - a1pp) * kv.k;
    // term-wise magnitudes, so cancellation inside a coefficient still counts
    let m = |p: &ExpPoly, at: Cplx| p.eval_magnitude(at);
    let scale = (m(&l2.a, yz) + m(&l1.a, y)) * kv.d2k.norm()
        + (2.0 * m(&l1.a1, y) + m(&l2.b, yz) + m(&l1.b, y)) * kv.dk.norm()
        + (m(&l2.c, yz) + m(&l1.c, y) + m(&l1.b1, y) + m(&l1.a2, y)) * kv.k.norm();
    (f, scale)
}

/// Left-hand side of the one-operator residue identity at `(y, z)`.
pub fn residue_r1(k: &KernelSpec, op: &DiffOp, y: Cplx, z: Cplx) -> Result<Cplx> {
    residue_r2(k, op, op, y, z)
}

/// Left-hand side of the two-operator identity; `l1` acts at `y`, `l2` at `y + z`.
pub fn residue_r2(k: &KernelSpec, l1: &DiffOp, l2: &DiffOp, y: Cplx, z: Cplx) -> Result<Cplx> {
    let kv = k.evaluator().eval(z)?;
    Ok(residue_terms(&kv, &OpDerivs::new(l1), &OpDerivs::new(l2), y, z).0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub y: Cplx,
    pub z: Cplx,
    pub abs: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResidual {
    pub max_relative: f64,
    pub max_abs: f64,
    pub skipped: usize,
    pub points: Vec<GridPoint>,
}

fn linspace(a: Cplx, b: Cplx, n: usize) -> Vec<Cplx> {
    (0..n)
        .map(|i| a + (b - a) * (i as f64 / (n - 1) as f64))
        .collect()
}

/// Residue grid of a pair: `y` over the source segment and `z` over
/// `[−2, 2]` (one segment) or `z = x − y` with `x` over the target.
pub fn grid_residual(pair: &CommutingPair) -> Result<GridResidual> {
    grid_residual_with(&pair.kernel, &pair.op, pair.op_target.as_ref())
}

pub fn grid_residual_with(
    kernel: &KernelSpec,
    op: &DiffOp,
    target: Option<&DiffOp>,
) -> Result<GridResidual> {
    let ev = kernel.evaluator();
    let l1 = OpDerivs::new(op);
    let l2 = OpDerivs::new(target.unwrap_or(op));
    let ys = linspace(op.segment.0, op.segment.1, GRID_SIZE);
    let mut pairs = Vec::with_capacity(GRID_SIZE * GRID_SIZE);
    match target {
        None => {
            let zs = linspace(Cplx::new(-2.0, 0.0), Cplx::new(2.0, 0.0), GRID_SIZE);
            for &y in &ys {
                for &z in &zs {
                    pairs.push((y, z));
                }
            }
        }
        Some(t) => {
            let xs = linspace(t.segment.0, t.segment.1, GRID_SIZE);
            for &y in &ys {
                for &x in &xs {
                    pairs.push((y, x - y));
                }
            }
        }
    }
    let reach = pairs.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max) + 1.0;
    let poles: Vec<Cplx> = kernel
        .poles_near(Cplx::new(0.0, 0.0), reach)
        .into_iter()
        .map(|p| p.0)
        .collect();
    let mut out = GridResidual {
        max_relative: 0.0,
        max_abs: 0.0,
        skipped: 0,
        points: Vec::with_capacity(pairs.len()),
    };
    for (y, z) in pairs {
        if poles.iter().any(|p| (z - p).norm() < POLE_EXCLUSION) {
            out.skipped += 1;
            continue;
        }
        let kv = ev.eval(z)?;
        let (f, scale) = residue_terms(&kv, &l1, &l2, y, z);
        let rel = if scale > 0.0 { f.norm() / scale } else { 0.0 };
        out.max_relative = out.max_relative.max(rel);
        out.max_abs = out.max_abs.max(f.norm());
        out.points.push(GridPoint {
            y,
            z,
            abs: f.norm(),
            relative: rel,
        });
    }
    Ok(out)
}

/// A matrix acting on nodal values, with the rules that give it meaning.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub entries: DMatrix<Cplx>,
    pub source: QuadratureRule,
    pub target: QuadratureRule,
}

impl DenseOperator {
    pub fn apply(&self, u: &[Cplx]) -> Vec<Cplx> {
        let v = &self.entries * DVector::from_column_slice(u);
        v.iter().copied().collect()
    }
}

const COINCIDE: f64 = 1e-12;

/// `PV∫₋₁¹ dt/(t* − t)` for `t*` in (−1, 1).
fn log_ratio(t: f64) -> f64 {
    ((1.0 + t) / (1.0 - t)).ln()
}

/// Nyström matrix of `(Ku)(x) = ∫ k(x − y) u(y) dy` from `source` to `target`.
///
/// Poles of `k` that the shifted target point meets on the source segment
/// are removed and integrated in closed form; the remainder `u(t) − u(t*)`
/// is handled by interpolation (or the differentiation matrix when `t*` is a
/// node).
pub fn discretize_k(
    k: &KernelSpec,
    source: &QuadratureRule,
    target: &QuadratureRule,
) -> Result<DenseOperator> {
    let ev = k.evaluator();
    let n = source.len();
    let hs = source.halfspan();
    let reach = (target.midpoint() - source.midpoint()).norm()
        + target.halfspan().norm()
        + hs.norm()
        + 1.0;
    let poles = k.poles_near(target.midpoint() - source.midpoint(), reach);
    let bary = source.barycentric_weights();
    let needs_d = !poles.is_empty();
    let dmat = if needs_d {
        differentiation_matrix(&source.nodes, &bary)
    } else {
        DMatrix::zeros(0, 0)
    };
    let rows: Vec<Result<Vec<Cplx>>> = target
        .mapped
        .par_iter()
        .map(|&x| kernel_row(&ev, &poles, source, &bary, &dmat, hs, x))
        .collect();
    let mut entries = DMatrix::zeros(target.len(), n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            entries[(i, j)] = v;
        }
    }
    Ok(DenseOperator {
        entries,
        source: source.clone(),
        target: target.clone(),
    })
}

/// Lagrange basis values at a complex point near the reference interval.
fn interpolation_row_c(nodes: &[f64], bary: &[f64], x: Cplx) -> Vec<Cplx> {
    let terms: Vec<Cplx> = nodes.iter().zip(bary).map(|(&t, &b)| b / (x - t)).collect();
    let s: Cplx = terms.iter().sum();
    terms.into_iter().map(|v| v / s).collect()
}

/// Poles inside the Bernstein ellipse where interpolation can gain at most
/// this factor are integrated analytically; outside it plain Gauss
/// quadrature already errs by less than its inverse squared.
const NEAR_GAIN: f64 = 1e5;

/// `|t − 1| + |t + 1|` on the boundary of that ellipse for an `n`-point rule.
fn near_ellipse(n: usize) -> f64 {
    let rho = NEAR_GAIN.powf(1.0 / n as f64);
    rho + 1.0 / rho
}

enum PoleSite {
    /// On the open segment, at real parameter `t*`.
    On(f64),
    /// Off the segment but close, at complex parameter `t*`.
    Near(Cplx),
}

fn kernel_row(
    ev: &KernelEval,
    poles: &[(Cplx, Cplx)],
    source: &QuadratureRule,
    bary: &[f64],
    dmat: &DMatrix<f64>,
    hs: Cplx,
    x: Cplx,
) -> Result<Vec<Cplx>> {
    let n = source.len();
    let t = &source.nodes;
    let w = &source.weights;
    let one = Cplx::new(1.0, 0.0);
    let ellipse = near_ellipse(n);
    let mut hits: Vec<(Cplx, Cplx, PoleSite)> = Vec::new();
    for &(zp, r) in poles {
        let ts = source.parameter_of(x - zp);
        if (ts - one).norm() < COINCIDE || (ts + one).norm() < COINCIDE {
            // Ku is logarithmically infinite at the segment ends
            return Err(Error::PoleHit(x));
        }
        if ts.im.abs() <= 1e-10 && ts.re.abs() < 1.0 {
            hits.push((zp, r, PoleSite::On(ts.re)));
        } else if (ts - one).norm() + (ts + one).norm() < ellipse {
            hits.push((zp, r, PoleSite::Near(ts)));
        }
    }
    let mut row = vec![Cplx::default(); n];
    if hits.is_empty() {
        for j in 0..n {
            row[j] = ev.eval(x - source.mapped[j])?.k * hs * w[j];
        }
        return Ok(row);
    }
    let subtracted: Vec<(Cplx, Cplx)> = hits.iter().map(|&(zp, r, _)| (zp, r)).collect();
    for j in 0..n {
        row[j] = ev.eval_regular_part(x - source.mapped[j], &subtracted)? * hs * w[j];
    }
    // ∫ u(t)/(t* − t) dt = Σ wⱼ (uⱼ − u(t*))/(t* − tⱼ) + u(t*) ∫ dt/(t* − t)
    for (_, r, site) in &hits {
        let r = *r;
        match *site {
            PoleSite::On(ts) => match t.iter().position(|&tj| (tj - ts).abs() < COINCIDE) {
                Some(q) => {
                    let mut s = 0.0;
                    for j in 0..n {
                        if j != q {
                            let v = w[j] / (t[q] - t[j]);
                            row[j] += r * v;
                            s += v;
                        }
                    }
                    row[q] += r * (log_ratio(t[q]) - s);
                    for m in 0..n {
                        row[m] -= r * (w[q] * dmat[(q, m)]);
                    }
                }
                None => {
                    let ell = interpolation_row(t, bary, ts);
                    let mut s = 0.0;
                    for j in 0..n {
                        let v = w[j] / (ts - t[j]);
                        row[j] += r * v;
                        s += v;
                    }
                    let c = log_ratio(ts) - s;
                    for m in 0..n {
                        row[m] += r * (c * ell[m]);
                    }
                }
            },
            PoleSite::Near(ts) => {
                let ell = interpolation_row_c(t, bary, ts);
                let mut s = Cplx::default();
                for j in 0..n {
                    let v = w[j] / (ts - t[j]);
                    row[j] += r * v;
                    s += v;
                }
                let c = ((ts + one) / (ts - one)).ln() - s;
                for m in 0..n {
                    row[m] += r * c * ell[m];
                }
            }
        }
    }
    Ok(row)
}

/// Collocation matrix of `L` on the rule's nodes.
pub fn discretize_l(op: &DiffOp, rule: &QuadratureRule) -> Result<DenseOperator> {
    let n = rule.len();
    if n > MAX_COLLOCATION {
        return Err(Error::IllConditioned(format!(
            "{n} collocation nodes exceed {MAX_COLLOCATION}"
        )));
    }
    if n < 4 {
        return Err(Error::InvalidInput("collocation needs at least 4 nodes".into()));
    }
    let d = differentiation_matrix(&rule.nodes, &rule.barycentric_weights());
    let d2 = &d * &d;
    let h = rule.halfspan();
    let (ih, ih2) = (h.inv(), (h * h).inv());
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        let (a, b, c) = op.coeffs_at(rule.mapped[i]);
        let (a, b) = (a * ih2, b * ih);
        for j in 0..n {
            entries[(i, j)] = a * d2[(i, j)] + b * d[(i, j)];
        }
        entries[(i, i)] += c;
    }
    Ok(DenseOperator {
        entries,
        source: rule.clone(),
        target: rule.clone(),
    })
}

/// Smooth test functions, defined in the segment parameter `t ∈ [−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestFn {
    One,
    Y,
    Y2,
    ExpY,
    Gaussian,
}

impl TestFn {
    pub const BATTERY: [TestFn; 5] = [TestFn::One, TestFn::Y, TestFn::Y2, TestFn::ExpY, TestFn::Gaussian];

    /// `(f, f′, f″)` at parameter `t`.
    pub fn eval(self, t: Cplx) -> (Cplx, Cplx, Cplx) {
        let one = Cplx::new(1.0, 0.0);
        let zero = Cplx::new(0.0, 0.0);
        match self {
            TestFn::One => (one, zero, zero),
            TestFn::Y => (t, one, zero),
            TestFn::Y2 => (t * t, t * 2.0, one * 2.0),
            TestFn::ExpY => {
                let e = t.exp();
                (e, e, e)
            }
            TestFn::Gaussian => {
                let g = (-t * t * 4.0).exp();
                (g, -t * 8.0 * g, (t * t * 64.0 - 8.0) * g)
            }
        }
    }

    /// Nodal values on a rule.
    pub fn sample(self, rule: &QuadratureRule) -> Vec<Cplx> {
        rule.nodes
            .iter()
            .map(|&t| self.eval(Cplx::new(t, 0.0)).0)
            .collect()
    }

    /// `(u, u′)` in the segment variable `y`, for a segment with the given
    /// midpoint and half-span.
    pub fn on_segment(self, mid: Cplx, half: Cplx, y: Cplx) -> (Cplx, Cplx) {
        let (f, f1, _) = self.eval((y - mid) / half);
        (f, f1 / half)
    }
}

/// `max_u ‖(K L₁ − L₂ K) u‖ / ‖u‖` at resolution `n`.
pub fn commutator_norm(pair: &CommutingPair, n: usize, fns: &[TestFn]) -> Result<f64> {
    let target_op = pair.target_op();
    let src = QuadratureRule::gauss_legendre(n, pair.op.segment)?;
    let tgt = QuadratureRule::gauss_legendre(n, target_op.segment)?;
    let k = discretize_k(&pair.kernel, &src, &tgt)?;
    let l1 = discretize_l(&pair.op, &src)?;
    let l2 = discretize_l(target_op, &tgt)?;
    let mut worst: f64 = 0.0;
    for &f in fns {
        let u = f.sample(&src);
        let klu = k.apply(&l1.apply(&u));
        let lku = l2.apply(&k.apply(&u));
        let diff: Vec<Cplx> = klu.iter().zip(&lku).map(|(a, b)| a - b).collect();
        let nu = src.norm(&u);
        if nu > 0.0 {
            worst = worst.max(tgt.norm(&diff) / nu);
        }
    }
    Ok(worst)
}

/// The boundary term left over after integrating the principal-value
/// commutator by parts around the excised ball `|y − x| < ε`.
pub fn phi_boundary_term(
    k: &KernelSpec,
    op: &DiffOp,
    u: &dyn Fn(Cplx) -> (Cplx, Cplx),
    x: f64,
    eps: f64,
) -> Result<Cplx> {
    let ev = k.evaluator();
    let x = Cplx::new(x, 0.0);
    let e = Cplx::new(eps, 0.0);
    let kp = ev.eval(e)?;
    let km = ev.eval(-e)?;
    let ap = op.a.diff();
    let ax = op.a.eval(x);
    let bx = op.b.eval(x);
    let (xm, xp) = (x - e, x + e);
    let (um, dum) = u(xm);
    let (up, dup) = u(xp);
    let da_m = op.a.eval(xm) - ax;
    let da_p = op.a.eval(xp) - ax;
    let left = da_m * dum + (op.b.eval(xm) - bx - ap.eval(xm)) * um;
    let right = da_p * dup + (op.b.eval(xp) - bx - ap.eval(xp)) * up;
    Ok(kp.k * left - km.k * right + kp.dk * um * da_m - km.dk * up * da_p)
}

/// Excision radii for the boundary-term study.
pub const PHI_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiStudy {
    pub x: f64,
    pub eps: Vec<f64>,
    pub phi: Vec<f64>,
    pub slope: f64,
}

/// `|Φ(ε)|` at `x` for the Gaussian test function on the source segment,
/// and its log–log slope.
pub fn phi_study(pair: &CommutingPair, x: f64, eps: &[f64]) -> Result<PhiStudy> {
    let seg = pair.op.segment;
    let mid = (seg.0 + seg.1) * 0.5;
    let half = (seg.1 - seg.0) * 0.5;
    let u = |y: Cplx| TestFn::Gaussian.on_segment(mid, half, y);
    let phi = eps
        .iter()
        .map(|&e| phi_boundary_term(&pair.kernel, &pair.op, &u, x, e).map(|p| p.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let slope = loglog_slope(eps, &phi);
    Ok(PhiStudy {
        x,
        eps: eps.to_vec(),
        phi,
        slope,
    })
}

/// Least-squares slope of `log|Φ|` against `log ε`.
pub fn loglog_slope(eps: &[f64], phi: &[f64]) -> f64 {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = phi.iter().map(|p| p.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
