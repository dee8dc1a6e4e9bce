//! Eigenfunctions of the degenerate operator `L`, their transfer to `K`, the
//! two-segment SVD pipeline, and a brute-force dense oracle.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::catalog::{classify_regularity, CommutingPair, DiffOp, Regularity};
use crate::error::{Error, Result};
use crate::expalg::Cplx;
use crate::linalg::{eig_general, eig_hermitian, fix_phase, hermitian_defect, singular_values};
use crate::quadrature::{legendre_table, QuadratureRule, MAX_NODES};
use crate::verify::{discretize_k, discretize_l, DenseOperator, MAX_COLLOCATION};

pub const MAX_BASIS: usize = 200;
pub const DEFAULT_BASIS: usize = 96;
/// Galerkin matrices closer than this to Hermitian are solved as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const RANK_FLOOR: f64 = 1e-13;

/// Eigenpairs of `L` in the orthonormal Legendre basis
/// `φₖ(y) = P̂ₖ(t(y))/√|h|` of its segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub segment: (Cplx, Cplx),
    pub eigenvalues: Vec<Cplx>,
    /// One coefficient vector per eigenvalue.
    pub eigvecs: Vec<Vec<Cplx>>,
    pub residuals: Vec<f64>,
    pub basis_size: usize,
    pub self_adjoint: bool,
}

/// Values of `Σ cₖ φₖ` at the nodes of `rule`, which must live on `segment`.
pub fn expand_on(coeffs: &[Cplx], segment: (Cplx, Cplx), rule: &QuadratureRule) -> Vec<Cplx> {
    let scale = ((segment.1 - segment.0) * 0.5).norm().sqrt().recip();
    rule.mapped
        .iter()
        .map(|&y| {
            let t = ((y - (segment.0 + segment.1) * 0.5) / ((segment.1 - segment.0) * 0.5)).re;
            let [p, _, _] = legendre_table(coeffs.len(), t);
            coeffs.iter().zip(&p).map(|(c, p)| c * *p).sum::<Cplx>() * scale
        })
        .collect()
}

/// Coefficients of nodal values in the basis of the rule's own segment.
pub fn project_on(values: &[Cplx], rule: &QuadratureRule, basis: usize) -> Vec<Cplx> {
    let w = rule.arc_weights();
    let scale = rule.halfspan().norm().sqrt().recip();
    let mut out = vec![Cplx::default(); basis];
    for (q, &t) in rule.nodes.iter().enumerate() {
        let [p, _, _] = legendre_table(basis, t);
        for k in 0..basis {
            out[k] += values[q] * (w[q] * p[k] * scale);
        }
    }
    out
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Mode `n` sampled on `rule`.
    pub fn mode_values(&self, n: usize, rule: &QuadratureRule) -> Vec<Cplx> {
        expand_on(&self.eigvecs[n], self.segment, rule)
    }

    /// Largest coefficient of mode `n` on indices of the wrong parity.
    pub fn parity_defect(&self, n: usize) -> f64 {
        let v = &self.eigvecs[n];
        let even: f64 = v.iter().step_by(2).map(|c| c.norm()).fold(0.0, f64::max);
        let odd: f64 = v.iter().skip(1).step_by(2).map(|c| c.norm()).fold(0.0, f64::max);
        even.min(odd) / even.max(odd)
    }
}

/// Galerkin matrix `Aₘₙ = ⟨Lφₙ, φₘ⟩` (the basis is orthonormal, so the Gram
/// matrix is the identity).
pub fn galerkin_matrix(op: &DiffOp, basis: usize) -> Result<DMatrix<Cplx>> {
    if basis == 0 || basis > MAX_BASIS {
        return Err(Error::IllConditioned(format!(
            "basis size {basis} outside 1..={MAX_BASIS}"
        )));
    }
    let lt = op.in_parameter();
    let rule = QuadratureRule::reference((2 * basis + 40).min(MAX_NODES))?;
    let mut a = DMatrix::zeros(basis, basis);
    for (q, &t) in rule.nodes.iter().enumerate() {
        let tc = Cplx::new(t, 0.0);
        let (ca, cb, cc) = lt.coeffs_at(tc);
        let [p, dp, d2p] = legendre_table(basis, t);
        let w = rule.weights[q];
        for n in 0..basis {
            let lphi = (ca * d2p[n] + cb * dp[n] + cc * p[n]) * w;
            for m in 0..basis {
                a[(m, n)] += lphi * p[m];
            }
        }
    }
    Ok(a)
}

pub fn solve_l_eigen(op: &DiffOp, basis: usize) -> Result<Spectrum> {
    let a = galerkin_matrix(op, basis)?;
    let self_adjoint = hermitian_defect(&a) <= HERMITIAN_TOL;
    let (mut vals, vecs): (Vec<Cplx>, DMatrix<Cplx>) = if self_adjoint {
        let (v, m) = eig_hermitian(&a)?;
        (v.into_iter().map(|x| Cplx::new(x, 0.0)).collect(), m)
    } else {
        eig_general(&a)?
    };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    if self_adjoint {
        order.sort_by(|&i, &j| vals[i].re.total_cmp(&vals[j].re));
    } else {
        order.sort_by(|&i, &j| vals[i].norm().total_cmp(&vals[j].norm()));
    }
    let mut eigvecs = Vec::with_capacity(basis);
    for &i in &order {
        let mut v: Vec<Cplx> = vecs.column(i).iter().copied().collect();
        fix_phase(&mut v);
        eigvecs.push(v);
    }
    vals = order.iter().map(|&i| vals[i]).collect();
    let mut spec = Spectrum {
        segment: op.segment,
        eigenvalues: vals,
        eigvecs,
        residuals: Vec::new(),
        basis_size: basis,
        self_adjoint,
    };
    spec.residuals = collocation_residuals(op, &spec)?;
    Ok(spec)
}

/// `‖Lv − χv‖/‖v‖` for every mode, with `L` applied by collocation.
pub fn collocation_residuals(op: &DiffOp, spec: &Spectrum) -> Result<Vec<f64>> {
    let n = (spec.basis_size + 16).clamp(4, MAX_COLLOCATION);
    let rule = QuadratureRule::gauss_legendre(n, op.segment)?;
    let l = discretize_l(op, &rule)?;
    Ok((0..spec.len())
        .map(|k| {
            let v = spec.mode_values(k, &rule);
            let lv = l.apply(&v);
            let r: Vec<Cplx> = lv
                .iter()
                .zip(&v)
                .map(|(a, b)| a - spec.eigenvalues[k] * b)
                .collect();
            rule.norm(&r) / rule.norm(&v)
        })
        .collect())
}

/// Rayleigh quotients `κ = ⟨Kφ, φ⟩/⟨φ, φ⟩` of the eigenfunctions of `L` and
/// the proportionality residuals `‖Kφ − κφ‖/‖φ‖`.
pub fn k_spectrum_from_l(
    pair: &CommutingPair,
    spec: &Spectrum,
    n: usize,
) -> Result<(Vec<Cplx>, Vec<f64>)> {
    if pair.op_target.is_some() {
        return Err(Error::InvalidInput(
            "spectrum transfer needs a single-segment pair".into(),
        ));
    }
    let rule = QuadratureRule::gauss_legendre(n, pair.op.segment)?;
    let k = discretize_k(&pair.kernel, &rule, &rule)?;
    let mut kappas = Vec::with_capacity(spec.len());
    let mut res = Vec::with_capacity(spec.len());
    for m in 0..spec.len() {
        let phi = spec.mode_values(m, &rule);
        let kphi = k.apply(&phi);
        let kappa = rule.inner(&kphi, &phi) / rule.inner(&phi, &phi);
        let r: Vec<Cplx> = kphi.iter().zip(&phi).map(|(a, b)| a - kappa * b).collect();
        kappas.push(kappa);
        res.push(rule.norm(&r) / rule.norm(&phi));
    }
    Ok((kappas, res))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvdResult {
    pub sigmas: Vec<f64>,
    /// Source eigenvalue of `L` carried by each singular pair.
    pub chis: Vec<Cplx>,
    /// `uₙ` in the source basis.
    pub right_fns: Vec<Vec<Cplx>>,
    /// `vₙ = Kuₙ/σₙ` in the target basis.
    pub left_fns: Vec<Vec<Cplx>>,
    /// `‖L_target vₙ − χₙvₙ‖/(max(1, |χₙ|)‖vₙ‖)`.
    pub cross_residuals: Vec<f64>,
    /// `‖K*Kuₙ − σₙ²uₙ‖/(σₙ²‖uₙ‖)`.
    pub normal_residuals: Vec<f64>,
    pub gram_u: f64,
    pub gram_v: f64,
    pub regularity: Regularity,
    pub caveat: Option<String>,
}

/// Discrete `L²` adjoint of a Nyström matrix: `E*ⱼᵢ = conj(Eᵢⱼ) Wₜ(i)/Wₛ(j)`.
pub fn adjoint(k: &DenseOperator) -> DenseOperator {
    let ws = k.source.arc_weights();
    let wt = k.target.arc_weights();
    let e = &k.entries;
    DenseOperator {
        entries: DMatrix::from_fn(e.ncols(), e.nrows(), |j, i| e[(i, j)].conj() * (wt[i] / ws[j])),
        source: k.target.clone(),
        target: k.source.clone(),
    }
}

fn gram_defect(rule: &QuadratureRule, fns: &[Vec<Cplx>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in fns.iter().enumerate() {
        for (j, v) in fns.iter().enumerate() {
            let g = rule.inner(u, v);
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - want).norm());
        }
    }
    worst
}

/// Singular system of a two-segment `K` from the eigenfunctions of the source
/// operator. The `modes` largest singular values among the `modes + 10`
/// eigenfunctions of smallest `|χ|` are kept.
pub fn svd_pipeline(pair: &CommutingPair, basis: usize, n: usize, modes: usize) -> Result<SvdResult> {
    let Some(target_op) = &pair.op_target else {
        return Err(Error::InvalidInput("SVD pipeline needs a two-segment pair".into()));
    };
    let reg = classify_regularity(pair)?;
    let caveat = (reg.verdict == Regularity::Singular).then(|| {
        "target endpoints are not removable zeros of a; singular functions may not satisfy the boundary behaviour the commutation needs".to_string()
    });
    let spec = solve_l_eigen(&pair.op, basis)?;
    let src = QuadratureRule::gauss_legendre(n, pair.op.segment)?;
    let tgt = QuadratureRule::gauss_legendre(n, target_op.segment)?;
    let k = discretize_k(&pair.kernel, &src, &tgt)?;
    // the best-resolved modes are those with the smallest |χ|; for indefinite
    // `a` the ordering by real part starts at the far negative end
    let mut by_size: Vec<usize> = (0..spec.len()).collect();
    by_size.sort_by(|&i, &j| spec.eigenvalues[i].norm().total_cmp(&spec.eigenvalues[j].norm()));
    by_size.truncate((modes + 10).min(spec.len()));
    let mut cand: Vec<(f64, usize, Vec<Cplx>, Vec<Cplx>)> = by_size
        .into_iter()
        .map(|m| {
            let u = spec.mode_values(m, &src);
            let ku = k.apply(&u);
            (tgt.norm(&ku) / src.norm(&u), m, u, ku)
        })
        .collect();
    cand.sort_by(|a, b| b.0.total_cmp(&a.0));
    cand.truncate(modes);
    if let Some((idx, c)) = cand.iter().enumerate().find(|(_, c)| c.0 < RANK_FLOOR) {
        return Err(Error::RankCollapse { index: idx, sigma: c.0 });
    }
    let kstar = adjoint(&k);
    let lt = discretize_l(target_op, &tgt)?;
    let mut out = SvdResult {
        sigmas: Vec::new(),
        chis: Vec::new(),
        right_fns: Vec::new(),
        left_fns: Vec::new(),
        cross_residuals: Vec::new(),
        normal_residuals: Vec::new(),
        gram_u: 0.0,
        gram_v: 0.0,
        regularity: reg.verdict,
        caveat,
    };
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for (sigma, m, u, ku) in cand {
        let chi = spec.eigenvalues[m];
        let v: Vec<Cplx> = ku.iter().map(|x| x / sigma).collect();
        let ltv = lt.apply(&v);
        let r: Vec<Cplx> = ltv.iter().zip(&v).map(|(a, b)| a - chi * b).collect();
        out.cross_residuals.push(tgt.norm(&r) / (chi.norm().max(1.0) * tgt.norm(&v)));
        let kku = kstar.apply(&ku);
        let s2 = sigma * sigma;
        let r2: Vec<Cplx> = kku.iter().zip(&u).map(|(a, b)| a - b * s2).collect();
        out.normal_residuals.push(src.norm(&r2) / (s2 * src.norm(&u)));
        out.sigmas.push(sigma);
        out.chis.push(chi);
        out.right_fns.push(spec.eigvecs[m].clone());
        out.left_fns.push(project_on(&v, &tgt, basis.min(n)));
        us.push(u);
        vs.push(v);
    }
    out.gram_u = gram_defect(&src, &us);
    out.gram_v = gram_defect(&tgt, &vs);
    Ok(out)
}

/// Eigenvalues (same-rule operators only, by descending magnitude) and
/// singular values of the quadrature-weighted matrix `Wₜ^½ K Wₛ^−½`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub eigenvalues: Option<Vec<Cplx>>,
    pub singular_values: Vec<f64>,
}

pub fn weighted_matrix(k: &DenseOperator) -> DMatrix<Cplx> {
    let ws = k.source.arc_weights();
    let wt = k.target.arc_weights();
    DMatrix::from_fn(k.entries.nrows(), k.entries.ncols(), |i, j| {
        k.entries[(i, j)] * (wt[i].sqrt() / ws[j].sqrt())
    })
}

pub fn dense_oracle(k: &DenseOperator) -> Result<OracleSpectrum> {
    if k.source.len() > MAX_NODES || k.target.len() > MAX_NODES {
        return Err(Error::IllConditioned(format!("oracle limited to {MAX_NODES} nodes")));
    }
    let m = weighted_matrix(k);
    let square = k.source == k.target;
    let eigenvalues = if square {
        let mut v = if hermitian_defect(&m) <= 1e-13 {
            eig_hermitian(&m)?.0.into_iter().map(|x| Cplx::new(x, 0.0)).collect()
        } else {
            eig_general(&m)?.0
        };
        v.sort_by(|a: &Cplx, b: &Cplx| b.norm().total_cmp(&a.norm()));
        Some(v)
    } else {
        None
    };
    Ok(OracleSpectrum {
        eigenvalues,
        singular_values: singular_values(&m)?,
    })
}
