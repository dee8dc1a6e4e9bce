//! Gauss–Legendre rules on straight segments of the complex plane, plus the
//! barycentric interpolation machinery built on the same nodes.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expalg::Cplx;

/// Largest node count accepted anywhere in the crate.
pub const MAX_NODES: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub segment: (Cplx, Cplx),
    /// Reference nodes in (−1, 1), strictly increasing.
    pub nodes: Vec<f64>,
    /// Reference weights, summing to 2.
    pub weights: Vec<f64>,
    pub mapped: Vec<Cplx>,
}

impl QuadratureRule {
    pub fn gauss_legendre(n: usize, segment: (Cplx, Cplx)) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::InvalidInput(format!(
                "quadrature size {n} outside 1..={MAX_NODES}"
            )));
        }
        if (segment.1 - segment.0).norm() == 0.0 {
            return Err(Error::InvalidInput("degenerate segment".into()));
        }
        let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("n > 0"));
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let mid = (segment.0 + segment.1) * 0.5;
        let half = (segment.1 - segment.0) * 0.5;
        let mapped = nodes.iter().map(|&t| mid + half * t).collect();
        Ok(QuadratureRule {
            segment,
            nodes,
            weights,
            mapped,
        })
    }

    /// Rule on the reference interval (−1, 1).
    pub fn reference(n: usize) -> Result<Self> {
        Self::gauss_legendre(n, (Cplx::new(-1.0, 0.0), Cplx::new(1.0, 0.0)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn midpoint(&self) -> Cplx {
        (self.segment.0 + self.segment.1) * 0.5
    }

    /// `dy/dt` of the affine parametrization.
    pub fn halfspan(&self) -> Cplx {
        (self.segment.1 - self.segment.0) * 0.5
    }

    pub fn map(&self, t: f64) -> Cplx {
        self.midpoint() + self.halfspan() * t
    }

    /// Parameter of a point, `(y − m)/h`; complex when `y` is off the line.
    pub fn parameter_of(&self, y: Cplx) -> Cplx {
        (y - self.midpoint()) / self.halfspan()
    }

    /// Arc-length weights `|h| wⱼ` for L² inner products on the segment.
    pub fn arc_weights(&self) -> Vec<f64> {
        let h = self.halfspan().norm();
        self.weights.iter().map(|w| w * h).collect()
    }

    /// `∫ f |dy|` over the segment.
    pub fn integrate<F: Fn(Cplx) -> Cplx>(&self, f: F) -> Cplx {
        let h = self.halfspan().norm();
        self.mapped
            .iter()
            .zip(&self.weights)
            .map(|(&y, &w)| f(y) * (w * h))
            .sum()
    }

    /// Weighted L² norm of nodal values.
    pub fn norm(&self, values: &[Cplx]) -> f64 {
        let h = self.halfspan().norm();
        values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v.norm_sqr() * w * h)
            .sum::<f64>()
            .sqrt()
    }

    /// Weighted inner product `Σ wⱼ uⱼ v̄ⱼ`.
    pub fn inner(&self, u: &[Cplx], v: &[Cplx]) -> Cplx {
        let h = self.halfspan().norm();
        u.iter()
            .zip(v)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b.conj() * (w * h))
            .sum()
    }

    pub fn barycentric_weights(&self) -> Vec<f64> {
        gauss_barycentric_weights(&self.nodes, &self.weights)
    }
}

/// Barycentric weights of Gauss–Legendre nodes, `(−1)ʲ √((1 − tⱼ²) wⱼ)`.
pub fn gauss_barycentric_weights(nodes: &[f64], weights: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(j, (&t, &w))| {
            let s = ((1.0 - t * t) * w).sqrt();
            if j % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Lagrange basis values `ℓⱼ(x)` at a real point via the second barycentric form.
pub fn interpolation_row(nodes: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    if let Some(k) = nodes.iter().position(|&t| t == x) {
        let mut row = vec![0.0; nodes.len()];
        row[k] = 1.0;
        return row;
    }
    let terms: Vec<f64> = nodes
        .iter()
        .zip(bary)
        .map(|(&t, &b)| b / (x - t))
        .collect();
    let s: f64 = terms.iter().sum();
    terms.into_iter().map(|v| v / s).collect()
}

/// First-derivative matrix on the nodes (negative-sum trick on the diagonal).
pub fn differentiation_matrix(nodes: &[f64], bary: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

/// Orthonormal Legendre values `P̂ₖ(t) = √((2k+1)/2) Pₖ(t)` and their first
/// and second derivatives for `k < n`.
pub fn legendre_table(n: usize, t: f64) -> [Vec<f64>; 3] {
    let mut p = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut d2p = vec![0.0; n];
    if n == 0 {
        return [p, dp, d2p];
    }
    p[0] = 1.0;
    if n > 1 {
        p[1] = t;
        dp[1] = 1.0;
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * t * p[k] - kf * p[k - 1]) / (kf + 1.0);
        // P′ₖ₊₁ = P′ₖ₋₁ + (2k+1) Pₖ, and likewise one order up
        dp[k + 1] = dp[k - 1] + (2.0 * kf + 1.0) * p[k];
        d2p[k + 1] = d2p[k - 1] + (2.0 * kf + 1.0) * dp[k];
    }
    for k in 0..n {
        let s = ((2 * k + 1) as f64 / 2.0).sqrt();
        p[k] *= s;
        dp[k] *= s;
        d2p[k] *= s;
    }
    [p, dp, d2p]
}

pub fn legendre_orthonormal(n: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let [p, dp, _] = legendre_table(n, t);
    (p, dp)
}

pub fn legendre_orthonormal_d2(n: usize, t: f64) -> Vec<f64> {
    let [_, _, d2p] = legendre_table(n, t);
    d2p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::c;

    #[test]
    fn weights_sum_to_two_and_nodes_increase() {
        for n in [1, 2, 5, 64, 200] {
            let r = QuadratureRule::reference(n).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let r = QuadratureRule::gauss_legendre(8, (c(0.0, 0.0), c(2.0, 0.0))).unwrap();
        // ∫₀² y^15 dy = 2^16/16
        let v = r.integrate(|y| y.powu(15));
        assert!((v.re - 4096.0).abs() < 1e-9);
    }

    #[test]
    fn complex_segment_arc_length() {
        let r = QuadratureRule::gauss_legendre(4, (c(0.0, 0.0), c(3.0, 4.0))).unwrap();
        let len = r.integrate(|_| c(1.0, 0.0));
        assert!((len.re - 5.0).abs() < 1e-14);
        assert!((r.parameter_of(r.mapped[2]) - c(r.nodes[2], 0.0)).norm() < 1e-15);
    }

    #[test]
    fn differentiation_is_exact_on_polynomials() {
        let r = QuadratureRule::reference(16).unwrap();
        let d = differentiation_matrix(&r.nodes, &r.barycentric_weights());
        let f: Vec<f64> = r.nodes.iter().map(|t| t.powi(7) - 2.0 * t).collect();
        let df = &d * nalgebra::DVector::from_vec(f);
        for (i, &t) in r.nodes.iter().enumerate() {
            assert!((df[i] - (7.0 * t.powi(6) - 2.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let r = QuadratureRule::reference(10).unwrap();
        let bw = r.barycentric_weights();
        let row = interpolation_row(&r.nodes, &bw, 0.3141);
        let v: f64 = row.iter().zip(&r.nodes).map(|(l, t)| l * t.powi(9)).sum();
        assert!((v - 0.3141f64.powi(9)).abs() < 1e-14);
    }

    #[test]
    fn orthonormal_legendre_gram_is_identity() {
        let r = QuadratureRule::reference(40).unwrap();
        let n = 30;
        let vals: Vec<Vec<f64>> = r.nodes.iter().map(|&t| legendre_orthonormal(n, t).0).collect();
        for i in 0..n {
            for j in 0..n {
                let g: f64 = (0..r.len()).map(|q| r.weights[q] * vals[q][i] * vals[q][j]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-12, "({i},{j}) {g}");
            }
        }
    }

    #[test]
    fn legendre_derivatives_match_differences() {
        let t = 0.37;
        let h = 1e-6;
        let (_, dp) = legendre_orthonormal(12, t);
        let d2 = legendre_orthonormal_d2(12, t);
        let (pp, dpp) = legendre_orthonormal(12, t + h);
        let (pm, dpm) = legendre_orthonormal(12, t - h);
        for k in 0..12 {
            assert!(((pp[k] - pm[k]) / (2.0 * h) - dp[k]).abs() < 1e-6);
            assert!(((dpp[k] - dpm[k]) / (2.0 * h) - d2[k]).abs() < 1e-5);
        }
    }
}
