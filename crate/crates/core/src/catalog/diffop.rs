use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expalg::{Cplx, ExpPoly};

/// `Lu = a u″ + b u′ + c u` on a straight segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffOp {
    pub a: ExpPoly,
    pub b: ExpPoly,
    pub c: ExpPoly,
    pub segment: (Cplx, Cplx),
}

pub fn unit_segment() -> (Cplx, Cplx) {
    (Cplx::new(-1.0, 0.0), Cplx::new(1.0, 0.0))
}

impl DiffOp {
    pub fn new(a: ExpPoly, b: ExpPoly, c: ExpPoly, segment: (Cplx, Cplx)) -> Result<Self> {
        if (segment.0 - segment.1).norm() == 0.0 {
            return Err(Error::InvalidInput("segment endpoints coincide".into()));
        }
        Ok(DiffOp { a, b, c, segment })
    }

    /// `b = a′` and the given `c`, on (−1, 1).
    pub fn symmetric(a: ExpPoly, c: ExpPoly) -> Self {
        let b = a.diff();
        DiffOp {
            a,
            b,
            c,
            segment: unit_segment(),
        }
    }

    pub fn with_segment(&self, segment: (Cplx, Cplx)) -> Self {
        DiffOp {
            segment,
            ..self.clone()
        }
    }

    pub fn endpoints(&self) -> [Cplx; 2] {
        [self.segment.0, self.segment.1]
    }

    pub fn is_real_segment(&self) -> bool {
        self.segment.0.im == 0.0 && self.segment.1.im == 0.0
    }

    /// `(a(y), b(y), c(y))`.
    pub fn coeffs_at(&self, y: Cplx) -> (Cplx, Cplx, Cplx) {
        (self.a.eval(y), self.b.eval(y), self.c.eval(y))
    }

    /// `L` applied to a function given by its value and first two derivatives.
    pub fn apply_at(&self, y: Cplx, u: Cplx, du: Cplx, d2u: Cplx) -> Cplx {
        let (a, b, c) = self.coeffs_at(y);
        a * d2u + b * du + c * u
    }

    /// The same operator written in the segment parameter `t ∈ (−1, 1)`,
    /// `y = m + h t`: coefficients `a/h²`, `b/h`, `c` composed with the map.
    pub fn in_parameter(&self) -> DiffOp {
        let m = (self.segment.0 + self.segment.1) * 0.5;
        let h = (self.segment.1 - self.segment.0) * 0.5;
        DiffOp {
            a: self.a.affine(m, h).scale((h * h).inv()),
            b: self.b.affine(m, h).scale(h.inv()),
            c: self.c.affine(m, h),
            segment: unit_segment(),
        }
    }

    pub fn scale(&self, s: Cplx) -> DiffOp {
        DiffOp {
            a: self.a.scale(s),
            b: self.b.scale(s),
            c: self.c.scale(s),
            segment: self.segment,
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        DiffOp {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
            c: self.c.add(&other.c),
            segment: self.segment,
        }
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scale(Cplx::new(-1.0, 0.0)))
    }

    /// Adds a multiple of the identity.
    pub fn shift(&self, s: Cplx) -> DiffOp {
        DiffOp {
            c: self.c.add_constant(s),
            ..self.clone()
        }
    }

    /// `e^{τy} L e^{−τy}`: `b − 2τa`, `c − τb + τ²a`.
    pub fn gauged(&self, tau: Cplx) -> DiffOp {
        DiffOp {
            a: self.a.clone(),
            b: self.b.sub(&self.a.scale(tau * 2.0)),
            c: self.c.sub(&self.b.scale(tau)).add(&self.a.scale(tau * tau)),
            segment: self.segment,
        }
    }

    pub fn identity(segment: (Cplx, Cplx)) -> DiffOp {
        DiffOp {
            a: ExpPoly::zero(),
            b: ExpPoly::zero(),
            c: ExpPoly::constant(Cplx::new(1.0, 0.0)),
            segment,
        }
    }

    /// Human-readable coefficient formulas.
    pub fn formulas(&self) -> [String; 3] {
        [
            self.a.display_in("y").to_string(),
            self.b.display_in("y").to_string(),
            self.c.display_in("y").to_string(),
        ]
    }

    /// Structural equality up to an additive constant in `c`.
    pub fn approx_eq_mod_constant(&self, other: &DiffOp, tol: f64) -> bool {
        self.a.approx_eq(&other.a, tol)
            && self.b.approx_eq(&other.b, tol)
            && self.c.approx_eq_mod_constant(&other.c, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::c;

    #[test]
    fn parameter_form_matches_chain_rule() {
        let a = ExpPoly::real_polynomial(&[-15.0, 8.0, -1.0]).unwrap();
        let op = DiffOp::new(a.clone(), a.diff(), ExpPoly::cosh(c(0.5, 0.0)), (c(3.0, 0.0), c(5.0, 0.0))).unwrap();
        let p = op.in_parameter();
        // u(y) = y³ ; in t: u(4 + t)
        let t = c(0.4, 0.0);
        let y = c(4.4, 0.0);
        let lhs = op.apply_at(y, y.powu(3), y.powu(2) * 3.0, y * 6.0);
        let rhs = p.apply_at(t, y.powu(3), y.powu(2) * 3.0, y * 6.0);
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
