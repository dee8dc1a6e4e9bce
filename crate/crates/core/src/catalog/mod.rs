//! Every commuting kernel/operator family, with construction, validation,
//! gauge transforms and Laurent data.

pub mod diffop;
pub mod kernel;
pub mod pairs;
pub mod regularity;

use serde::{Deserialize, Serialize};

pub use diffop::{unit_segment, DiffOp};
pub use kernel::{DenomKind, KernelEval, KernelSpec, KernelValue, LocalLaurent};
pub use pairs::{
    build_descriptor, build_pair, build_unchecked, gauge_transform, validate_pair, CaseDescriptor,
    CommutingPair, PairCase, ValidationReport, VARIANTS,
};
pub use regularity::{classify_regularity, Regularity, RegularityReport};

use crate::error::{Error, Result};
use crate::expalg::Cplx;

/// Coefficients of a kernel about the origin in both conventions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentReport {
    /// Residue at 0 (zero when `k` is analytic there).
    pub pole: Cplx,
    /// `kₙ` with `k(z) − pole/z = Σ kₙ zⁿ/n!`.
    pub factorial: Vec<Cplx>,
    /// `cₙ` with `k(z) − pole/z = Σ cₙ zⁿ`.
    pub plain: Vec<Cplx>,
}

impl LaurentReport {
    /// `[k₀, k₁, …]` with `k(z) = z⁻¹(k₀ + k₁z + …)`.
    pub fn singular_plain(&self) -> Vec<Cplx> {
        std::iter::once(self.pole)
            .chain(self.plain.iter().copied())
            .collect()
    }
}

pub const MAX_LAURENT_ORDER: usize = 8;

pub fn kernel_laurent(k: &KernelSpec, order: usize) -> Result<LaurentReport> {
    if order > MAX_LAURENT_ORDER {
        return Err(Error::InvalidInput(format!(
            "Laurent order {order} exceeds {MAX_LAURENT_ORDER}"
        )));
    }
    let z0 = Cplx::new(0.0, 0.0);
    let (pole, plain) = match k.denom {
        DenomKind::One => (z0, k.gauged_numerator().taylor_at(z0, order)),
        _ => {
            let l = k.evaluator().laurent_at(z0);
            (l.pole, l.regular[..=order].to_vec())
        }
    };
    let mut fact = 1.0;
    let factorial = plain
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            if n > 0 {
                fact *= n as f64;
            }
            c * fact
        })
        .collect();
    Ok(LaurentReport {
        pole,
        factorial,
        plain,
    })
}
