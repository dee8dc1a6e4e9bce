//! Self-adjointness and normality of second-order operators, by the split
//! into Hermitian and skew parts and by the raw commutator with the adjoint.

use commutant::catalog::{unit_segment, DiffOp};
use commutant::normality::{adjoint, is_normal};
use commutant::{c, ExpPoly};

fn report(name: &str, op: &DiffOp) -> commutant::Result<()> {
    let r = is_normal(op)?;
    println!("{name}: self-adjoint {}, normal {}, |LL* - L*L| {:.1e}", r.self_adjoint.self_adjoint, r.normal, r.direct_defect);
    let res: Vec<String> = r.split_test.residuals.iter().map(|x| format!("{x:.1e}")).collect();
    println!("  split residuals {}", res.join(", "));
    if let Some(f) = r.final_conditions {
        println!("  gamma {:?}, exact root {}", f.gamma, f.exact_sqrt);
    }
    Ok(())
}

fn main() -> commutant::Result<()> {
    let s = ExpPoly::real_polynomial(&[1.0, 0.0, -1.0])?;
    let a = s.try_mul(&s)?;
    let op = DiffOp::new(a.clone(), a.diff().add(&s), ExpPoly::real_polynomial(&[0.0, -1.0, 2.0])?, unit_segment())?;
    let [aa, bb, cc] = adjoint(&op).formulas();
    println!("L* = ({aa}) u'' + ({bb}) u' + ({cc}) u");
    report("normal, not self-adjoint", &op)?;
    report("same, times 0.6 + 1.7i", &op.scale(c(0.6, 1.7)))?;

    let b = ExpPoly::real_polynomial(&[0.0, 2.0])?.add(&ExpPoly::polynomial(&[c(0.0, 0.0), c(0.0, 1.0)])?);
    let drift = DiffOp::new(ExpPoly::real_polynomial(&[-1.0, 0.0, 1.0])?, b, ExpPoly::polynomial(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])?, unit_segment())?;
    report("imaginary drift", &drift)?;
    Ok(())
}
