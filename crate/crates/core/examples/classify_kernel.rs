//! Decide from a handful of Taylor coefficients at the origin whether a
//! kernel can commute with a second-order operator.

use commutant::c;
use commutant::classifier::{classify, Convention, TaylorData};

fn main() -> commutant::Result<()> {
    let re = |v: &[f64]| v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>();

    // sin(z)/z: the prolate kernel
    let sinc = TaylorData::new(c(0.0, 0.0), re(&[1.0, 0.0, -1.0 / 3.0, 0.0, 1.0 / 5.0, 0.0, -1.0 / 7.0]), Convention::Factorial)?;
    // same with a k₃ term: nothing commutes
    let bent = TaylorData::new(c(0.0, 0.0), re(&[1.0, 0.0, -1.0 / 3.0, 0.01, 1.0 / 5.0, 0.0, -1.0 / 7.0]), Convention::Factorial)?;
    // 1/sinh(z): a simple pole
    let pole = TaylorData::new(c(1.0, 0.0), re(&[0.0, -1.0 / 6.0, 0.0, 7.0 / 360.0, 0.0, -31.0 / 15120.0]), Convention::Plain)?;

    for (name, data) in [("sinc", sinc), ("sinc + k3", bent), ("1/sinh", pole)] {
        let r = classify(&data)?;
        println!("{name:<10} gauge {:.3} -> {:?}", r.gauge_applied, r.verdict);
    }
    Ok(())
}
