//! Exponential polynomials: exact products, derivatives and shifts.

use commutant::{c, ExpPoly};

fn main() -> commutant::Result<()> {
    let lambda = c(1.5, 0.0);
    let a = ExpPoly::cosh(lambda).add_constant(-lambda.cosh()).scale(lambda.powi(-2));
    println!("a(y)   = {}", a.display_in("y"));
    println!("a'(y)  = {}", a.diff().display_in("y"));

    // cosh² = (1 + cosh 2λy)/2, exactly
    let sq = ExpPoly::cosh(lambda).try_mul(&ExpPoly::cosh(lambda))?;
    let double = ExpPoly::cosh(lambda * 2.0).add_constant(c(1.0, 0.0)).scale(c(0.5, 0.0));
    println!("cosh^2 - (1 + cosh 2y)/2 = {}", sq.sub(&double).display_in("y"));

    let shifted = a.translate(c(0.0, 2.0));
    println!("a(y + 2i) at y = 0.3: {} (direct {})", shifted.eval(c(0.3, 0.0)), a.eval(c(0.3, 2.0)));

    let p = ExpPoly::real_polynomial(&[1.0, 0.0, -2.0, 0.0, 1.0])?;
    match p.sqrt_exact(1e-12) {
        Some(r) => println!("sqrt({}) = {}", p.display_in("y"), r.display_in("y")),
        None => println!("no exact root"),
    }
    Ok(())
}
