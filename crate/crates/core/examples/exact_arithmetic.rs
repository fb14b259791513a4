//! Gaussian rationals and first-order jets.

use mould_calc::{EpsJet, Result, Scalar};

fn main() -> Result<()> {
    let a: Scalar = "3/2-i".parse()?;
    let b: Scalar = "1/3+2i".parse()?;
    println!("a = {a}, b = {b}");
    println!("a + b = {}", &a + &b);
    println!("a * b = {}", &a * &b);
    println!("a / b = {}", a.checked_div(&b)?);
    println!("b^-2 = {}", b.pow(-2)?);
    println!("1 / 0 -> {:?}", Scalar::one().checked_div(&Scalar::zero()));

    // Dual numbers give exact first derivatives: f(x + ε) = f(x) + f'(x)ε.
    let x = EpsJet::new(a.clone(), Scalar::one());
    let f = &(&x * &x) * &x;
    println!("d/dx x^3 at x = {a}: {}", f.d);
    let g = x.inv()?;
    println!("d/dx 1/x at x = {a}: {}", g.d);
    Ok(())
}
