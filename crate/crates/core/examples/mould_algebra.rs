//! Mould products, universal moulds and alternality.

use mould_calc::moulds::{is_alternal, Mould, UniversalMould};
use mould_calc::{Result, Scalar};

fn main() -> Result<()> {
    let alphabet = [Scalar::from(1), Scalar::from(2), Scalar::from(3)];
    let w = [Scalar::from(1), Scalar::from(3)];

    let la = UniversalMould::linearization().on_weights();
    let inv = UniversalMould::invfact().on_weights();
    println!("La^(1,3) = {}", la.eval(&w)?);
    println!("invfact^(1,3) = {}", inv.eval(&w)?);

    let prod = &la * &inv;
    println!("(La × invfact)^(1,3) = {}", prod.eval(&w)?);
    let assoc = (&(&la * &inv) * &la).equal_up_to(&(&la * &(&inv * &la)), &alphabet, 3)?;
    println!("product associative to length 3: {assoc}");

    let i = Mould::<Scalar>::identity();
    println!("I alternal: {:?}", is_alternal(&i, &alphabet, 4)?);
    match is_alternal(&la, &alphabet, 3)? {
        Some(v) => println!("La is not alternal: {v}"),
        None => println!("La alternal"),
    }
    let (a, b) = (&w[..1], &w[1..]);
    let swapped = [w[1].clone(), w[0].clone()];
    let sym = &la.eval(&w)? + &la.eval(&swapped)?;
    println!("La^(1,3) + La^(3,1) = {sym} = La^(1)·La^(3) = {}", &la.eval(a)? * &la.eval(b)?);
    Ok(())
}
