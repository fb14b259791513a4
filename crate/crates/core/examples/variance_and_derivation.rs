//! Var_c as a derivation of the mould product, and the ∇ decomposition.

use mould_calc::moulds::TabulatedMould;
use mould_calc::random;
use mould_calc::variance::{check_derivation, check_nabla_decomposition, var_c, VarianceContext};
use mould_calc::{Letter, Result, Spectrum};

fn main() -> Result<()> {
    let lam = Spectrum::from_ints(&[1, -1]);
    let a: Vec<Letter> = vec!["(1,1)".parse()?, "(2,0)".parse()?];
    let c: Letter = "(0,2)".parse()?;
    let ctx = VarianceContext::new(c.clone(), &lam, a.clone())?;

    let mut rng = random::rng(5);
    let m = TabulatedMould::random(&a, 4, &mut rng).to_mould("M");
    let n = TabulatedMould::random(&a, 4, &mut rng).to_mould("N");

    let inside = VarianceContext::new(a[1].clone(), &lam, a.clone())?;
    let word = vec![a[0].clone(), a[1].clone(), a[1].clone()];
    let shown: Vec<String> = word.iter().map(ToString::to_string).collect();
    println!("Var_{}(M) on {shown:?} = {}", a[1], var_c(&m, &inside).eval(&word)?);

    for ctx in [&inside, &ctx] {
        let op = |x: &mould_calc::Mould<Letter>| var_c(x, ctx);
        match check_derivation(&op, &m, &n, ctx.extended_alphabet(), 4)? {
            None => println!("Var_{}(M×N) = Var(M)×N + M×Var(N) on all words up to length 4", ctx.letter()),
            Some(cx) => println!("Leibniz fails for {} {cx}", ctx.letter()),
        }
    }
    match check_nabla_decomposition(&m, &a, &lam, 4)? {
        None => println!("Σ_a Var_a(M) = ∇(M) on all words up to length 4"),
        Some(cx) => println!("∇ decomposition fails {cx}"),
    }
    Ok(())
}
