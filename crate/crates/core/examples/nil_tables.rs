//! The Nil mould: spot values, route agreement and closed-form tables.

use mould_calc::nilmould::{table, ConsistencyMode, NilSolver};
use mould_calc::{Result, Scalar};

fn w(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().copied().map(Scalar::from).collect()
}

fn main() -> Result<()> {
    let solver = NilSolver::new(ConsistencyMode::CheckAllPositions);
    for word in [&[0, 1, 0][..], &[2, 1, -1], &[1, -1, 2], &[3, 0, 0]] {
        println!("Nil^{word:?} = {}", solver.nil_value(&w(word)));
    }
    println!("{}", solver.consistency_check(&w(&[1, -1, 2])));
    println!("conflicts: {}", solver.conflicts().len());
    println!();
    println!("{}", table(3, 50, 7)?);
    Ok(())
}
