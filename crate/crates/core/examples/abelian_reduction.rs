//! A diagonal B commuting with the maximal cycle: permutation-like forces B in <C>.

use permlike::group_builder::{
    abelian_reduction_check, abelian_reduction_exhaustive, cycle_diagonal,
};
use permlike::MonomialMatrix;

fn main() {
    let c = cycle_diagonal(4, 4).unwrap();
    for exps in [vec![0, 2, 0, 2], vec![0, 0, 0, 2], vec![0, 0, 0, 1]] {
        let b = MonomialMatrix::diagonal(4, exps.clone()).unwrap();
        let in_c = permlike::group_builder::power_of(&c, &b);
        println!(
            "{exps:?}: power of C {in_c:?}, implication holds {}",
            abelian_reduction_check(4, 4, &b).unwrap()
        );
    }
    for n in [4, 9] {
        let s = abelian_reduction_exhaustive(n).unwrap();
        println!(
            "n = {n}: {} trials, {} scanned, {} counterexamples",
            s.trials,
            s.scanned,
            s.counterexamples.len()
        );
    }
}
