//! q | p - 1: only the trivial corner on {0} keeps B permutation-like.

use permlike::group_builder::{case1_char_b, GroupSpec};

fn main() {
    for (p, s) in [(3, 2), (5, 2), (5, 4)] {
        let base = GroupSpec::trivial(p, s).unwrap();
        for k in 0..s {
            let mut spec = base.clone();
            spec.eps[0] = k * spec.modulus / s;
            let a = case1_char_b(&spec).unwrap();
            println!(
                "p={p} s={s} eps0=z_{s}^{k}: (x - eps0)(x^{s} - 1)^{}; B permutation-like: {}",
                a.t + a.m,
                a.b_permutation_like
            );
        }
    }
}
