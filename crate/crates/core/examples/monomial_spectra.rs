//! Spectra of monomial matrices and the permutation-likeness test.

use permlike::monomial::{
    choose_modulus, permutation_like, spectrum_decompose, MonomialMatrix, SpectrumMultiset,
};

fn main() {
    // a 3-cycle twisted by z_12^4 and a fixed point carrying -1
    let a = MonomialMatrix::new(12, vec![1, 2, 0, 3], vec![0, 0, 4, 6]).unwrap();
    println!("order {}", a.order());
    println!("cycle factors {:?}", a.char_factors());
    // x^3 = z_12^4 has no roots among the 12th roots of unity; lift first
    println!("with N = 12: {:?}", a.eigen_multiset().unwrap_err());
    let a = a
        .with_modulus(choose_modulus(std::slice::from_ref(&a)))
        .unwrap();
    println!(
        "with N = {}: spectrum {:?}",
        a.modulus(),
        a.eigen_multiset().unwrap().counts
    );
    println!("permutation-like: {:?}", permutation_like(&a).unwrap());

    let b = MonomialMatrix::new(12, vec![1, 2, 0, 3], vec![0, 0, 0, 0]).unwrap();
    println!(
        "plain 3-cycle + fixed point: {:?}",
        permutation_like(&b).unwrap()
    );

    for counts in [[(0, 4), (1, 5)], [(0, 5), (1, 4)]] {
        let mut s = SpectrumMultiset::new(2);
        for (e, c) in counts {
            s.insert(e, c);
        }
        println!("{:?} -> {:?}", s.counts, spectrum_decompose(&s));
    }
}
