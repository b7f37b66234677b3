//! Exact arithmetic in Q(z_N): cyclotomic polynomials, roots, inverses.

use permlike::cyclotomic::{cyclotomic_poly, root_power_sum, CycElem, RootExp};

fn main() {
    for n in [9, 12, 18, 25] {
        println!("Phi_{n} = {:?}", cyclotomic_poly(n));
    }

    let z = CycElem::from_root(RootExp::new(9, 1).unwrap());
    println!("z_9^6 = {}", z.pow(6));
    let x = &CycElem::one(9) + &z;
    let inv = x.inverse().expect("1 + z is nonzero");
    println!("(1 + z)^-1 = {inv}");
    assert!((&x * &inv).is_one());

    for k in 0..4 {
        println!(
            "sum of z_3^(jk), k = {k}: {}",
            root_power_sum(3, k, 9).unwrap()
        );
    }
}
