//! Orbits of multiplication by r on Z_{p^2}.

use permlike::residue_orbits::{conjugate_product_exponent, find_r, mu_orbits, ActionSpec};

fn main() {
    let p = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5u64);
    let units = permlike::arith::divisors(p * (p - 1));
    for q in units.into_iter().filter(|&q| q > 1) {
        let action = ActionSpec::new(p, find_r(p, q).unwrap()).unwrap();
        let d = mu_orbits(&action);
        println!(
            "q = {q:>2}, r = {:>2}, s = {}, t = {}: {} orbits",
            action.r,
            action.s(),
            action.t(),
            d.orbits.len()
        );
        for o in &d.orbits {
            println!("    {:?} {:?}", o.tag, o.members);
        }
    }

    let a = ActionSpec::new(p, p + 1).unwrap();
    let image: Vec<u64> = (0..p * p)
        .map(|x| conjugate_product_exponent(&a, x).unwrap())
        .collect();
    println!("conjugate products for r = p + 1: {image:?}");
}
