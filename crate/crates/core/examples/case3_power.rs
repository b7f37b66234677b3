//! q = ps with s > 1: the power constraint B^q = C^{ap} and the coincidence test.

use permlike::group_builder::{analyze_spec, case3_power_constraint, corner_assignments};

fn main() {
    let specs = corner_assignments(3, 6).unwrap();
    for spec in specs.iter().take(8) {
        let c = case3_power_constraint(spec).unwrap();
        let r = analyze_spec(spec).unwrap();
        println!(
            "eps {:?} omegas {:?}: a = {:?}, coincidences {:?}, permutation-like {}",
            spec.eps,
            spec.omegas,
            c.a,
            c.coincidence
                .iter()
                .map(|x| x.coincides)
                .collect::<Vec<_>>(),
            r.permutation_like
        );
    }
    println!("... {} assignments in total", specs.len());
}
