//! Synthesize a permutation basis and show the exact images of C and B.

use permlike::basis_synth::{
    adapt_basis, dft_conjugate, synthesize_certificate, verify_certificate,
};
use permlike::group_builder::{build_b, build_c, GroupSpec};

fn show(name: &str, m: &[Vec<permlike::CycElem>]) {
    println!("{name}:");
    for row in m {
        let cells: Vec<&str> = row
            .iter()
            .map(|v| {
                if v.is_one() {
                    "1"
                } else if v.is_zero() {
                    "."
                } else {
                    "?"
                }
            })
            .collect();
        println!("  {}", cells.join(" "));
    }
}

fn main() {
    let spec = GroupSpec::trivial(3, 6).unwrap();
    let c = build_c(spec.p, spec.modulus).unwrap();
    let b = build_b(&spec).unwrap();
    let adapted = adapt_basis(&b);
    let mut cert = synthesize_certificate(&c, &adapted, spec.r).unwrap();
    cert.verified = verify_certificate(&cert, &c, &b).unwrap().is_ok();
    println!("{}", serde_json::to_string(&cert).unwrap());

    show("Q^-1 C Q", &dft_conjugate(&c).unwrap());
    show("Q^-1 B Q", &dft_conjugate(&adapted.normalized).unwrap());

    let mut tampered = cert.clone();
    tampered.delta[1] += 1;
    let err = verify_certificate(&tampered, &c, &b).unwrap().unwrap_err();
    println!(
        "tampered delta: entry ({}, {}) = {}",
        err.i, err.j, err.value
    );
}
