//! Exhaustive classification of corner assignments for one prime.

use permlike::cli::classify;

fn main() {
    let p = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3u64);
    let c = classify(p, None, None, false).unwrap();
    for t in &c.tables {
        let orders: Vec<u64> = t.domains.iter().map(|d| d.root_order).collect();
        println!(
            "q = {:>2} (case {}), r = {:>2}, N = {:>4}, domains {orders:?}: {} scanned, survivors {:?}, verified {}",
            t.q,
            u8::from(t.case_tag),
            t.r,
            t.modulus,
            t.assignments,
            t.survivors.iter().map(|s| (&s.eps, &s.omegas)).collect::<Vec<_>>(),
            t.verified
        );
    }
    println!("{:?}", c.summary);
}
