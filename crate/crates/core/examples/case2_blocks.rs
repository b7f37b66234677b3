//! q = p: the fixed-point block of C^k B^h is (x-1)^p or x^p - 1.

use permlike::group_builder::{case2_block_analysis, GroupSpec};

fn main() {
    let p = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3u64);
    let spec = GroupSpec::trivial(p, p).unwrap();
    for k in 0..p * p {
        let row: Vec<String> = (0..p)
            .map(|h| {
                let b = case2_block_analysis(&spec, k, h).unwrap();
                format!("{:?}/{:?}", b.block, b.unit_part)
            })
            .collect();
        println!("k = {k:>2}: {}", row.join("  "));
    }
}
