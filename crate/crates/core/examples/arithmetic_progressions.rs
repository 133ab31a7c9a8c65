//! Longest arithmetic progressions in integer sumsets.
//!
//! cargo run --example arithmetic_progressions

use zn_complete::{ap_meets_target, integer_subset_sums, longest_ap, APSearchConfig};

fn main() -> zn_complete::Result<()> {
    let a: Vec<u64> = (1..=20).collect();
    let verdict = ap_meets_target(&a, 5, 0.5)?;
    let r = &verdict.report;
    println!(
        "5*{{1..20}}: AP start {} difference {} length {} (needed {:.0}): {}",
        r.start, r.difference, r.length, verdict.required, verdict.meets
    );

    // even elements: sums are all even, so the best difference is 2
    let evens = [2, 4, 10, 16, 30];
    let sums = integer_subset_sums(&evens);
    let r = longest_ap(&sums, &APSearchConfig::new(10))?;
    println!("S_A for {evens:?}: {} members, longest AP {:?}", sums.len(), r.terms().collect::<Vec<_>>());

    let cfg = APSearchConfig::new(2).with_max_difference(1);
    let r = longest_ap(&sums, &cfg)?;
    println!("difference 1 only: length {}", r.length);
    Ok(())
}
