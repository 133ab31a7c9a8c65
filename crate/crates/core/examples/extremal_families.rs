//! Incomplete sets that show the thresholds are sharp.
//!
//! cargo run --example extremal_families

use zn_complete::experiments::{diderrich_probe, divisor_family, small_sum_family, DEFAULT_BUDGET};
use zn_complete::Modulus;

fn main() -> zn_complete::Result<()> {
    for n in [20, 30, 45] {
        let m = Modulus::new(n)?;
        let small = small_sum_family(m);
        println!("n = {n}: {:?} misses {:?}", small.set.elements(), small.missing);
        if let Ok(div) = divisor_family(m) {
            println!("        {} elements, all 0 or 1 mod 3, miss {} residues", div.set.len(), div.missing.len());
        }
    }

    for n in [6, 10, 15] {
        let r = diderrich_probe(Modulus::new(n)?, DEFAULT_BUDGET)?;
        println!(
            "n = {n}: p + n/p - 2 = {}, exact threshold {:?}, largest incomplete size {}",
            r.reference, r.m_star, r.max_incomplete_size
        );
    }
    Ok(())
}
