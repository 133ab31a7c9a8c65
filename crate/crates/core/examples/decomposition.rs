//! Witnesses through the split / progression / coverage pipeline.
//!
//! cargo run --example decomposition

use zn_complete::{find_witness, olson_decompose, CyclicSet, DecomposeConfig, Decomposer, Modulus};

fn main() -> zn_complete::Result<()> {
    let n = Modulus::new(100)?;
    let a = CyclicSet::coprime(n, n.units())?;
    let cfg = DecomposeConfig::with_split(20);

    let out = olson_decompose(&a, 37, &cfg)?;
    let trace = out.trace.as_ref().expect("non-zero target has a trace");
    println!("witness for 37: {:?}", out.witness.picks);
    println!(
        "A' has {} elements, B has {}; AP start {} difference {} length {}; d = {}",
        trace.a_prime.len(),
        trace.b.len(),
        trace.ap.start,
        trace.ap.difference,
        trace.ap.length,
        trace.d
    );
    println!("combination: {:?}", trace.combination);

    // one decomposer answers many targets
    let dec = Decomposer::new(&a, &cfg)?;
    let ok = (1..100).filter(|&t| dec.decompose(t).is_ok()).count();
    println!("{ok}/99 non-zero targets decomposed");

    // too few elements for a long enough progression
    let small = CyclicSet::coprime(Modulus::new(6)?, [1, 5])?;
    match olson_decompose(&small, 5, &DecomposeConfig::default()) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("n = 6, A = {{1, 5}}: {e}; plain DP gives {:?}", find_witness(&small, 5)?.picks),
    }
    Ok(())
}
