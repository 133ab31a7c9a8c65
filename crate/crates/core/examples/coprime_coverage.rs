//! Covering Z_n with subset sums of n coprime elements, with witnesses.
//!
//! cargo run --example coprime_coverage -- 15

use zn_complete::{lemma2_cover, lemma2_cover_dilated, CoprimeMultiset, Modulus};

fn main() -> zn_complete::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(15);
    let modulus = Modulus::new(n)?;
    let units = modulus.units();
    let elems: Vec<u64> = (0..n as usize).map(|i| units[(i * 7 + 3) % units.len()]).collect();
    let multiset = CoprimeMultiset::new(modulus, elems.iter().copied())?;

    let state = lemma2_cover(&multiset)?;
    println!("elements: {elems:?}");
    println!("covered size after each step: {:?}", state.sizes());

    for (r, w) in state.witness_table().iter().take(6) {
        println!("  {r} = sum of {:?}", w.picks);
    }

    let dilated = lemma2_cover_dilated(&multiset)?;
    println!("dilated construction agrees: {}", dilated.covered() == state.covered());
    Ok(())
}
