//! Subset sums mod n and over the integers, plus explicit witnesses.
//!
//! cargo run --example subset_sums

use zn_complete::{
    cyclic_subset_sums, find_witness, integer_subset_sums, is_complete, restricted_sumset_cyclic,
    restricted_sumset_integers, CyclicSet, Modulus, SumsetOptions,
};

fn main() -> zn_complete::Result<()> {
    let n = Modulus::new(8)?;
    let a = CyclicSet::new(n, [1, 2, 3])?;

    let sums = cyclic_subset_sums(&a, SumsetOptions::default());
    println!("S_A for A = {:?} mod {n}: {:?}", a.elements(), sums.to_vec());
    let nonempty = cyclic_subset_sums(&a, SumsetOptions::nonempty());
    println!("without the empty sum: {:?}", nonempty.to_vec());

    let verdict = is_complete(&a);
    println!("complete: {}, missing {:?}", verdict.complete, verdict.missing);

    for t in 0..n.get() {
        match find_witness(&a, t) {
            Ok(w) => println!("  {t} = sum of {:?} (positions {:?})", w.picks, w.indices),
            Err(e) => println!("  {t}: {e}"),
        }
    }

    println!("2*A mod 8: {:?}", restricted_sumset_cyclic(&a, 2)?.to_vec());
    println!("integer S_A of [1, 2, 3]: {:?}", integer_subset_sums(&[1, 2, 3]).to_vec());
    println!("integer 2*A of [1, 2, 3]: {:?}", restricted_sumset_integers(&[1, 2, 3], 2)?.to_vec());
    Ok(())
}
