//! Dilations by units and the period (stabilizer) of a residue set.
//!
//! cargo run --example dilation_and_periods

use zn_complete::{cyclic_subset_sums, mod_inverse, CyclicSet, Modulus, ResidueSet, SumsetOptions};

fn main() -> zn_complete::Result<()> {
    let n = Modulus::new(12)?;
    let s = ResidueSet::from_residues(n, [1, 4, 7, 10]);
    println!("S = {:?}, smallest period {}", s.to_vec(), s.stabilizer_gcd()?);

    let c = 5;
    let dilated = s.dilate(c)?;
    let back = dilated.dilate(mod_inverse(c, n)?)?;
    println!("{c}·S = {:?}, and back again: {:?}", dilated.to_vec(), back.to_vec());

    match s.dilate(4) {
        Ok(_) => unreachable!("4 is not a unit mod 12"),
        Err(e) => println!("dilating by 4: {e}"),
    }

    // subset sums of multiples of 3 only reach the subgroup 3Z_12
    let a = CyclicSet::new(n, [3, 6])?;
    let sums = cyclic_subset_sums(&a, SumsetOptions::default());
    println!("S_{{3,6}} = {:?}, period {}", sums.to_vec(), sums.stabilizer_gcd()?);
    Ok(())
}
