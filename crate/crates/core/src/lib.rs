//! Subset sums and completeness in cyclic groups `Z_n`.
//!
//! A set `A ⊆ Z_n` is *complete* when every residue is a sum of distinct
//! elements of `A`. This crate computes subset-sum sets (`S_A`) and
//! restricted sumsets (`l*A`) with bitset dynamic programming, extracts
//! explicit witnesses, finds arithmetic progressions in integer sumsets,
//! builds witnesses constructively from coprime elements, and runs
//! exhaustive and sampled completeness-threshold experiments.
//!
//! ```
//! use zn_complete::{is_complete, find_witness, CyclicSet, Modulus};
//!
//! let a = CyclicSet::new(Modulus::new(8)?, [1, 2, 3])?;
//! assert_eq!(is_complete(&a).missing, vec![7]);
//! assert_eq!(find_witness(&a, 5)?.picks, vec![2, 3]);
//! # Ok::<(), zn_complete::Error>(())
//! ```

mod bits;

pub mod ap;
pub mod cli;
pub mod constructive;
pub mod error;
pub mod experiments;
pub mod residue;
pub mod sumset;

pub use ap::{ap_meets_target, longest_ap, APReport, APSearchConfig, ApVerdict};
pub use constructive::{
    combine, lemma2_cover, lemma2_cover_dilated, olson_decompose, Combination, CoverageState,
    DecomposeConfig, Decomposer, Decomposition, DecompositionTrace,
};
pub use error::{Error, Result};
pub use residue::{
    dilate, mod_inverse, stabilizer_gcd, CoprimeMultiset, CyclicSet, IntegerSumSet, Modulus,
    ResidueSet,
};
pub use sumset::{
    cyclic_subset_sums, find_witness, integer_subset_sums, is_complete, restricted_sumset_cyclic,
    restricted_sumset_integers, Completeness, IntegerSumTable, SubsetSumTable, SumsetOptions,
    Witness,
};
