//! Subset-sum sets `S_A`, restricted sumsets `l*A` and witness extraction.
//!
//! Every computation here is the prefix recurrence
//! `S_i = S_{i-1} ∪ (a_i + S_{i-1})` on bit masks, processed in the
//! canonical (ascending) element order of the input.

use serde::{Deserialize, Serialize};

use crate::bits::BitMask;
use crate::error::{Error, Result};
use crate::residue::{CyclicSet, IntegerSumSet, Modulus, ResidueSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetOptions {
    /// Whether the empty subset (sum 0) contributes.
    pub include_empty: bool,
}

impl Default for SumsetOptions {
    fn default() -> Self {
        Self {
            include_empty: true,
        }
    }
}

impl SumsetOptions {
    pub fn nonempty() -> Self {
        Self {
            include_empty: false,
        }
    }
}

/// An explicit sub-collection of an input whose sum is `target` mod `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub modulus: Modulus,
    pub target: u64,
    /// Positions in the source collection, strictly increasing.
    pub indices: Vec<usize>,
    /// The source elements at `indices`.
    pub picks: Vec<u64>,
}

impl Witness {
    pub fn empty(modulus: Modulus) -> Self {
        Self {
            modulus,
            target: 0,
            indices: Vec::new(),
            picks: Vec::new(),
        }
    }

    pub(crate) fn from_indices(
        modulus: Modulus,
        target: u64,
        indices: Vec<usize>,
        source: &[u64],
    ) -> Self {
        let picks = indices.iter().map(|&i| source[i]).collect();
        Self {
            modulus,
            target,
            indices,
            picks,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Re-checks the witness against its source collection: strictly increasing
    /// in-range indices, recorded picks match the source, and the sum is
    /// congruent to the target.
    pub fn verify(&self, source: &[u64]) -> bool {
        let n = self.modulus.get() as u128;
        self.indices.windows(2).all(|w| w[0] < w[1])
            && self.indices.len() == self.picks.len()
            && self
                .indices
                .iter()
                .zip(&self.picks)
                .all(|(&i, &v)| source.get(i) == Some(&v))
            && self.picks.iter().map(|&v| v as u128).sum::<u128>() % n == self.target as u128 % n
    }
}

/// `S_A` modulo `n`.
pub fn cyclic_subset_sums(set: &CyclicSet, opts: SumsetOptions) -> ResidueSet {
    let modulus = set.modulus();
    if opts.include_empty {
        let mut sums = ResidueSet::zero(modulus);
        for &a in set.elements() {
            sums.absorb_shift(a);
        }
        sums
    } else {
        let mut sums = ResidueSet::empty(modulus);
        for &a in set.elements() {
            sums.absorb_shift(a);
            sums.insert(a);
        }
        sums
    }
}

/// `S_A` over the integers, with bound `ΣA`.
pub fn integer_subset_sums(elements: &[u64]) -> IntegerSumSet {
    let total: u64 = elements.iter().sum();
    let mut bits = BitMask::zeros(total as usize + 1);
    bits.set(0);
    for &a in elements {
        let shifted = bits.shl(a as usize);
        bits.or_assign(&shifted);
    }
    IntegerSumSet::from_mask(bits)
}

fn check_cardinality(l: usize, size: usize) -> Result<()> {
    if l < 1 || l > size {
        return Err(Error::BadCardinality { l, size });
    }
    Ok(())
}

/// `l*A` modulo `n`: sums of exactly `l` distinct elements.
pub fn restricted_sumset_cyclic(set: &CyclicSet, l: usize) -> Result<ResidueSet> {
    check_cardinality(l, set.len())?;
    let modulus = set.modulus();
    // layers[j] = sums of exactly j of the elements seen so far
    let mut layers = vec![ResidueSet::empty(modulus); l + 1];
    layers[0] = ResidueSet::zero(modulus);
    for (i, &a) in set.elements().iter().enumerate() {
        for j in (1..=l.min(i + 1)).rev() {
            let shifted = layers[j - 1].shift(a);
            layers[j] = layers[j].union(&shifted);
        }
    }
    Ok(layers.swap_remove(l))
}

/// `l*A` over the integers. The bound is the sum of the `l` largest elements.
pub fn restricted_sumset_integers(elements: &[u64], l: usize) -> Result<IntegerSumSet> {
    check_cardinality(l, elements.len())?;
    let mut sorted = elements.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let bound: u64 = sorted[..l].iter().sum();
    let len = bound as usize + 1;
    let mut layers = vec![BitMask::zeros(len); l + 1];
    layers[0].set(0);
    for (i, &a) in elements.iter().enumerate() {
        for j in (1..=l.min(i + 1)).rev() {
            let shifted = layers[j - 1].shl(a as usize);
            layers[j].or_assign(&shifted);
        }
    }
    Ok(IntegerSumSet::from_mask(layers.swap_remove(l)))
}

/// Completeness verdict for a set: `missing` is empty iff `S_A = Z_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completeness {
    pub modulus: Modulus,
    pub complete: bool,
    pub missing: Vec<u64>,
}

pub fn is_complete(set: &CyclicSet) -> Completeness {
    let sums = cyclic_subset_sums(set, SumsetOptions::default());
    let missing = sums.missing();
    Completeness {
        modulus: set.modulus(),
        complete: missing.is_empty(),
        missing,
    }
}

/// All prefix layers `S_0 ⊆ S_1 ⊆ … ⊆ S_k` of the subset-sum recurrence,
/// kept so that any number of targets can be backtracked.
#[derive(Debug, Clone)]
pub struct SubsetSumTable {
    modulus: Modulus,
    elements: Vec<u64>,
    layers: Vec<ResidueSet>,
}

impl SubsetSumTable {
    pub fn build(set: &CyclicSet) -> Self {
        Self::from_elements(set.modulus(), set.elements())
    }

    pub(crate) fn from_elements(modulus: Modulus, elements: &[u64]) -> Self {
        let mut layers = Vec::with_capacity(elements.len() + 1);
        let mut cur = ResidueSet::zero(modulus);
        layers.push(cur.clone());
        for &a in elements {
            cur.absorb_shift(a);
            layers.push(cur.clone());
        }
        Self {
            modulus,
            elements: elements.to_vec(),
            layers,
        }
    }

    pub fn sums(&self) -> &ResidueSet {
        self.layers.last().expect("layer 0 always present")
    }

    /// Backtracks from `target`, dropping `a_i` whenever the target is
    /// reachable without it.
    pub fn witness(&self, target: u64) -> Result<Witness> {
        let modulus = self.modulus;
        let target = modulus.reduce(target);
        if !self.sums().contains(target) {
            return Err(Error::Unreachable {
                target,
                modulus: modulus.get(),
            });
        }
        let mut t = target;
        let mut picks = Vec::new();
        for i in (1..self.layers.len()).rev() {
            if self.layers[i - 1].contains(t) {
                continue;
            }
            let a = self.elements[i - 1];
            picks.push(i - 1);
            t = modulus.sub(t, a);
        }
        debug_assert_eq!(t, 0);
        picks.reverse();
        Ok(Witness::from_indices(modulus, target, picks, &self.elements))
    }
}

pub fn find_witness(set: &CyclicSet, target: u64) -> Result<Witness> {
    SubsetSumTable::build(set).witness(target)
}

/// Integer analogue of [`SubsetSumTable`]; witnesses are exact integer sums.
#[derive(Debug, Clone)]
pub struct IntegerSumTable {
    elements: Vec<u64>,
    layers: Vec<BitMask>,
}

impl IntegerSumTable {
    pub fn build(elements: &[u64]) -> Self {
        let total: u64 = elements.iter().sum();
        let mut cur = BitMask::zeros(total as usize + 1);
        cur.set(0);
        let mut layers = Vec::with_capacity(elements.len() + 1);
        layers.push(cur.clone());
        for &a in elements {
            let shifted = cur.shl(a as usize);
            cur.or_assign(&shifted);
            layers.push(cur.clone());
        }
        Self {
            elements: elements.to_vec(),
            layers,
        }
    }

    pub fn sums(&self) -> IntegerSumSet {
        IntegerSumSet::from_mask(self.layers.last().expect("layer 0").clone())
    }

    /// Indices of a sub-collection summing to exactly `value`.
    pub fn witness_indices(&self, value: u64) -> Option<Vec<usize>> {
        let last = self.layers.last()?;
        if value as usize >= last.len() || !last.get(value as usize) {
            return None;
        }
        let mut v = value as usize;
        let mut picks = Vec::new();
        for i in (1..self.layers.len()).rev() {
            if self.layers[i - 1].get(v) {
                continue;
            }
            picks.push(i - 1);
            v -= self.elements[i - 1] as usize;
        }
        debug_assert_eq!(v, 0);
        picks.reverse();
        Some(picks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn set(n: u64, e: &[u64]) -> CyclicSet {
        CyclicSet::new(m(n), e.iter().copied()).unwrap()
    }

    /// Direct enumeration over all 2^|A| subsets.
    fn brute_sums(n: u64, e: &[u64], include_empty: bool) -> Vec<u64> {
        let mut out = vec![false; n as usize];
        for mask in 0u32..(1 << e.len()) {
            if mask == 0 && !include_empty {
                continue;
            }
            let s: u64 = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).sum();
            out[(s % n) as usize] = true;
        }
        (0..n).filter(|&r| out[r as usize]).collect()
    }

    #[test]
    fn cyclic_examples() {
        let d = SumsetOptions::default();
        assert_eq!(cyclic_subset_sums(&set(5, &[]), d).to_vec(), vec![0]);
        assert_eq!(cyclic_subset_sums(&set(4, &[1, 2]), d).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(cyclic_subset_sums(&set(8, &[2, 4]), d).to_vec(), vec![0, 2, 4, 6]);
    }

    #[test]
    fn nonempty_option_recomputes() {
        // {1,3} in Z_4: nonempty sums 1, 3, 4≡0, so 0 stays
        let s = cyclic_subset_sums(&set(4, &[1, 3]), SumsetOptions::nonempty());
        assert_eq!(s.to_vec(), vec![0, 1, 3]);
        let s = cyclic_subset_sums(&set(8, &[2, 4]), SumsetOptions::nonempty());
        assert_eq!(s.to_vec(), vec![2, 4, 6]);
        assert!(cyclic_subset_sums(&set(5, &[]), SumsetOptions::nonempty()).is_empty());
    }

    #[test]
    fn integer_examples() {
        assert_eq!(integer_subset_sums(&[1, 2, 3]).to_vec(), (0..=6).collect::<Vec<_>>());
        assert_eq!(integer_subset_sums(&[]).to_vec(), vec![0]);
        let s = integer_subset_sums(&[5]);
        assert_eq!(s.to_vec(), vec![0, 5]);
        assert_eq!(s.bound(), 5);
    }

    #[test]
    fn restricted_examples() {
        assert_eq!(restricted_sumset_integers(&[1, 2, 3], 1).unwrap().to_vec(), vec![1, 2, 3]);
        assert_eq!(
            restricted_sumset_cyclic(&set(10, &[1, 2, 3]), 2).unwrap().to_vec(),
            vec![3, 4, 5]
        );
        assert_eq!(restricted_sumset_integers(&[1, 2, 3], 3).unwrap().to_vec(), vec![6]);
        assert_eq!(
            restricted_sumset_integers(&[1, 2, 3], 4),
            Err(Error::BadCardinality { l: 4, size: 3 })
        );
        assert_eq!(
            restricted_sumset_cyclic(&set(10, &[1]), 0),
            Err(Error::BadCardinality { l: 0, size: 1 })
        );
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&set(4, &[1, 2])).complete);
        let c = is_complete(&set(8, &[2, 4]));
        assert!(!c.complete);
        assert_eq!(c.missing, vec![1, 3, 5, 7]);
        let c = is_complete(&set(8, &[1, 2, 3]));
        assert_eq!(c.missing, vec![7]);
        // sum = n - 1 can still be complete
        assert!(is_complete(&set(7, &[1, 2, 3])).complete);
    }

    #[test]
    fn witness_examples() {
        let a = set(4, &[1, 2]);
        let w = find_witness(&a, 3).unwrap();
        assert_eq!(w.picks, vec![1, 2]);
        assert_eq!(w.indices, vec![0, 1]);
        assert!(find_witness(&a, 0).unwrap().is_empty());
        assert_eq!(
            find_witness(&set(8, &[2, 4]), 5),
            Err(Error::Unreachable { target: 5, modulus: 8 })
        );
    }

    #[test]
    fn witness_prefers_dropping_later_elements() {
        // 3 = 3 or 1+2; 3 is reachable from {1,2}, so the element 3 is dropped
        let w = find_witness(&set(10, &[1, 2, 3]), 3).unwrap();
        assert_eq!(w.picks, vec![1, 2]);
    }

    #[test]
    fn verify_rejects_tampering() {
        let a = set(11, &[1, 4, 6]);
        let mut w = find_witness(&a, 10).unwrap();
        assert!(w.verify(a.elements()));
        w.target = 9;
        assert!(!w.verify(a.elements()));
        w.target = 10;
        w.indices.reverse();
        assert!(!w.verify(a.elements()));
    }

    #[test]
    fn oracle_small_moduli() {
        for n in 2..=9u64 {
            let nonzero: Vec<u64> = (1..n).collect();
            for mask in 0u32..(1 << (n - 1)) {
                let e: Vec<u64> = (0..nonzero.len()).filter(|i| mask >> i & 1 == 1).map(|i| nonzero[i]).collect();
                let a = set(n, &e);
                for inc in [true, false] {
                    let got = cyclic_subset_sums(&a, SumsetOptions { include_empty: inc }).to_vec();
                    assert_eq!(got, brute_sums(n, &e, inc), "n={n} A={e:?} inc={inc}");
                }
            }
        }
    }

    #[test]
    fn integer_witnesses_are_exact() {
        let e = [3, 5, 9, 14];
        let t = IntegerSumTable::build(&e);
        for v in 0..=31 {
            match t.witness_indices(v) {
                Some(idx) => assert_eq!(idx.iter().map(|&i| e[i]).sum::<u64>(), v),
                None => assert!(!t.sums().contains(v)),
            }
        }
        assert_eq!(t.witness_indices(1000), None);
    }
}
