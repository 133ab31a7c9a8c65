//! Constructive completeness: incremental residue coverage by a coprime
//! multiset, and the split-and-combine decomposition that turns a long AP
//! in the integer subset sums of a small part `A'` plus coverage modulo
//! `d = gcd(d', n)` by the rest `B` into a witness for any target.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::ap::{longest_ap, APReport, APSearchConfig};
use crate::error::{Error, Result};
use crate::residue::{mod_inverse, CoprimeMultiset, CyclicSet, Modulus, ResidueSet};
use crate::sumset::{IntegerSumTable, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Link {
    prev: u64,
    index: usize,
}

/// State of the coverage induction after consuming a prefix of a multiset.
///
/// Each covered residue other than 0 remembers the residue it was reached
/// from and the element that was added, so witnesses are reconstructed on
/// demand rather than stored.
#[derive(Debug, Clone)]
pub struct CoverageState {
    modulus: Modulus,
    elements: Vec<u64>,
    covered: ResidueSet,
    links: Vec<Option<Link>>,
    sizes: Vec<usize>,
}

impl CoverageState {
    pub fn new(modulus: Modulus) -> Self {
        Self {
            modulus,
            elements: Vec::new(),
            covered: ResidueSet::zero(modulus),
            links: vec![None; modulus.get() as usize],
            sizes: vec![1],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn covered(&self) -> &ResidueSet {
        &self.covered
    }

    /// Number of elements consumed.
    pub fn step(&self) -> usize {
        self.elements.len()
    }

    /// `|covered|` after each step, starting with the initial `{0}`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    fn check_unit(&self, a: u64) -> Result<u64> {
        let a = self.modulus.reduce(a);
        if !self.modulus.is_unit(a) {
            return Err(Error::NotCoprime {
                value: a,
                modulus: self.modulus.get(),
            });
        }
        Ok(a)
    }

    fn record(&mut self, next: ResidueSet, a: u64) {
        let index = self.elements.len();
        for r in next.members() {
            if !self.covered.contains(r) {
                let prev = self.modulus.sub(r, a);
                debug_assert!(self.covered.contains(prev));
                self.links[r as usize] = Some(Link { prev, index });
            }
        }
        self.covered = next;
        self.elements.push(a);
        self.sizes.push(self.covered.len());
    }

    /// `covered ← covered ∪ (a + covered)`.
    pub fn push(&mut self, a: u64) -> Result<()> {
        let a = self.check_unit(a)?;
        let next = self.covered.union(&self.covered.shift(a));
        self.record(next, a);
        Ok(())
    }

    /// Same update as [`push`](Self::push), computed by dilating the state
    /// by `a⁻¹`, adjoining the unit element 1, and dilating back.
    pub fn push_dilated(&mut self, a: u64) -> Result<()> {
        let a = self.check_unit(a)?;
        let inv = mod_inverse(a, self.modulus)?;
        let normalized = self.covered.dilate(inv)?;
        let with_unit = normalized.union(&normalized.shift(1));
        let next = with_unit.dilate(a)?;
        self.record(next, a);
        Ok(())
    }

    /// Witness for `r` as a sub-multiset of the consumed elements.
    pub fn witness(&self, r: u64) -> Option<Witness> {
        let target = self.modulus.reduce(r);
        if !self.covered.contains(target) {
            return None;
        }
        let mut indices = Vec::new();
        let mut cur = target;
        while let Some(link) = self.links[cur as usize] {
            indices.push(link.index);
            cur = link.prev;
        }
        debug_assert_eq!(cur, 0);
        indices.reverse();
        Some(Witness::from_indices(
            self.modulus,
            target,
            indices,
            &self.elements,
        ))
    }

    /// One witness per covered residue.
    pub fn witness_table(&self) -> BTreeMap<u64, Witness> {
        self.covered
            .members()
            .filter_map(|r| self.witness(r).map(|w| (r, w)))
            .collect()
    }

    /// Smallest covered residue congruent to `class` modulo `d`.
    pub fn covered_in_class(&self, class: u64, d: u64) -> Option<u64> {
        let class = class % d;
        self.covered.members().find(|s| s % d == class)
    }
}

fn run_cover(
    multiset: &CoprimeMultiset,
    step: impl Fn(&mut CoverageState, u64) -> Result<()>,
) -> Result<CoverageState> {
    if multiset.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut state = CoverageState::new(multiset.modulus());
    for &a in multiset.elements() {
        step(&mut state, a)?;
    }
    Ok(state)
}

/// Consumes the multiset element by element, growing the covered set.
pub fn lemma2_cover(multiset: &CoprimeMultiset) -> Result<CoverageState> {
    run_cover(multiset, CoverageState::push)
}

/// As [`lemma2_cover`], but each step goes through the unit normalization.
pub fn lemma2_cover_dilated(multiset: &CoprimeMultiset) -> Result<CoverageState> {
    run_cover(multiset, CoverageState::push_dilated)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeConfig {
    /// Size of `A'`; `None` means `⌈2√n⌉`.
    pub split: Option<usize>,
    /// Double the split (up to `|A|/2`) when no long enough AP is found.
    pub retry: bool,
    pub max_difference: Option<u64>,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        Self {
            split: None,
            retry: true,
            max_difference: None,
        }
    }
}

impl DecomposeConfig {
    pub fn with_split(split: usize) -> Self {
        Self {
            split: Some(split),
            ..Self::default()
        }
    }

    pub fn default_split(modulus: Modulus) -> usize {
        let n = modulus.get();
        // ⌈2√n⌉ = ⌈√(4n)⌉
        let r = (4 * n).isqrt();
        (if r * r == 4 * n { r } else { r + 1 }) as usize
    }

    fn schedule(&self, modulus: Modulus, size: usize) -> Vec<usize> {
        let first = self.split.unwrap_or_else(|| Self::default_split(modulus)).max(1);
        let cap = size / 2;
        let mut out = vec![first.min(size)];
        if self.retry {
            let mut s = first;
            while s < cap {
                s = (s * 2).min(cap);
                out.push(s);
            }
        }
        out
    }
}

/// How a target was assembled: `p ∈ P'` plus `s ∈ S_B` with `p + s ≡ t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Combination {
    pub target: u64,
    /// Index of `p` in `P'`.
    pub k: u64,
    /// Integer subset sum of `A'`, `p = start + k·d'`.
    pub p: u64,
    /// Residue in `S_B`.
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTrace {
    pub a_prime: CyclicSet,
    pub b: CyclicSet,
    pub ap: APReport,
    pub d_prime: u64,
    pub d: u64,
    pub combination: Combination,
    /// Split sizes tried, in order; the last one succeeded.
    pub attempts: Vec<usize>,
}

impl DecompositionTrace {
    /// Internal consistency of the trace (independent of the witness).
    pub fn is_consistent(&self, modulus: Modulus) -> bool {
        let n = modulus.get();
        let c = &self.combination;
        self.d == self.d_prime.gcd(&n)
            && self.ap.difference == self.d_prime
            && self.ap.term(c.k) == Some(c.p)
            && modulus.add(c.p, c.s) == modulus.reduce(c.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub witness: Witness,
    /// `None` when the target is 0 and the empty witness was returned directly.
    pub trace: Option<DecompositionTrace>,
}

/// The precomputed pipeline for one set `A`; answers any number of targets.
#[derive(Debug, Clone)]
pub struct Decomposer {
    set: CyclicSet,
    split: usize,
    attempts: Vec<usize>,
    prime_table: IntegerSumTable,
    ap: APReport,
    d: u64,
    cover: Option<CoverageState>,
}

impl Decomposer {
    pub fn new(set: &CyclicSet, cfg: &DecomposeConfig) -> Result<Self> {
        let modulus = set.modulus();
        let n = modulus.get();
        if let Some(&e) = set.elements().iter().find(|&&e| !modulus.is_unit(e)) {
            return Err(Error::NotCoprime { value: e, modulus: n });
        }
        let mut attempts = Vec::new();
        let mut best_found = 0;
        let mut found = None;
        for split in cfg.schedule(modulus, set.len()) {
            attempts.push(split);
            let prime = &set.elements()[..split];
            let table = IntegerSumTable::build(prime);
            let mut ap_cfg = APSearchConfig::new(n);
            ap_cfg.max_difference = cfg.max_difference;
            let ap = longest_ap(&table.sums(), &ap_cfg)?;
            if ap.length >= n {
                found = Some((split, table, ap));
                break;
            }
            best_found = best_found.max(ap.length);
        }
        let Some((split, prime_table, ap)) = found else {
            return Err(Error::ApNotFound {
                needed: n,
                found: best_found,
                split: *attempts.last().unwrap_or(&0),
            });
        };

        let d = ap.difference.gcd(&n);
        let cover = if d > 1 {
            let rest = &set.elements()[split..];
            if rest.len() as u64 <= d {
                return Err(Error::SplitTooSmall {
                    remainder: rest.len(),
                    d,
                });
            }
            Some(lemma2_cover(&CoprimeMultiset::new(modulus, rest.iter().copied())?)?)
        } else {
            None
        };

        Ok(Self {
            set: set.clone(),
            split,
            attempts,
            prime_table,
            ap,
            d,
            cover,
        })
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn ap(&self) -> &APReport {
        &self.ap
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn decompose(&self, target: u64) -> Result<Decomposition> {
        let modulus = self.set.modulus();
        let t = modulus.reduce(target);
        let (combination, b_witness) = combine(modulus, &self.ap, self.cover.as_ref(), t)?;
        let p = combination.p;
        let d_prime = self.ap.difference;
        let d = self.d;
        let b_indices: Vec<usize> = b_witness
            .map(|w| w.indices.into_iter().map(|i| i + self.split).collect())
            .unwrap_or_default();

        let mut indices = self
            .prime_table
            .witness_indices(p)
            .expect("AP terms are integer subset sums of A'");
        indices.extend(b_indices);
        let witness = Witness::from_indices(modulus, t, indices, self.set.elements());
        assert!(witness.verify(self.set.elements()), "decomposition witness failed to verify");

        let (a_prime, b) = self.set.split_at(self.split);
        Ok(Decomposition {
            witness,
            trace: Some(DecompositionTrace {
                a_prime,
                b,
                ap: self.ap.clone(),
                d_prime,
                d,
                combination,
                attempts: self.attempts.clone(),
            }),
        })
    }
}

/// Picks `p = start + k·d'` in the progression and `s` covered by `cover`
/// with `p + s ≡ t (mod n)`. Without a cover (`gcd(d', n) = 1`), `s = 0`.
///
/// `{k·d' mod n}` is the subgroup `dZ_n`, so it suffices that `s ≡ t − start
/// (mod d)`; `k` then solves `k·(d'/d) ≡ (t − start − s)/d (mod n/d)`.
pub fn combine(
    modulus: Modulus,
    ap: &APReport,
    cover: Option<&CoverageState>,
    target: u64,
) -> Result<(Combination, Option<Witness>)> {
    let n = modulus.get();
    let t = modulus.reduce(target);
    let d_prime = ap.difference;
    let d = d_prime.gcd(&n);
    let start = ap.start;

    let (s, b_witness) = if d == 1 {
        (0, None)
    } else {
        let cover = cover.ok_or(Error::SplitTooSmall { remainder: 0, d })?;
        let class = modulus.sub(t, start) % d;
        let s = cover
            .covered_in_class(class, d)
            .ok_or(Error::SplitTooSmall {
                remainder: cover.step(),
                d,
            })?;
        (s, cover.witness(s))
    };

    let rhs = modulus.sub(modulus.sub(t, start), s);
    debug_assert_eq!(rhs % d, 0);
    let reduced_n = n / d;
    let k = if reduced_n == 1 {
        0
    } else {
        let m = Modulus::new(reduced_n)?;
        m.mul(rhs / d, mod_inverse(m.reduce(d_prime / d), m)?)
    };
    let p = ap.term(k).ok_or(Error::ApNotFound {
        needed: k + 1,
        found: ap.length,
        split: 0,
    })?;
    Ok((Combination { target: t, k, p, s }, b_witness))
}

/// Runs the decomposition pipeline for a single target.
///
/// Target 0 returns the empty witness without running the pipeline.
pub fn olson_decompose(set: &CyclicSet, target: u64, cfg: &DecomposeConfig) -> Result<Decomposition> {
    let modulus = set.modulus();
    if modulus.reduce(target) == 0 {
        return Ok(Decomposition {
            witness: Witness::empty(modulus),
            trace: None,
        });
    }
    Decomposer::new(set, cfg)?.decompose(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumset::find_witness;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn ms(n: u64, e: &[u64]) -> CoprimeMultiset {
        CoprimeMultiset::new(m(n), e.iter().copied()).unwrap()
    }

    /// Residues reachable by sub-multisets, by enumeration.
    fn brute_cover(n: u64, e: &[u64]) -> Vec<u64> {
        let mut seen = vec![false; n as usize];
        for mask in 0u32..(1 << e.len()) {
            let s: u64 = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).sum();
            seen[(s % n) as usize] = true;
        }
        (0..n).filter(|&r| seen[r as usize]).collect()
    }

    #[test]
    fn cover_examples() {
        let st = lemma2_cover(&ms(3, &[1, 1, 1])).unwrap();
        assert!(st.covered().is_full());
        assert_eq!(st.witness(2).unwrap().len(), 2);

        let st = lemma2_cover(&ms(4, &[3, 3])).unwrap();
        assert_eq!(st.covered().to_vec(), vec![0, 2, 3]);
        assert_eq!(st.witness(2).unwrap().indices, vec![0, 1]);

        let st = lemma2_cover(&ms(5, &[2, 2, 2, 2, 2])).unwrap();
        assert!(st.covered().is_full());
        assert_eq!(st.witness(1).unwrap().len(), 3);
    }

    #[test]
    fn dilated_examples() {
        let st = lemma2_cover_dilated(&ms(5, &[1])).unwrap();
        assert_eq!(st.covered().to_vec(), vec![0, 1]);
        let a = lemma2_cover(&ms(4, &[3, 3])).unwrap();
        let b = lemma2_cover_dilated(&ms(4, &[3, 3])).unwrap();
        assert_eq!(a.covered(), b.covered());
        let st = lemma2_cover_dilated(&ms(5, &[2, 3])).unwrap();
        assert_eq!(st.covered().to_vec(), vec![0, 2, 3]);
    }

    #[test]
    fn cover_rejects_bad_input() {
        assert!(CoprimeMultiset::new(m(6), [2]).is_err());
        assert_eq!(lemma2_cover(&ms(6, &[])).unwrap_err(), Error::EmptySet);
        let mut st = CoverageState::new(m(6));
        assert!(st.push(3).is_err());
        assert!(st.push_dilated(4).is_err());
    }

    #[test]
    fn coverage_matches_enumeration_and_grows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=20u64 {
            let units = m(n).units();
            for _ in 0..200 {
                let len = rng.gen_range(1..=n.min(12) as usize);
                let e: Vec<u64> = (0..len).map(|_| units[rng.gen_range(0..units.len())]).collect();
                let st = lemma2_cover(&ms(n, &e)).unwrap();
                assert_eq!(st.covered().to_vec(), brute_cover(n, &e));
                for (k, &size) in st.sizes().iter().enumerate() {
                    assert!(size >= (k + 1).min(n as usize), "n={n} e={e:?}");
                }
                for (r, w) in st.witness_table() {
                    assert_eq!(w.target, r);
                    assert!(w.verify(st.elements()));
                }
                let dil = lemma2_cover_dilated(&ms(n, &e)).unwrap();
                assert_eq!(dil.covered(), st.covered());
            }
        }
    }

    #[test]
    fn decompose_hundred() {
        let n = m(100);
        let a = CyclicSet::coprime(n, n.units()).unwrap();
        assert_eq!(a.len(), 40);
        let out = olson_decompose(&a, 37, &DecomposeConfig::with_split(20)).unwrap();
        assert!(out.witness.verify(a.elements()));
        assert_eq!(out.witness.target, 37);
        let trace = out.trace.unwrap();
        assert!(trace.is_consistent(n));
        assert_eq!(trace.a_prime.len() + trace.b.len(), 40);
        assert!(find_witness(&a, 37).is_ok());
    }

    #[test]
    fn decompose_every_target() {
        let n = m(100);
        let a = CyclicSet::coprime(n, n.units()).unwrap();
        let dec = Decomposer::new(&a, &DecomposeConfig::with_split(20)).unwrap();
        for t in 0..100 {
            let out = dec.decompose(t).unwrap();
            assert!(out.witness.verify(a.elements()));
            assert!(out.trace.unwrap().is_consistent(n));
        }
    }

    #[test]
    fn decompose_too_small() {
        let a = CyclicSet::coprime(m(6), [1, 5]).unwrap();
        let err = olson_decompose(&a, 3, &DecomposeConfig::with_split(1)).unwrap_err();
        assert!(matches!(err, Error::ApNotFound { needed: 6, .. }));
        assert!(matches!(find_witness(&a, 3), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn zero_target_short_circuits() {
        // far too small for the pipeline, but 0 is always the empty sum
        let a = CyclicSet::coprime(m(97), [1]).unwrap();
        let out = olson_decompose(&a, 0, &DecomposeConfig::default()).unwrap();
        assert!(out.witness.is_empty() && out.trace.is_none());
        let out = olson_decompose(&a, 97, &DecomposeConfig::default()).unwrap();
        assert!(out.witness.is_empty());
    }

    #[test]
    fn non_coprime_rejected() {
        let a = CyclicSet::new(m(12), [1, 2, 5, 7]).unwrap();
        assert_eq!(
            olson_decompose(&a, 3, &DecomposeConfig::default()).unwrap_err(),
            Error::NotCoprime { value: 2, modulus: 12 }
        );
    }

    #[test]
    fn combine_gcd_branch() {
        // P' = 5, 11, 17, … (d' = 6) in Z_12 reaches only 5 + 6Z; B
        // has to supply the class modulo gcd(6, 12) = 6, which takes 5 units.
        let n = m(12);
        let ap = APReport {
            start: 5,
            difference: 6,
            length: 12,
            host: "synthetic".into(),
        };
        let cover = lemma2_cover(&ms(12, &[1, 5, 7, 11, 1])).unwrap();
        for t in 0..12 {
            let (c, w) = combine(n, &ap, Some(&cover), t).unwrap();
            assert_eq!(n.add(c.p, c.s), t);
            assert_eq!(ap.term(c.k), Some(c.p));
            assert!(cover.covered().contains(c.s));
            let w = w.unwrap();
            assert_eq!(w.target, c.s);
            assert!(w.verify(cover.elements()));
        }
        // without the remainder the class cannot be adjusted
        assert!(matches!(combine(n, &ap, None, 1), Err(Error::SplitTooSmall { d: 6, .. })));
    }

    #[test]
    fn combine_unit_difference() {
        let n = m(10);
        let ap = APReport {
            start: 4,
            difference: 3,
            length: 10,
            host: "synthetic".into(),
        };
        for t in 0..10 {
            let (c, w) = combine(n, &ap, None, t).unwrap();
            assert!(w.is_none() && c.s == 0);
            assert_eq!(c.p % 10, t);
        }
    }

    #[test]
    fn step_multiples_span_subgroup() {
        for n in 2..60u64 {
            for dp in 1..3 * n {
                let d = dp.gcd(&n);
                let mut seen: Vec<u64> = (0..n).map(|k| k * dp % n).collect();
                seen.sort_unstable();
                seen.dedup();
                let expect: Vec<u64> = (0..n / d).map(|j| j * d).collect();
                assert_eq!(seen, expect);
            }
        }
    }
}
