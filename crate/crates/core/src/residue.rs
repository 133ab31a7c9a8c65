//! Modular arithmetic over `Z_n` and the two bitmask set types.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bits::BitMask;
use crate::error::{Error, Result};

/// The order `n >= 2` of a cyclic group `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub(crate) fn size(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    #[inline]
    pub fn reduce_signed(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        let (a, b) = (a % self.0, b % self.0);
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn is_unit(self, a: u64) -> bool {
        a.gcd(&self.0) == 1
    }

    /// All residues in `[1, n)` coprime to `n`, ascending.
    pub fn units(self) -> Vec<u64> {
        (1..self.0).filter(|&a| self.is_unit(a)).collect()
    }

    /// Positive divisors of `n`, ascending.
    pub fn divisors(self) -> Vec<u64> {
        let n = self.0;
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut g = 1;
        while g * g <= n {
            if n % g == 0 {
                small.push(g);
                if g * g != n {
                    large.push(n / g);
                }
            }
            g += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Smallest prime divisor of `n`.
    pub fn smallest_prime_factor(self) -> u64 {
        let n = self.0;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                return p;
            }
            p += 1;
        }
        n
    }

    pub fn is_prime(self) -> bool {
        self.smallest_prime_factor() == self.0
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Multiplicative inverse of `a` modulo `n`.
pub fn mod_inverse(a: u64, n: Modulus) -> Result<u64> {
    let a = n.reduce(a);
    let eg = (a as i128).extended_gcd(&(n.get() as i128));
    if eg.gcd != 1 {
        return Err(Error::NotCoprime {
            value: a,
            modulus: n.get(),
        });
    }
    Ok(eg.x.rem_euclid(n.get() as i128) as u64)
}

/// A subset of `Z_n` stored as an `n`-bit membership mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    bits: BitMask,
}

impl ResidueSet {
    pub fn empty(modulus: Modulus) -> Self {
        Self {
            modulus,
            bits: BitMask::zeros(modulus.size()),
        }
    }

    pub fn full(modulus: Modulus) -> Self {
        Self {
            modulus,
            bits: BitMask::ones(modulus.size()),
        }
    }

    /// `{0}`, the subset sums of the empty collection.
    pub fn zero(modulus: Modulus) -> Self {
        let mut s = Self::empty(modulus);
        s.bits.set(0);
        s
    }

    /// Builds a set from arbitrary integers, reducing each modulo `n`.
    pub fn from_residues(modulus: Modulus, residues: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Self::empty(modulus);
        for r in residues {
            s.insert(r);
        }
        s
    }

    pub(crate) fn from_mask(modulus: Modulus, bits: BitMask) -> Self {
        debug_assert_eq!(bits.len(), modulus.size());
        Self { modulus, bits }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn insert(&mut self, r: u64) {
        let r = self.modulus.reduce(r);
        self.bits.set(r as usize);
    }

    pub fn contains(&self, r: u64) -> bool {
        self.bits.get(self.modulus.reduce(r) as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// True when the set is all of `Z_n`.
    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones_iter().map(|i| i as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.members().collect()
    }

    /// Residues not in the set, ascending.
    pub fn missing(&self) -> Vec<u64> {
        self.complement().to_vec()
    }

    pub fn complement(&self) -> Self {
        Self::from_mask(self.modulus, self.bits.complement())
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut bits = self.bits.clone();
        bits.or_assign(&other.bits);
        Self::from_mask(self.modulus, bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Self::from_mask(self.modulus, bits)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.bits.is_subset(&other.bits)
    }

    /// `S + k`.
    pub fn shift(&self, k: u64) -> Self {
        Self::from_mask(
            self.modulus,
            self.bits.rotate(self.modulus.reduce(k) as usize),
        )
    }

    /// `S ∪ (S + k)` in place.
    pub(crate) fn absorb_shift(&mut self, k: u64) {
        let shifted = self.bits.rotate(self.modulus.reduce(k) as usize);
        self.bits.or_assign(&shifted);
    }

    /// `{c·s : s ∈ S}` for a unit `c`.
    pub fn dilate(&self, c: u64) -> Result<Self> {
        let c = self.modulus.reduce(c);
        if !self.modulus.is_unit(c) {
            return Err(Error::NotCoprime {
                value: c,
                modulus: self.modulus.get(),
            });
        }
        Ok(Self::from_residues(
            self.modulus,
            self.members().map(|s| self.modulus.mul(c, s)),
        ))
    }

    /// The minimal period of the set: the smallest divisor `g` of `n` with
    /// `S + g = S`. Every period of `S` is a multiple of it; `n` means the
    /// set has no nontrivial period.
    pub fn stabilizer_gcd(&self) -> Result<u64> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self
            .modulus
            .divisors()
            .into_iter()
            .find(|&g| self.shift(g) == *self)
            .unwrap_or(self.modulus.get()))
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "residue sets over different moduli");
    }
}

impl std::fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ResidueSet(mod {}) ", self.modulus)?;
        f.debug_set().entries(self.members()).finish()
    }
}

/// `dilate` as a free function, mirroring [`ResidueSet::dilate`].
pub fn dilate(set: &ResidueSet, c: u64) -> Result<ResidueSet> {
    set.dilate(c)
}

/// `stabilizer_gcd` as a free function, mirroring [`ResidueSet::stabilizer_gcd`].
pub fn stabilizer_gcd(set: &ResidueSet) -> Result<u64> {
    set.stabilizer_gcd()
}

/// A subset of `{0, …, M}`, typically the integer subset sums of a collection.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerSumSet {
    bits: BitMask,
}

impl IntegerSumSet {
    pub(crate) fn from_mask(bits: BitMask) -> Self {
        assert!(bits.len() >= 1);
        Self { bits }
    }

    pub fn from_members(bound: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut bits = BitMask::zeros(bound as usize + 1);
        for x in members {
            if x > bound {
                return Err(Error::InvalidInput(format!("{x} exceeds bound {bound}")));
            }
            bits.set(x as usize);
        }
        Ok(Self { bits })
    }

    pub(crate) fn mask(&self) -> &BitMask {
        &self.bits
    }

    /// The bound `M`: every member is at most `M`.
    pub fn bound(&self) -> u64 {
        self.bits.len() as u64 - 1
    }

    pub fn contains(&self, x: u64) -> bool {
        x <= self.bound() && self.bits.get(x as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.bits.first_one().map(|x| x as u64)
    }

    pub fn max(&self) -> Option<u64> {
        self.bits.last_one().map(|x| x as u64)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones_iter().map(|i| i as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.members().collect()
    }

    /// Reduction of every member modulo `n`.
    pub fn reduce(&self, modulus: Modulus) -> ResidueSet {
        ResidueSet::from_residues(modulus, self.members())
    }
}

impl std::fmt::Debug for IntegerSumSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntegerSumSet(≤ {}) ", self.bound())?;
        f.debug_set().entries(self.members()).finish()
    }
}

/// A set of distinct nonzero residues, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCyclicSet")]
pub struct CyclicSet {
    modulus: Modulus,
    elements: Vec<u64>,
    coprime: bool,
}

#[derive(Deserialize)]
struct RawCyclicSet {
    modulus: u64,
    elements: Vec<u64>,
    #[serde(default)]
    coprime: bool,
}

impl TryFrom<RawCyclicSet> for CyclicSet {
    type Error = Error;
    fn try_from(raw: RawCyclicSet) -> Result<Self> {
        let m = Modulus::new(raw.modulus)?;
        if raw.coprime {
            CyclicSet::coprime(m, raw.elements)
        } else {
            CyclicSet::new(m, raw.elements)
        }
    }
}

impl CyclicSet {
    /// Reduces every element mod `n`; rejects zero and repeated residues.
    pub fn new(modulus: Modulus, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut elements: Vec<u64> = elements.into_iter().map(|e| modulus.reduce(e)).collect();
        elements.sort_unstable();
        if elements.first() == Some(&0) {
            return Err(Error::ZeroElement);
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0]));
        }
        Ok(Self {
            modulus,
            elements,
            coprime: false,
        })
    }

    pub fn from_signed(modulus: Modulus, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(
            modulus,
            elements
                .into_iter()
                .map(|e| modulus.reduce_signed(e))
                .collect::<Vec<_>>(),
        )
    }

    /// As [`CyclicSet::new`], additionally requiring `gcd(e, n) = 1` for every element.
    pub fn coprime(modulus: Modulus, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::new(modulus, elements)?;
        if let Some(&e) = set.elements.iter().find(|&&e| !modulus.is_unit(e)) {
            return Err(Error::NotCoprime {
                value: e,
                modulus: modulus.get(),
            });
        }
        set.coprime = true;
        Ok(set)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn is_coprime(&self) -> bool {
        self.coprime
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.elements.iter().sum()
    }

    /// Splits into the `k` smallest elements and the rest.
    pub fn split_at(&self, k: usize) -> (Self, Self) {
        let k = k.min(self.len());
        let (lo, hi) = self.elements.split_at(k);
        let make = |e: &[u64]| Self {
            modulus: self.modulus,
            elements: e.to_vec(),
            coprime: self.coprime,
        };
        (make(lo), make(hi))
    }
}

/// A multiset of residues, each coprime to `n`. Order is preserved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeMultiset {
    modulus: Modulus,
    elements: Vec<u64>,
}

impl CoprimeMultiset {
    pub fn new(modulus: Modulus, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let elements: Vec<u64> = elements.into_iter().map(|e| modulus.reduce(e)).collect();
        if let Some(&e) = elements.iter().find(|&&e| !modulus.is_unit(e)) {
            return Err(Error::NotCoprime {
                value: e,
                modulus: modulus.get(),
            });
        }
        Ok(Self { modulus, elements })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl TryFrom<&CyclicSet> for CoprimeMultiset {
    type Error = Error;
    fn try_from(set: &CyclicSet) -> Result<Self> {
        CoprimeMultiset::new(set.modulus, set.elements.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn modulus_rejects_small() {
        assert_eq!(Modulus::new(1), Err(Error::InvalidModulus(1)));
        assert_eq!(Modulus::new(0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, m(7)), Ok(1));
        assert_eq!(mod_inverse(3, m(7)), Ok(5));
        assert_eq!(
            mod_inverse(2, m(4)),
            Err(Error::NotCoprime { value: 2, modulus: 4 })
        );
    }

    #[test]
    fn inverse_matches_scan() {
        for n in 2..60 {
            let n = m(n);
            for a in 0..n.get() {
                let scan = (0..n.get()).find(|&b| n.mul(a, b) == 1 % n.get());
                assert_eq!(mod_inverse(a, n).ok(), scan, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn dilate_examples() {
        let s = ResidueSet::from_residues(m(5), [0, 1, 2]);
        assert_eq!(s.dilate(1).unwrap(), s);
        let s = ResidueSet::from_residues(m(5), [0, 1]);
        assert_eq!(s.dilate(3).unwrap().to_vec(), vec![0, 3]);
        let s = ResidueSet::from_residues(m(4), [0, 2]);
        assert!(matches!(s.dilate(2), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(ResidueSet::full(m(6)).stabilizer_gcd(), Ok(1));
        assert_eq!(ResidueSet::from_residues(m(6), [0, 3]).stabilizer_gcd(), Ok(3));
        assert_eq!(ResidueSet::from_residues(m(6), [0, 1]).stabilizer_gcd(), Ok(6));
        assert_eq!(ResidueSet::empty(m(6)).stabilizer_gcd(), Err(Error::EmptySet));
    }

    #[test]
    fn cyclic_set_validation() {
        let s = CyclicSet::new(m(7), [10, 1, 5]).unwrap();
        assert_eq!(s.elements(), &[1, 3, 5]);
        assert_eq!(CyclicSet::new(m(7), [7]), Err(Error::ZeroElement));
        assert_eq!(CyclicSet::new(m(7), [1, 8]), Err(Error::DuplicateElement(1)));
        assert!(CyclicSet::coprime(m(6), [1, 5]).unwrap().is_coprime());
        assert_eq!(
            CyclicSet::coprime(m(6), [1, 3]),
            Err(Error::NotCoprime { value: 3, modulus: 6 })
        );
        let s = CyclicSet::from_signed(m(7), [-1, -2]).unwrap();
        assert_eq!(s.elements(), &[5, 6]);
    }

    #[test]
    fn cyclic_set_serde_revalidates() {
        let ok: CyclicSet = serde_json::from_str(r#"{"modulus":6,"elements":[5,1],"coprime":true}"#).unwrap();
        assert_eq!(ok.elements(), &[1, 5]);
        assert!(serde_json::from_str::<CyclicSet>(r#"{"modulus":6,"elements":[2],"coprime":true}"#).is_err());
        assert!(serde_json::from_str::<CyclicSet>(r#"{"modulus":6,"elements":[0]}"#).is_err());
    }

    #[test]
    fn multiset_requires_units() {
        assert!(CoprimeMultiset::new(m(4), [3, 3, 1]).is_ok());
        assert!(CoprimeMultiset::new(m(4), [3, 2]).is_err());
    }

    #[test]
    fn set_identities_by_enumeration() {
        let n = m(12);
        for a in 0u32..(1 << 12) {
            let sa = ResidueSet::from_residues(n, (0..12).filter(|i| a >> i & 1 == 1));
            assert_eq!(sa.len(), a.count_ones() as usize);
            assert_eq!(sa.complement().complement(), sa);
            assert_eq!(sa.union(&sa.complement()), ResidueSet::full(n));
            for k in [0, 1, 5, 11] {
                let shifted = sa.shift(k);
                let expect = ResidueSet::from_residues(n, sa.members().map(|x| x + k));
                assert_eq!(shifted, expect);
            }
        }
    }

    fn residue_set(n: u64) -> impl Strategy<Value = ResidueSet> {
        proptest::collection::vec(any::<bool>(), n as usize).prop_map(move |v| {
            ResidueSet::from_residues(
                m(n),
                v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64),
            )
        })
    }

    proptest! {
        #[test]
        fn dilate_roundtrip(n in 2u64..=64, seed in any::<u64>()) {
            let n_mod = m(n);
            let units = n_mod.units();
            let c = units[(seed % units.len() as u64) as usize];
            let s = ResidueSet::from_residues(n_mod, (0..n).filter(|i| (seed.rotate_left(*i as u32) ^ i) & 1 == 1));
            let back = s.dilate(c).unwrap().dilate(mod_inverse(c, n_mod).unwrap()).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(s.dilate(c).unwrap().len(), s.len());
        }

        #[test]
        fn stabilizer_is_period(s in (2u64..=40).prop_flat_map(residue_set)) {
            prop_assume!(!s.is_empty());
            let g = s.stabilizer_gcd().unwrap();
            let n = s.modulus().get();
            prop_assert_eq!(n % g, 0);
            prop_assert_eq!(s.shift(g), s.clone());
            for h in 1..n {
                if s.shift(h) == s {
                    prop_assert_eq!(h % g, 0);
                }
            }
        }

        #[test]
        fn union_intersection_laws(a in residue_set(33), b in residue_set(33)) {
            let u = a.union(&b);
            let i = a.intersection(&b);
            prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
            prop_assert_eq!(u.complement(), a.complement().intersection(&b.complement()));
            prop_assert!(i.is_subset(&a) && a.is_subset(&u));
        }
    }
}
