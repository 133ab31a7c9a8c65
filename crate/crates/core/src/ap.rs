//! Arithmetic progressions inside integer sumsets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::IntegerSumSet;
use crate::sumset::restricted_sumset_integers;

/// A maximal progression `start, start + difference, …` found in a host set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct APReport {
    pub start: u64,
    pub difference: u64,
    pub length: u64,
    pub host: String,
}

impl APReport {
    pub fn last(&self) -> u64 {
        self.start + (self.length - 1) * self.difference
    }

    pub fn term(&self, k: u64) -> Option<u64> {
        (k < self.length).then(|| self.start + k * self.difference)
    }

    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(|k| self.start + k * self.difference)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct APSearchConfig {
    pub target_length: u64,
    /// Largest difference searched. `None` means `⌊span / (L − 1)⌋`, the
    /// largest difference an AP of the target length can have inside the
    /// host's span.
    pub max_difference: Option<u64>,
}

impl APSearchConfig {
    pub fn new(target_length: u64) -> Self {
        Self {
            target_length,
            max_difference: None,
        }
    }

    pub fn with_max_difference(mut self, d: u64) -> Self {
        self.max_difference = Some(d);
        self
    }

    pub fn resolve_max_difference(&self, span: u64) -> Result<u64> {
        match self.max_difference {
            Some(0) => Err(Error::InvalidInput("max_difference must be at least 1".into())),
            Some(d) => Ok(d),
            None if self.target_length <= 1 => Ok(span.max(1)),
            None => Ok((span / (self.target_length - 1)).max(1)),
        }
    }
}

/// Longest AP in `set` over all differences `1..=max_difference`.
///
/// Ties go to the smaller difference, then the smaller start.
pub fn longest_ap(set: &IntegerSumSet, cfg: &APSearchConfig) -> Result<APReport> {
    let (lo, hi) = match (set.min(), set.max()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::EmptySet),
    };
    let span = hi - lo;
    let max_d = cfg.resolve_max_difference(span)?;
    let mask = set.mask();

    let (mut best_start, mut best_d, mut best_len) = (lo, 1u64, 1u64);
    for d in 1..=max_d.min(span.max(1)) {
        // no AP with this or any larger difference can win
        if span / d + 1 <= best_len {
            break;
        }
        for class_start in lo..(lo + d).min(hi + 1) {
            let mut run_start = 0;
            let mut run = 0u64;
            let mut x = class_start;
            loop {
                let inside = x <= hi && mask.get(x as usize);
                if inside {
                    if run == 0 {
                        run_start = x;
                    }
                    run += 1;
                } else if run > 0 {
                    if run > best_len || (run == best_len && d == best_d && run_start < best_start) {
                        best_start = run_start;
                        best_d = d;
                        best_len = run;
                    }
                    run = 0;
                }
                if x > hi {
                    break;
                }
                x += d;
            }
        }
    }

    Ok(APReport {
        start: best_start,
        difference: best_d,
        length: best_len,
        host: format!("integer set of {} members within [{lo}, {hi}]", set.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApVerdict {
    pub meets: bool,
    /// `c · l · |A|`.
    pub required: f64,
    pub report: APReport,
}

/// Checks whether `l*A` (over the integers) contains an AP of length at
/// least `c · l · |A|`. Requires `2l ≤ |A|`.
pub fn ap_meets_target(elements: &[u64], l: usize, c: f64) -> Result<ApVerdict> {
    if l < 1 || 2 * l > elements.len() {
        return Err(Error::BadCardinality {
            l,
            size: elements.len(),
        });
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidInput(format!("ratio must be positive, got {c}")));
    }
    let required = c * l as f64 * elements.len() as f64;
    let sums = restricted_sumset_integers(elements, l)?;
    let target_length = required.ceil().max(1.0) as u64;
    let mut report = longest_ap(&sums, &APSearchConfig::new(target_length))?;
    report.host = format!("{l}*A for |A| = {}; {}", elements.len(), report.host);
    Ok(ApVerdict {
        meets: report.length as f64 >= required,
        required,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(members: &[u64]) -> IntegerSumSet {
        IntegerSumSet::from_members(*members.iter().max().unwrap_or(&0), members.iter().copied()).unwrap()
    }

    /// Every (start, difference) pair, extended to its maximal length.
    fn brute(members: &[u64], max_d: u64) -> (u64, u64, u64) {
        let has = |x: u64| members.contains(&x);
        let mut best = (u64::MAX, 0, 0); // (start, d, len)
        for &a in members {
            for d in 1..=max_d {
                if a >= d && has(a - d) {
                    continue;
                }
                let mut len = 0;
                while has(a + len * d) {
                    len += 1;
                }
                let better = len > best.2 || (len == best.2 && (d < best.1 || (d == best.1 && a < best.0)));
                if better {
                    best = (a, d, len);
                }
            }
        }
        best
    }

    #[test]
    fn examples() {
        let r = longest_ap(&s(&[0, 1, 2, 3, 4, 5, 6]), &APSearchConfig::new(7)).unwrap();
        assert_eq!((r.start, r.difference, r.length), (0, 1, 7));
        let cfg = APSearchConfig::new(2).with_max_difference(5);
        let r = longest_ap(&s(&[0, 3, 6, 9, 11]), &cfg).unwrap();
        assert_eq!((r.start, r.difference, r.length), (0, 3, 4));
        let r = longest_ap(&s(&[0, 5]), &cfg).unwrap();
        assert_eq!((r.start, r.difference, r.length), (0, 5, 2));
    }

    #[test]
    fn empty_and_singleton() {
        let empty = IntegerSumSet::from_members(4, []).unwrap();
        assert_eq!(longest_ap(&empty, &APSearchConfig::new(3)), Err(Error::EmptySet));
        let r = longest_ap(&s(&[7]), &APSearchConfig::new(3)).unwrap();
        assert_eq!((r.start, r.length), (7, 1));
        assert!(APSearchConfig::new(3).with_max_difference(0).resolve_max_difference(10).is_err());
    }

    #[test]
    fn interval_gives_full_length() {
        for m in 0..70u64 {
            let members: Vec<u64> = (0..=m).collect();
            let r = longest_ap(&s(&members), &APSearchConfig::new(m + 1)).unwrap();
            assert_eq!((r.difference, r.length), (1, m + 1));
        }
    }

    #[test]
    fn matches_brute_force_small() {
        // every subset of {0..13} of size ≤ 5
        let universe = 14u32;
        for mask in 1u32..(1 << universe) {
            if mask.count_ones() > 5 {
                continue;
            }
            let members: Vec<u64> = (0..universe).filter(|i| mask >> i & 1 == 1).map(u64::from).collect();
            let r = longest_ap(&s(&members), &APSearchConfig::new(2).with_max_difference(13)).unwrap();
            assert_eq!((r.start, r.difference, r.length), brute(&members, 13), "{members:?}");
            assert!(r.terms().all(|x| members.contains(&x)));
        }
    }

    #[test]
    fn meets_target_examples() {
        let a: Vec<u64> = (1..=20).collect();
        let v = ap_meets_target(&a, 5, 0.25).unwrap();
        assert!(v.meets);
        assert_eq!((v.report.start, v.report.difference, v.report.length), (15, 1, 76));
        let v = ap_meets_target(&[1, 2], 1, 0.1).unwrap();
        assert!(v.meets && v.report.length >= 1);
        let v = ap_meets_target(&a, 5, 10.0).unwrap();
        assert!(!v.meets);
        assert_eq!(v.report.length, 76);
        assert!(matches!(ap_meets_target(&a, 11, 0.5), Err(Error::BadCardinality { .. })));
    }
}
