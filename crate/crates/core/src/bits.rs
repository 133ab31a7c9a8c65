//! Fixed-length bit masks with word-level shifts.
//!
//! Both [`ResidueSet`](crate::ResidueSet) and [`IntegerSumSet`](crate::IntegerSumSet)
//! are thin wrappers around [`BitMask`]; the subset-sum recurrences reduce to
//! `mask |= mask << a` (integers) or `mask |= rotate(mask, a)` (residues).

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMask {
    words: Vec<u64>,
    len: usize,
}

impl BitMask {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut res = Self {
            words: vec![!0; len.div_ceil(WORD)],
            len,
        };
        res.trim();
        res
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count_ones() == self.len
    }

    /// Clears the unused high bits of the last word.
    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + t)
                }
            })
        })
    }

    /// `self << k`, truncated to the same length.
    pub fn shl(&self, k: usize) -> Self {
        let mut out = Self::zeros(self.len);
        if k >= self.len {
            return out;
        }
        let (ws, bs) = (k / WORD, k % WORD);
        let n = self.words.len();
        for i in (ws..n).rev() {
            let src = i - ws;
            let mut w = self.words[src] << bs;
            if bs != 0 && src > 0 {
                w |= self.words[src - 1] >> (WORD - bs);
            }
            out.words[i] = w;
        }
        out.trim();
        out
    }

    /// `self >> k`.
    pub fn shr(&self, k: usize) -> Self {
        let mut out = Self::zeros(self.len);
        if k >= self.len {
            return out;
        }
        let (ws, bs) = (k / WORD, k % WORD);
        let n = self.words.len();
        for i in 0..n - ws {
            let src = i + ws;
            let mut w = self.words[src] >> bs;
            if bs != 0 && src + 1 < n {
                w |= self.words[src + 1] << (WORD - bs);
            }
            out.words[i] = w;
        }
        out
    }

    /// Cyclic rotation: bit `i` moves to `(i + k) mod len`.
    pub fn rotate(&self, k: usize) -> Self {
        if self.len == 0 {
            return self.clone();
        }
        let k = k % self.len;
        if k == 0 {
            return self.clone();
        }
        let mut out = self.shl(k);
        out.or_assign(&self.shr(self.len - k));
        out
    }

    pub fn or_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "bit mask length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn and_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "bit mask length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl std::fmt::Debug for BitMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.ones_iter()).finish()
    }
}
