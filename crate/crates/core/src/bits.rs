//! Fixed-length bit-vectors with the word-parallel rotation used by the
//! reachable-sum recurrence in cyclic groups.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        s.words.iter_mut().for_each(|w| *w = !0);
        s.trim();
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn copy_from(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    /// `self |= rotate(src, shift)`, where bit `i` of `src` lands on bit
    /// `(i + shift) mod len`.
    pub fn or_rotated(&mut self, src: &BitSet, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let n = self.len;
        let shift = shift % n.max(1);
        if shift == 0 {
            self.union_with(src);
            return;
        }
        self.or_shl(src, shift);
        self.or_shr(src, n - shift);
    }

    // Bits i < len - s move to i + s; higher bits fall off the end.
    fn or_shl(&mut self, src: &BitSet, s: usize) {
        let (ws, bs) = (s / WORD, s % WORD);
        let nw = self.words.len();
        if bs == 0 {
            for w in (ws..nw).rev() {
                self.words[w] |= src.words[w - ws];
            }
        } else {
            for w in (ws..nw).rev() {
                let hi = src.words[w - ws] << bs;
                let lo = if w > ws {
                    src.words[w - ws - 1] >> (WORD - bs)
                } else {
                    0
                };
                self.words[w] |= hi | lo;
            }
        }
        self.trim();
    }

    // Bits i >= s move to i - s.
    fn or_shr(&mut self, src: &BitSet, s: usize) {
        let (ws, bs) = (s / WORD, s % WORD);
        let nw = self.words.len();
        if ws >= nw {
            return;
        }
        for w in 0..nw - ws {
            let lo = src.words[w + ws] >> bs;
            let hi = if bs > 0 && w + ws + 1 < nw {
                src.words[w + ws + 1] << (WORD - bs)
            } else {
                0
            };
            self.words[w] |= lo | hi;
        }
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}
