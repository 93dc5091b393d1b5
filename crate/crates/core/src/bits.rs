//! Bit-packed Boolean vectors.
//!
//! Vectors are stored little-end-first in 64-bit words; bit `i` of the vector
//! is bit `i % 64` of word `i / 64`.  Orthogonality and domination reduce to
//! word-wise `AND`, which is what keeps the brute-force searches over vector
//! families fast enough for exhaustive test corpora.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for w in &mut v.words {
            *w = u64::MAX;
        }
        v.mask_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> BitVec {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True iff the two vectors share no common 1-coordinate.
    pub fn orthogonal(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dimension mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// True iff `self >= other` coordinatewise.
    pub fn dominates(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dimension mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| b & !a == 0)
    }

    /// Coordinatewise complement.
    pub fn complement(&self) -> BitVec {
        let mut v = BitVec {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.mask_tail();
        v
    }

    /// Coordinatewise AND, in place.
    pub fn and_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Coordinatewise OR, in place.
    pub fn or_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    /// Concatenation `self ∘ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for (i, b) in self.iter().enumerate() {
            out.set(i, b);
        }
        for (i, b) in other.iter().enumerate() {
            out.set(self.len + i, b);
        }
        out
    }

    /// Renders as a 0/1 string, coordinate 0 first.
    pub fn to_01(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Parses a 0/1 string, coordinate 0 first.  Any other character fails.
    pub fn parse_01(s: &str) -> Option<BitVec> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
        if self.len == 0 {
            self.words.clear();
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_01())
    }
}
