//! Packed finite 0/1 sequences.
//!
//! `BitSeq` is the node type of every tree in this crate: a finite sequence
//! of bits packed 64 to the word, ordered lexicographically with `0 < 1` and
//! a proper prefix preceding its extensions.  Equality, prefix tests, meets
//! (longest common prefixes), and comparisons all run word-at-a-time.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite sequence of bits.
///
/// Invariant: `words.len() == len.div_ceil(64)` and every bit at position
/// `>= len` is zero, so derived equality and hashing agree with sequence
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSeq {
    len: usize,
    words: Vec<u64>,
}

impl BitSeq {
    /// The empty sequence.
    pub fn new() -> Self {
        Self::default()
    }

    /// The all-zero sequence of length `n`.
    pub fn zeros(n: usize) -> Self {
        BitSeq {
            len: n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    /// The all-one sequence of length `n`.
    pub fn ones(n: usize) -> Self {
        let mut s = BitSeq {
            len: n,
            words: vec![!0u64; n.div_ceil(64)],
        };
        s.mask_tail();
        s
    }

    /// Builds a sequence from bits, first element first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = BitSeq::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The bit at position `i`.  Panics if `i >= len`; callers exposed to
    /// untrusted indices validate first (see [`crate::tree`]).
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    /// Appends one bit.
    pub fn push(&mut self, bit: bool) {
        if self.len & 63 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len >> 6] |= 1 << (self.len & 63);
        }
        self.len += 1;
    }

    /// Removes and returns the last bit.
    pub fn pop(&mut self) -> Option<bool> {
        if self.len == 0 {
            return None;
        }
        self.len -= 1;
        let i = self.len;
        let b = (self.words[i >> 6] >> (i & 63)) & 1 == 1;
        self.words[i >> 6] &= !(1 << (i & 63));
        if i & 63 == 0 {
            self.words.pop();
        }
        Some(b)
    }

    /// `self` followed by `bit`, as a new sequence.
    pub fn child(&self, bit: bool) -> BitSeq {
        let mut s = self.clone();
        s.push(bit);
        s
    }

    /// `self` followed by all of `tail`.
    pub fn concat(&self, tail: &BitSeq) -> BitSeq {
        let mut s = self.clone();
        for b in tail.iter() {
            s.push(b);
        }
        s
    }

    /// Appends `n` zero bits in place.
    pub fn extend_zeros(&mut self, n: usize) {
        self.len += n;
        self.words.resize(self.len.div_ceil(64), 0);
    }

    /// The initial segment of length `l`.  Panics if `l > len`; the public
    /// tree operations check their level arguments before restricting.
    pub fn restrict(&self, l: usize) -> BitSeq {
        assert!(l <= self.len, "restriction length {l} exceeds length {}", self.len);
        let mut s = BitSeq {
            len: l,
            words: self.words[..l.div_ceil(64)].to_vec(),
        };
        s.mask_tail();
        s
    }

    /// Fallible restriction for untrusted lengths.
    pub fn try_restrict(&self, l: usize) -> Result<BitSeq> {
        if l > self.len {
            return Err(Error::OutOfRange(format!(
                "restriction length {l} exceeds node length {}",
                self.len
            )));
        }
        Ok(self.restrict(l))
    }

    /// Length of the longest common initial segment of `self` and `other`.
    pub fn common_prefix_len(&self, other: &BitSeq) -> usize {
        let min = self.len.min(other.len);
        let full = min >> 6;
        for w in 0..full {
            let x = self.words[w] ^ other.words[w];
            if x != 0 {
                return (w << 6) + x.trailing_zeros() as usize;
            }
        }
        let rem = min & 63;
        if rem != 0 {
            let a = self.words.get(full).copied().unwrap_or(0);
            let b = other.words.get(full).copied().unwrap_or(0);
            let x = (a ^ b) & ((1u64 << rem) - 1);
            if x != 0 {
                return (full << 6) + x.trailing_zeros() as usize;
            }
        }
        min
    }

    /// The meet: longest common initial segment.
    pub fn meet(&self, other: &BitSeq) -> BitSeq {
        self.restrict(self.common_prefix_len(other))
    }

    /// Whether `self` is an initial segment of `other` (equality included).
    pub fn is_prefix_of(&self, other: &BitSeq) -> bool {
        self.len <= other.len && self.common_prefix_len(other) == self.len
    }

    /// Whether `self` is a proper initial segment of `other`.
    pub fn is_proper_prefix_of(&self, other: &BitSeq) -> bool {
        self.len < other.len && self.common_prefix_len(other) == self.len
    }

    /// Position of the first `1`, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                let p = (w << 6) + word.trailing_zeros() as usize;
                return (p < self.len).then_some(p);
            }
        }
        None
    }

    /// Position of the last `1`, if any.
    pub fn last_one(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return Some((w << 6) + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of all `1` bits, in increasing order.
    pub fn one_positions(&self) -> Vec<usize> {
        self.iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    fn mask_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Lexicographic order with `0 < 1`; a proper prefix precedes its extensions.
impl Ord for BitSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        let p = self.common_prefix_len(other);
        if p < self.len && p < other.len {
            self.bit(p).cmp(&other.bit(p))
        } else {
            self.len.cmp(&other.len)
        }
    }
}

impl PartialOrd for BitSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\u{27e8}{self}\u{27e9}")
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    /// Parses a bitstring such as `"0110"`.  The empty string is the empty
    /// sequence; `"e"` is accepted as an explicit spelling of it.
    fn from_str(s: &str) -> Result<BitSeq> {
        if s == "e" {
            return Ok(BitSeq::new());
        }
        let mut out = BitSeq::new();
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => {
                    return Err(Error::Parse(format!(
                        "bit sequence may contain only 0 and 1, got {c:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl FromIterator<bool> for BitSeq {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitSeq::from_bits(iter)
    }
}
