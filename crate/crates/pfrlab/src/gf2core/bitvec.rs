use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Gf2Error;

const WORD_BITS: usize = 64;

/// An element of `F_2^n`, packed into 64-bit words.
///
/// Bit `i` of the vector lives at bit `i % 64` of word `i / 64`. Bits at
/// positions `>= n` are kept zero so that equality, hashing and ordering can
/// work on the raw words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    n: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// The zero vector of `F_2^n`.
    pub fn zeros(n: usize) -> Self {
        BitVec {
            n,
            words: vec![0; n.div_ceil(WORD_BITS)],
        }
    }

    /// Unit vector with a single bit set at `index`.
    pub fn unit(n: usize, index: usize) -> Self {
        assert!(index < n, "unit index {index} out of range for dim {n}");
        let mut v = Self::zeros(n);
        v.set(index, true);
        v
    }

    /// Builds the vector whose integer value is `value` (bit `i` of `value`
    /// becomes coordinate `i`). Requires `value < 2^n`.
    pub fn from_u64(n: usize, value: u64) -> Self {
        assert!(
            n >= 64 || value < (1u64 << n),
            "value {value} does not fit in {n} bits"
        );
        let mut v = Self::zeros(n);
        if !v.words.is_empty() {
            v.words[0] = value;
        }
        v
    }

    /// Uniformly random vector, one word at a time.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(n);
        for w in v.words.iter_mut() {
            *w = rng.gen();
        }
        v.clear_excess();
        v
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.n, "bit index {index} out of range");
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.n, "bit index {index} out of range");
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        assert!(index < self.n, "bit index {index} out of range");
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the highest set bit, or `None` for the zero vector.
    pub fn leading_bit(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(i * WORD_BITS + (63 - w.leading_zeros() as usize));
            }
        }
        None
    }

    /// Inner product over `F_2` (parity of the AND).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.n, other.n, "dot of mismatched dims");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// XOR in place.
    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.n, other.n, "xor of mismatched dims");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR into a fresh vector.
    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_with(other);
        out
    }

    /// The integer value of the vector; requires `n <= 64`. Used to index
    /// truth tables over small domains.
    pub fn as_index(&self) -> usize {
        assert!(self.n <= 64, "as_index requires dim <= 64, got {}", self.n);
        self.words.first().copied().unwrap_or(0) as usize
    }

    /// Iterator over the indices of set bits, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.get(i))
    }

    /// Concatenation: `self` occupies the low coordinates, `other` the high
    /// ones.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.n + other.n);
        for i in self.support() {
            out.set(i, true);
        }
        for i in other.support() {
            out.set(self.n + i, true);
        }
        out
    }

    /// Splits into the low `m` and high `n - m` coordinates.
    pub fn split_at(&self, m: usize) -> (BitVec, BitVec) {
        assert!(m <= self.n);
        let mut lo = BitVec::zeros(m);
        let mut hi = BitVec::zeros(self.n - m);
        for i in self.support() {
            if i < m {
                lo.set(i, true);
            } else {
                hi.set(i - m, true);
            }
        }
        (lo, hi)
    }

    /// Renders as a big-endian binary string of length `n` (most significant
    /// coordinate first), matching the on-disk set format.
    pub fn to_bitstring(&self) -> String {
        (0..self.n).rev().map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// Parses a big-endian binary string of length `n`.
    pub fn parse_bitstring(s: &str) -> Result<Self, Gf2Error> {
        let n = s.len();
        let mut v = Self::zeros(n);
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(n - 1 - pos, true),
                _ => return Err(Gf2Error::BadBitString(s.to_string())),
            }
        }
        Ok(v)
    }

    fn clear_excess(&mut self) {
        let rem = self.n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        self.xor_with(rhs);
    }
}

impl BitXor for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        self.xor(rhs)
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitVec {
    /// Orders by dimension, then numerically (equivalently: lexicographically
    /// on the big-endian bit strings).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bitstring())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVec::parse_bitstring(&s).map_err(D::Error::custom)
    }
}
