use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, BitAnd, BitXor, BitXorAssign};

use smallvec::{smallvec, SmallVec};

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(dim: usize) -> usize {
    dim.div_ceil(WORD_BITS)
}

fn tail_mask(dim: usize) -> u64 {
    match dim % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector in GF(2)^dim, packed 64 coordinates per word.
///
/// Coordinate `i` lives in bit `i % 64` of word `i / 64`. Bits past `dim`
/// are always zero, so derived equality and hashing are bitwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    dim: usize,
    words: SmallVec<[u64; 2]>,
}

impl Gf2Vector {
    /// The zero vector. Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "GF(2) vectors have dimension at least 1");
        Self { dim, words: smallvec![0; words_for(dim)] }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.set(i, true);
        v
    }

    /// Vector whose coordinate `i` is bit `i` of `value`. Panics if `dim > 64`;
    /// bits of `value` at or above `dim` are dropped.
    pub fn from_u64(dim: usize, value: u64) -> Self {
        assert!(dim <= WORD_BITS, "from_u64 needs dim <= 64, got {dim}");
        let mut v = Self::zeros(dim);
        v.words[0] = value & tail_mask(dim);
        v
    }

    /// Builds a vector from coordinates in index order; any nonzero entry is a 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(dim: usize, words: &[u64]) -> Self {
        let mut v = Self::zeros(dim);
        for (dst, src) in v.words.iter_mut().zip(words) {
            *dst = *src;
        }
        let last = v.words.len() - 1;
        v.words[last] &= tail_mask(dim);
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim, "coordinate {i} out of range for dim {}", self.dim);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim, "coordinate {i} out of range for dim {}", self.dim);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.dim, "coordinate {i} out of range for dim {}", self.dim);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2): parity of the AND.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    /// Lowest set coordinate, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + b)
            })
        })
    }

    /// The vector as an integer, when it fits in one word.
    pub fn to_u64(&self) -> Option<u64> {
        (self.dim <= WORD_BITS).then(|| self.words[0])
    }

    /// Every vector of dimension `dim` in counting order. Panics if `dim >= 64`.
    pub fn all(dim: usize) -> impl Iterator<Item = Gf2Vector> {
        assert!(dim < WORD_BITS, "cannot enumerate GF(2)^{dim}");
        (0..1u64 << dim).map(move |x| Gf2Vector::from_u64(dim, x))
    }
}

impl BitXorAssign<&Gf2Vector> for Gf2Vector {
    #[inline]
    fn bitxor_assign(&mut self, rhs: &Gf2Vector) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &Gf2Vector {
    type Output = Gf2Vector;

    fn bitxor(self, rhs: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAnd for &Gf2Vector {
    type Output = Gf2Vector;

    fn bitand(self, rhs: &Gf2Vector) -> Gf2Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&rhs.words) {
            *a &= b;
        }
        out
    }
}

// Vector addition over GF(2) is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for &Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: &Gf2Vector) -> Gf2Vector {
        self ^ rhs
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign<&Gf2Vector> for Gf2Vector {
    fn add_assign(&mut self, rhs: &Gf2Vector) {
        *self ^= rhs;
    }
}

/// Orders by dimension, then by numeric value with coordinate 0 least significant.
impl Ord for Gf2Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim.cmp(&other.dim).then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Gf2Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Most significant coordinate first, so `Gf2Vector::from_u64(4, 1)` prints `0001`.
impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.dim).rev() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}
