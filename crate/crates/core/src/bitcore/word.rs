//! Fixed-length binary words over the Hamming space.
//!
//! Coordinates are 1-based. Coordinate `i` lives at bit `(i - 1) % 64` of limb
//! `(i - 1) / 64`; bits past `n` in the last limb are always zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub const MAX_LENGTH: usize = 1024;

type Limbs = SmallVec<[u64; 2]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    n: usize,
    limbs: Limbs,
}

fn limb_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl Word {
    /// The all-zero word `0^n`.
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_LENGTH).contains(&n), "word length {n} out of range");
        Word { n, limbs: smallvec::smallvec![0; limb_count(n)] }
    }

    pub fn try_zero(n: usize) -> Result<Self> {
        if (1..=MAX_LENGTH).contains(&n) {
            Ok(Self::zero(n))
        } else {
            Err(Error::UnsupportedLength(n))
        }
    }

    /// Characteristic vector of a 1-based support set.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self> {
        let mut w = Self::try_zero(n)?;
        for &i in support {
            w.check(i)?;
            w.set(i, true);
        }
        Ok(w)
    }

    /// Parses a `0`/`1` string, coordinate 1 leftmost.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut w = Self::try_zero(s.len())?;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => w.set(k + 1, true),
                other => {
                    return Err(Error::Parse { line: 0, msg: format!("unexpected character {other:?} in word") })
                }
            }
        }
        Ok(w)
    }

    /// Builds a word of length `n <= 64` from its packed representation.
    pub fn from_u64(n: usize, bits: u64) -> Self {
        assert!((1..=64).contains(&n));
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut w = Self::zero(n);
        w.limbs[0] = bits & mask;
        w
    }

    /// Packed form for words of length at most 64.
    pub fn as_u64(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.limbs[0])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::CoordinateOutOfRange { coord: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Bit at 1-based coordinate `i`. Panics outside `1..=n`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.n, "coordinate {i} out of range 1..={}", self.n);
        (self.limbs[(i - 1) / 64] >> ((i - 1) % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.n, "coordinate {i} out of range 1..={}", self.n);
        let bit = 1u64 << ((i - 1) % 64);
        if value {
            self.limbs[(i - 1) / 64] |= bit;
        } else {
            self.limbs[(i - 1) / 64] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i >= 1 && i <= self.n, "coordinate {i} out of range 1..={}", self.n);
        self.limbs[(i - 1) / 64] ^= 1u64 << ((i - 1) % 64);
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Iterates the 1-based support in ascending order.
    pub fn support_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(k, &limb)| {
            let mut rest = limb;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * 64 + b + 1)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.support_iter().collect()
    }

    fn same_len(&self, other: &Word) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.n, found: other.n })
        }
    }

    /// Coordinatewise sum over GF(2).
    pub fn try_add(&self, other: &Word) -> Result<Word> {
        self.same_len(other)?;
        Ok(self + other)
    }

    pub fn distance(&self, other: &Word) -> Result<usize> {
        self.same_len(other)?;
        Ok(self.limbs.iter().zip(&other.limbs).map(|(a, b)| (a ^ b).count_ones() as usize).sum())
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Word) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.limbs.iter().zip(&other.limbs).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// True when `supp(self) ⊆ supp(other)`.
    pub fn is_covered_by(&self, other: &Word) -> bool {
        self.limbs.iter().zip(&other.limbs).all(|(a, b)| a & !b == 0)
    }

    pub fn to_bit_string(&self) -> String {
        (1..=self.n).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl Add for &Word {
    type Output = Word;

    fn add(self, rhs: &Word) -> Word {
        assert_eq!(self.n, rhs.n, "adding words of different lengths");
        let limbs = self.limbs.iter().zip(&rhs.limbs).map(|(a, b)| a ^ b).collect();
        Word { n: self.n, limbs }
    }
}

impl AddAssign<&Word> for Word {
    fn add_assign(&mut self, rhs: &Word) {
        assert_eq!(self.n, rhs.n, "adding words of different lengths");
        for (a, b) in self.limbs.iter_mut().zip(&rhs.limbs) {
            *a ^= b;
        }
    }
}

/// Lexicographic order on the bit strings, coordinate 1 most significant.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.n.cmp(&other.n) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.limbs.iter().zip(&other.limbs) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_bit_string())
    }
}

pub fn weight(w: &Word) -> usize {
    w.weight()
}

pub fn distance(a: &Word, b: &Word) -> Result<usize> {
    a.distance(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_has_weight_zero() {
        assert_eq!(Word::zero(15).weight(), 0);
    }

    #[test]
    fn support_234_has_weight_3() {
        let w = Word::from_support(15, &[2, 3, 4]).unwrap();
        assert_eq!(w.weight(), 3);
        assert_eq!(w.support(), vec![2, 3, 4]);
        assert_eq!(w.to_bit_string(), "011100000000000");
        assert_eq!(distance(&Word::zero(15), &w).unwrap(), 3);
    }

    #[test]
    fn out_of_range_support_rejected() {
        assert!(matches!(Word::from_support(7, &[8]), Err(Error::CoordinateOutOfRange { coord: 8, n: 7 })));
        assert!(Word::from_support(7, &[0]).is_err());
        assert!(Word::try_zero(0).is_err());
        assert!(Word::try_zero(1025).is_err());
    }

    #[test]
    fn distance_length_mismatch() {
        let a = Word::zero(7);
        let b = Word::zero(15);
        assert_eq!(a.distance(&b), Err(Error::LengthMismatch { expected: 7, found: 15 }));
    }

    #[test]
    fn lexicographic_order_follows_bit_strings() {
        let mut words: Vec<Word> = ["0110", "1000", "0001", "0000", "1111", "0100"]
            .iter()
            .map(|s| Word::from_bit_str(s).unwrap())
            .collect();
        words.sort();
        let strings: Vec<String> = words.iter().map(Word::to_bit_string).collect();
        assert_eq!(strings, ["0000", "0001", "0100", "0110", "1000", "1111"]);
    }

    #[test]
    fn multi_limb_words() {
        let w = Word::from_support(130, &[1, 64, 65, 130]).unwrap();
        assert_eq!(w.weight(), 4);
        assert_eq!(w.support(), vec![1, 64, 65, 130]);
        let s = w.to_bit_string();
        assert_eq!(Word::from_bit_str(&s).unwrap(), w);
    }

    fn word_strategy(n: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let mut w = Word::zero(n);
            for (k, b) in bits.into_iter().enumerate() {
                w.set(k + 1, b);
            }
            w
        })
    }

    proptest! {
        #[test]
        fn weight_matches_naive_count(w in word_strategy(31)) {
            let mut count = 0;
            for i in 1..=31 {
                if w.get(i) { count += 1; }
            }
            prop_assert_eq!(w.weight(), count);
        }

        #[test]
        fn addition_is_self_inverse(w in word_strategy(100)) {
            prop_assert!((&w + &w).is_zero());
        }

        #[test]
        fn distance_is_a_metric(a in word_strategy(15), b in word_strategy(15), c in word_strategy(15)) {
            let ab = a.distance(&b).unwrap();
            prop_assert_eq!(ab, b.distance(&a).unwrap());
            prop_assert_eq!(ab, (&a + &b).weight());
            prop_assert!(a.distance(&c).unwrap() <= ab + b.distance(&c).unwrap());
            prop_assert_eq!(a.distance(&a).unwrap(), 0);
        }

        #[test]
        fn bit_string_round_trip(w in word_strategy(70)) {
            prop_assert_eq!(Word::from_bit_str(&w.to_bit_string()).unwrap(), w);
        }
    }
}
