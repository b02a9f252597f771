use std::fmt;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitcore::Word;
use crate::error::{Error, Result};

/// A bijection on the coordinates `1..=n`.
///
/// Acts on words by moving the bit at coordinate `i` to coordinate `π(i)`, so
/// `supp(π(y)) = π(supp(y))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u16).collect() }
    }

    /// From 1-based images `π(1), ..., π(n)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &img in &images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 1..={n}")));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u16);
        }
        Ok(Permutation { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u16>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(k, &v)| k == v as usize)
        });
        Permutation { images }
    }

    /// Parses cycle notation such as `(5,15)(9,12)`; `()` or an empty string is the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidPermutation(format!("{msg} in {text:?}"));
        let mut images: Vec<usize> = (1..=n).collect();
        let mut seen = vec![false; n + 1];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let body = &body[..body_end - 1];
            let points: Vec<usize> = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad("bad point"))).collect::<Result<_>>()?
            };
            for &p in &points {
                if p == 0 || p > n || seen[p] {
                    return Err(bad("point out of range or repeated"));
                }
                seen[p] = true;
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = points[(k + 1) % points.len()];
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Self::from_images(images)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<u16> = (0..n as u16).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 1-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based image sequence.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        assert_eq!(w.len(), self.len(), "permutation and word lengths differ");
        let mut out = Word::zero(w.len());
        for i in w.support_iter() {
            out.set(self.apply(i), true);
        }
        out
    }

    /// Packed action for `n <= 64`.
    #[inline]
    pub fn apply_u64(&self, mut v: u64) -> u64 {
        let mut out = 0u64;
        while v != 0 {
            let b = v.trailing_zeros() as usize;
            v &= v - 1;
            out |= 1 << self.images[b];
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Nontrivial cycles, each starting at its least point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    pub fn order(&self) -> u128 {
        self.cycles().iter().fold(1u128, |acc, c| acc.lcm(&(c.len() as u128)))
    }

    /// True when the 1-based point set is mapped onto itself.
    pub fn stabilizes(&self, points: &[usize]) -> bool {
        points.iter().all(|&p| points.contains(&self.apply(p)))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// A Hamming-space automorphism `(x, π): y ↦ x + π(y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Automorphism {
    pub translation: Word,
    pub perm: Permutation,
}

impl Automorphism {
    pub fn new(translation: Word, perm: Permutation) -> Self {
        assert_eq!(translation.len(), perm.len());
        Automorphism { translation, perm }
    }

    pub fn identity(n: usize) -> Self {
        Automorphism { translation: Word::zero(n), perm: Permutation::identity(n) }
    }

    pub fn apply(&self, y: &Word) -> Word {
        &self.translation + &self.perm.apply_word(y)
    }

    /// `(x, π)·(y, π') = (x + π(y), π∘π')`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            translation: &self.translation + &self.perm.apply_word(&other.translation),
            perm: self.perm.compose(&other.perm),
        }
    }

    /// `(x, π)⁻¹ = (π⁻¹(x), π⁻¹)`.
    pub fn inverse(&self) -> Automorphism {
        let inv = self.perm.inverse();
        Automorphism { translation: inv.apply_word(&self.translation), perm: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.translation.is_zero() && self.perm.is_identity()
    }
}
