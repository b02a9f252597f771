use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;

use super::word::Word;
use crate::construct::MollardShape;
use crate::error::{Error, Result};

/// Largest cardinality that may be materialized as an [`ExplicitCode`].
pub const ENUMERATION_CAP: usize = 1 << 20;

/// Largest length swept exhaustively by [`is_perfect`].
pub const EXHAUSTIVE_PERFECT_MAX_N: usize = 24;

const DENSE_MAX_N: usize = 24;

#[derive(Clone)]
enum Index {
    Dense(Vec<u64>),
    Hashed(HashSet<Word>),
}

/// An enumerated code: deduplicated, lexicographically sorted, always containing `0^n`.
#[derive(Clone)]
pub struct ExplicitCode {
    n: usize,
    words: Vec<Word>,
    index: Index,
}

impl ExplicitCode {
    pub fn new(n: usize, words: Vec<Word>) -> Result<Self> {
        Self::new_counting_duplicates(n, words).map(|(code, _)| code)
    }

    /// Like [`ExplicitCode::new`], also reporting how many duplicate words were dropped.
    pub fn new_counting_duplicates(n: usize, mut words: Vec<Word>) -> Result<(Self, usize)> {
        Word::try_zero(n)?;
        if let Some(bad) = words.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: bad.len() });
        }
        let before = words.len();
        words.par_sort_unstable();
        words.dedup();
        let duplicates = before - words.len();
        if words.len() > ENUMERATION_CAP {
            return Err(Error::TooLarge {
                what: "explicit code",
                size: words.len().to_string(),
                cap: ENUMERATION_CAP.to_string(),
            });
        }
        if words.first().is_none_or(|w| !w.is_zero()) {
            return Err(Error::MissingZero);
        }
        let index = if n <= DENSE_MAX_N {
            let mut bits = vec![0u64; ((1usize << n) / 64).max(1)];
            for w in &words {
                let v = w.as_u64().unwrap() as usize;
                bits[v / 64] |= 1 << (v % 64);
            }
            Index::Dense(bits)
        } else {
            Index::Hashed(words.iter().cloned().collect())
        };
        Ok((ExplicitCode { n, words, index }, duplicates))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cardinality(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        if w.len() != self.n {
            return false;
        }
        match &self.index {
            Index::Dense(bits) => {
                let v = w.as_u64().unwrap() as usize;
                bits[v / 64] >> (v % 64) & 1 == 1
            }
            Index::Hashed(set) => set.contains(w),
        }
    }

    /// Membership for packed words; only valid when `n <= 64`.
    #[inline]
    pub fn contains_u64(&self, v: u64) -> bool {
        match &self.index {
            Index::Dense(bits) => {
                let v = v as usize;
                bits[v / 64] >> (v % 64) & 1 == 1
            }
            Index::Hashed(set) => set.contains(&Word::from_u64(self.n, v)),
        }
    }

    pub fn try_contains(&self, w: &Word) -> Result<bool> {
        if w.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: w.len() });
        }
        Ok(self.contains(w))
    }

    /// The translate `x + C`. Contains `0^n` only when `x` is a codeword.
    pub fn translate(&self, x: &Word) -> Result<ExplicitCode> {
        if !self.contains(x) {
            return Err(Error::NotMember);
        }
        ExplicitCode::new(self.n, self.words.iter().map(|c| c + x).collect())
    }
}

impl PartialEq for ExplicitCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.words == other.words
    }
}

impl Eq for ExplicitCode {}

impl fmt::Debug for ExplicitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExplicitCode(n={}, |C|={})", self.n, self.words.len())
    }
}

/// Structural description of a code whose membership can be evaluated without enumeration.
#[derive(Clone, Debug)]
pub enum Descriptor {
    Explicit { code: Arc<ExplicitCode>, label: String },
    /// Hamming code of length `2^r - 1` given by its parity-check matrix; `r = 1` is `{0}`.
    Hamming(u32),
    /// Mollard code `M(left, right)` with the zero inner function.
    Mollard(Arc<Descriptor>, Arc<Descriptor>),
}

impl Descriptor {
    pub fn len(&self) -> usize {
        match self {
            Descriptor::Explicit { code, .. } => code.len(),
            Descriptor::Hamming(r) => (1usize << r) - 1,
            Descriptor::Mollard(a, b) => {
                let (t, m) = (a.len(), b.len());
                t * m + t + m
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cardinality(&self) -> BigUint {
        match self {
            Descriptor::Explicit { code, .. } => BigUint::from(code.cardinality()),
            Descriptor::Hamming(r) => {
                let n = (1usize << r) - 1;
                BigUint::one() << (n - *r as usize)
            }
            Descriptor::Mollard(a, b) => (BigUint::one() << (a.len() * b.len())) * a.cardinality() * b.cardinality(),
        }
    }

    pub fn shape(&self) -> Option<MollardShape> {
        match self {
            Descriptor::Mollard(a, b) => Some(MollardShape::new(a.len(), b.len())),
            _ => None,
        }
    }

    /// Membership; `w` must have length `self.len()`.
    pub fn contains(&self, w: &Word) -> bool {
        match self {
            Descriptor::Explicit { code, .. } => code.contains(w),
            Descriptor::Hamming(_) => hamming_syndrome(w) == 0,
            Descriptor::Mollard(a, b) => {
                let shape = MollardShape::new(a.len(), b.len());
                let (x, y) = shape.projections(w);
                a.contains(&x) && b.contains(&y)
            }
        }
    }

    /// Draws a uniformly random codeword by assigning the free parameters of the descriptor.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        match self {
            Descriptor::Explicit { code, .. } => code.words()[rng.gen_range(0..code.cardinality())].clone(),
            Descriptor::Hamming(r) => {
                let n = (1usize << r) - 1;
                let mut w = Word::zero(n);
                for i in 1..=n {
                    if !i.is_power_of_two() && rng.gen::<bool>() {
                        w.set(i, true);
                    }
                }
                let syndrome = hamming_syndrome(&w);
                for bit in 0..*r {
                    if syndrome >> bit & 1 == 1 {
                        w.flip(1 << bit);
                    }
                }
                w
            }
            Descriptor::Mollard(a, b) => {
                let shape = MollardShape::new(a.len(), b.len());
                let x = a.sample(rng);
                let y = b.sample(rng);
                let mut z = Word::zero(shape.len());
                for r in 1..=shape.t() {
                    for s in 1..=shape.m() {
                        if rng.gen::<bool>() {
                            z.set(shape.index(r, s), true);
                        }
                    }
                }
                let (px, py) = shape.projections(&z);
                for r in 1..=shape.t() {
                    if px.get(r) != x.get(r) {
                        z.flip(shape.index(r, 0));
                    }
                }
                for s in 1..=shape.m() {
                    if py.get(s) != y.get(s) {
                        z.flip(shape.index(0, s));
                    }
                }
                z
            }
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Explicit { label, .. } => f.write_str(label),
            Descriptor::Hamming(1) => f.write_str("p1"),
            Descriptor::Hamming(r) => write!(f, "hamming:{r}"),
            Descriptor::Mollard(a, b) => write!(f, "mollard({a},{b})"),
        }
    }
}

/// XOR of the 1-based indices of the set coordinates; zero exactly on Hamming codewords.
pub fn hamming_syndrome(w: &Word) -> usize {
    w.support_iter().fold(0, |acc, i| acc ^ i)
}

/// A code known only through its descriptor.
#[derive(Clone, Debug)]
pub struct OracleCode {
    n: usize,
    descriptor: Descriptor,
    cardinality: BigUint,
}

impl OracleCode {
    pub fn new(descriptor: Descriptor) -> Result<Self> {
        let n = descriptor.len();
        Word::try_zero(n)?;
        let cardinality = descriptor.cardinality();
        Ok(OracleCode { n, descriptor, cardinality })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.n && self.descriptor.contains(w)
    }

    /// Enumerates the code by a membership sweep (small `n` only).
    pub fn materialize(&self) -> Result<ExplicitCode> {
        let card = self.cardinality.to_usize().filter(|&c| c <= ENUMERATION_CAP);
        if card.is_none() || self.n > 32 {
            return Err(Error::TooLarge {
                what: "oracle code enumeration",
                size: self.cardinality.to_string(),
                cap: ENUMERATION_CAP.to_string(),
            });
        }
        let n = self.n;
        let words: Vec<Word> = (0u64..1 << n)
            .into_par_iter()
            .map(|v| Word::from_u64(n, v))
            .filter(|w| self.descriptor.contains(w))
            .collect();
        ExplicitCode::new(n, words)
    }
}

/// Either representation; every operation that only needs membership accepts this.
#[derive(Clone, Debug)]
pub enum Code {
    Explicit(Arc<ExplicitCode>),
    Oracle(OracleCode),
}

impl Code {
    pub fn len(&self) -> usize {
        match self {
            Code::Explicit(c) => c.len(),
            Code::Oracle(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cardinality(&self) -> BigUint {
        match self {
            Code::Explicit(c) => BigUint::from(c.cardinality()),
            Code::Oracle(c) => c.cardinality().clone(),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        match self {
            Code::Explicit(c) => c.contains(w),
            Code::Oracle(c) => c.contains(w),
        }
    }

    pub fn as_explicit(&self) -> Option<&Arc<ExplicitCode>> {
        match self {
            Code::Explicit(c) => Some(c),
            Code::Oracle(_) => None,
        }
    }

    /// Descriptor view: explicit codes become a leaf labelled `label`.
    pub fn descriptor(&self, label: &str) -> Descriptor {
        match self {
            Code::Explicit(c) => Descriptor::Explicit { code: Arc::clone(c), label: label.to_string() },
            Code::Oracle(c) => c.descriptor().clone(),
        }
    }

    /// Explicit codes are returned as-is; small oracle codes are enumerated.
    pub fn to_explicit(&self) -> Result<Arc<ExplicitCode>> {
        match self {
            Code::Explicit(c) => Ok(Arc::clone(c)),
            Code::Oracle(c) => c.materialize().map(Arc::new),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        match self {
            Code::Explicit(c) => c.words()[rng.gen_range(0..c.cardinality())].clone(),
            Code::Oracle(c) => c.descriptor().sample(rng),
        }
    }
}

impl From<ExplicitCode> for Code {
    fn from(c: ExplicitCode) -> Self {
        Code::Explicit(Arc::new(c))
    }
}

impl From<OracleCode> for Code {
    fn from(c: OracleCode) -> Self {
        Code::Oracle(c)
    }
}

pub fn membership(code: &Code, w: &Word) -> Result<bool> {
    if w.len() != code.len() {
        return Err(Error::LengthMismatch { expected: code.len(), found: w.len() });
    }
    Ok(code.contains(w))
}

/// Exact minimum distance over distinct pairs.
pub fn min_distance(code: &ExplicitCode) -> Result<usize> {
    if code.cardinality() < 2 {
        return Err(Error::TooFewCodewords);
    }
    let words = code.words();
    Ok((0..words.len())
        .into_par_iter()
        .map(|i| {
            words[i + 1..]
                .iter()
                .map(|b| words[i].distance(b).unwrap())
                .min()
                .unwrap_or(usize::MAX)
        })
        .min()
        .unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerfectMode {
    Exhaustive,
    Sampled { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerfectVerdict {
    pub perfect: bool,
    pub mode: PerfectMode,
}

/// Default number of codewords whose radius-2 neighbourhood is probed in sampled mode.
pub const DEFAULT_PERFECT_SAMPLES: usize = 16;

pub fn is_perfect(code: &Code) -> PerfectVerdict {
    is_perfect_with(code, DEFAULT_PERFECT_SAMPLES, 0)
}

/// Perfectness test. Lengths up to [`EXHAUSTIVE_PERFECT_MAX_N`] are swept exhaustively;
/// longer codes get the sphere-packing count plus a minimum-distance probe around
/// `samples` random codewords.
pub fn is_perfect_with(code: &Code, samples: usize, seed: u64) -> PerfectVerdict {
    let n = code.len();
    let space = BigUint::one() << n;
    if code.cardinality() * BigUint::from(n + 1) != space {
        let mode = if n <= EXHAUSTIVE_PERFECT_MAX_N { PerfectMode::Exhaustive } else { PerfectMode::Sampled { samples: 0 } };
        return PerfectVerdict { perfect: false, mode };
    }
    if n <= EXHAUSTIVE_PERFECT_MAX_N {
        let members: Vec<u64> = match code {
            Code::Explicit(c) => c.words().iter().map(|w| w.as_u64().unwrap()).collect(),
            Code::Oracle(c) => (0u64..1 << n)
                .into_par_iter()
                .filter(|&v| c.contains(&Word::from_u64(n, v)))
                .collect(),
        };
        let mut covered = vec![0u64; ((1usize << n) / 64).max(1)];
        for &c in &members {
            for flip in std::iter::once(0u64).chain((0..n).map(|b| 1u64 << b)) {
                let v = (c ^ flip) as usize;
                if covered[v / 64] >> (v % 64) & 1 == 1 {
                    return PerfectVerdict { perfect: false, mode: PerfectMode::Exhaustive };
                }
                covered[v / 64] |= 1 << (v % 64);
            }
        }
        return PerfectVerdict { perfect: true, mode: PerfectMode::Exhaustive };
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<Word> = (0..samples).map(|_| code.sample(&mut rng)).collect();
    let ok = probes.par_iter().all(|c| {
        (1..=n).all(|i| {
            let mut w = c.clone();
            w.flip(i);
            if code.contains(&w) {
                return false;
            }
            (i + 1..=n).all(|j| {
                w.flip(j);
                let hit = code.contains(&w);
                w.flip(j);
                !hit
            })
        })
    });
    PerfectVerdict { perfect: ok, mode: PerfectMode::Sampled { samples } }
}

/// `2^n / (n + 1)` when `n + 1` is a power of two.
pub fn perfect_cardinality(n: usize) -> Option<BigUint> {
    (n + 1).is_power_of_two().then(|| BigUint::one() << (n - (n + 1).trailing_zeros() as usize))
}
