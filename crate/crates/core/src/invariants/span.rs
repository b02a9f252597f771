//! Rank and dual zero set, exact for explicit codes and certified by sampling for
//! oracle codes.

use std::collections::BTreeSet;

use rand::SeedableRng;
use serde::Serialize;

use super::kernel::explicit_kernel;
use super::linalg::Span;
use crate::bitcore::{Code, Descriptor};
use crate::construct::MollardShape;
use crate::error::Result;

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Computed from the full codeword list.
    Exhaustive,
    /// Closed-form arithmetic over the descriptor.
    Formula,
    /// Sampled span stabilized and agreed with the descriptor arithmetic.
    SampledExact,
    /// Sampled span only; the true value may be larger.
    LowerBound,
}

impl Provenance {
    pub fn is_exact(self) -> bool {
        !matches!(self, Provenance::LowerBound)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Exhaustive => "exhaustive",
            Provenance::Formula => "formula",
            Provenance::SampledExact => "sampled-exact",
            Provenance::LowerBound => "lower-bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Measured<T> {
    pub value: T,
    pub provenance: Provenance,
}

/// Sampling protocol for oracle codes.
#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    pub seed: u64,
    /// The span counts as stable after this many consecutive samples that add nothing.
    pub stable_window: usize,
    /// Hard cap on the number of sampled codewords.
    pub max_samples: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { seed: 0x5eed, stable_window: 64, max_samples: 20_000 }
    }
}

/// `(rank, dim Ker)` of a Mollard code from those of its factors.
pub fn mollard_rank_kernel_formula(c: (usize, usize), d: (usize, usize), t: usize, m: usize) -> (usize, usize) {
    (c.0 + d.0 + t * m, c.1 + d.1 + t * m)
}

/// `(rank, dim Ker)` by recursion over the descriptor; explicit leaves are computed exactly.
pub fn descriptor_rank_kernel(descriptor: &Descriptor) -> Result<(usize, usize)> {
    Ok(match descriptor {
        Descriptor::Explicit { code, .. } => {
            let rank = Span::from_words(code.len(), code.words()).dim();
            let ker = explicit_kernel(code)?.cardinality().trailing_zeros() as usize;
            (rank, ker)
        }
        Descriptor::Hamming(r) => {
            let dim = (1usize << r) - 1 - *r as usize;
            (dim, dim)
        }
        Descriptor::Mollard(a, b) => {
            let shape = MollardShape::new(a.len(), b.len());
            mollard_rank_kernel_formula(descriptor_rank_kernel(a)?, descriptor_rank_kernel(b)?, shape.t(), shape.m())
        }
    })
}

/// `I(M(C,D)) = {(r,s) : r ∈ I(C) ∪ {0}, s ∈ I(D) ∪ {0}} \ {(0,0)}`, as linear coordinates.
pub fn mollard_zero_set_formula(zero_c: &BTreeSet<usize>, zero_d: &BTreeSet<usize>, t: usize, m: usize) -> BTreeSet<usize> {
    let shape = MollardShape::new(t, m);
    let rows: Vec<usize> = std::iter::once(0).chain(zero_c.iter().copied()).collect();
    let cols: Vec<usize> = std::iter::once(0).chain(zero_d.iter().copied()).collect();
    let mut out = BTreeSet::new();
    for &r in &rows {
        for &s in &cols {
            if (r, s) != (0, 0) {
                out.insert(shape.index(r, s));
            }
        }
    }
    out
}

/// Span of the code: exact for explicit codes, sampled for oracle codes.
pub fn code_span(code: &Code, opts: &SampleOptions) -> Result<Measured<Span>> {
    match code {
        Code::Explicit(c) => Ok(Measured { value: Span::from_words(c.len(), c.words()), provenance: Provenance::Exhaustive }),
        Code::Oracle(o) => {
            let n = o.len();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
            let mut span = Span::new(n);
            let mut quiet = 0;
            let mut drawn = 0;
            while quiet < opts.stable_window && drawn < opts.max_samples && span.dim() < n {
                drawn += 1;
                if span.insert(&o.descriptor().sample(&mut rng)) {
                    quiet = 0;
                } else {
                    quiet += 1;
                }
            }
            let (formula_rank, _) = descriptor_rank_kernel(o.descriptor())?;
            let provenance = if span.dim() == formula_rank || span.dim() == n {
                Provenance::SampledExact
            } else {
                Provenance::LowerBound
            };
            Ok(Measured { value: span, provenance })
        }
    }
}

pub fn rank(code: &Code, opts: &SampleOptions) -> Result<Measured<usize>> {
    let span = code_span(code, opts)?;
    Ok(Measured { value: span.value.dim(), provenance: span.provenance })
}

/// `I(C)`: coordinates on which every dual word vanishes.
pub fn dual_zero_set(code: &Code, opts: &SampleOptions) -> Result<Measured<BTreeSet<usize>>> {
    let span = code_span(code, opts)?;
    Ok(Measured { value: span.value.dual_zero_set(), provenance: span.provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::{ExplicitCode, Word};
    use crate::construct::{hamming, mollard, trivial};

    #[test]
    fn hamming_rank_and_zero_set() {
        let h = hamming(3).unwrap();
        let r = rank(&h, &SampleOptions::default()).unwrap();
        assert_eq!(r.value, 4);
        assert_eq!(r.provenance, Provenance::Exhaustive);
        assert!(dual_zero_set(&h, &SampleOptions::default()).unwrap().value.is_empty());
    }

    #[test]
    fn zero_set_edge_cases() {
        // {0^1}: dual is all of F_2^1, so nothing vanishes
        let p1 = trivial();
        assert!(dual_zero_set(&p1, &SampleOptions::default()).unwrap().value.is_empty());
        // full space: dual is {0}, every coordinate vanishes
        let full: Code = ExplicitCode::new(3, (0..8).map(|v| Word::from_u64(3, v)).collect()).unwrap().into();
        let all: BTreeSet<usize> = (1..=3).collect();
        assert_eq!(dual_zero_set(&full, &SampleOptions::default()).unwrap().value, all);
    }

    #[test]
    fn formula_matches_exhaustive_at_length_15() {
        let c = hamming(3).unwrap();
        let m = mollard(&c, &trivial()).unwrap();
        let opts = SampleOptions::default();
        assert_eq!(rank(&m, &opts).unwrap().value, 11);
        assert_eq!(mollard_rank_kernel_formula((4, 4), (0, 0), 7, 1), (11, 11));
        let ker = explicit_kernel(m.as_explicit().unwrap()).unwrap();
        assert_eq!(ker.cardinality(), 1 << 11);
    }

    #[test]
    fn sampled_rank_of_oracle_mollard_is_certified() {
        let c = hamming(3).unwrap();
        let m = mollard(&c, &c).unwrap();
        let r = rank(&m, &SampleOptions::default()).unwrap();
        assert_eq!(r.value, 57);
        assert_eq!(r.provenance, Provenance::SampledExact);
        assert!(dual_zero_set(&m, &SampleOptions::default()).unwrap().value.is_empty());
    }

    #[test]
    fn starved_sampling_is_a_lower_bound() {
        let c = hamming(3).unwrap();
        let m = mollard(&c, &c).unwrap();
        let opts = SampleOptions { max_samples: 10, ..SampleOptions::default() };
        let r = rank(&m, &opts).unwrap();
        assert!(r.value <= 10);
        assert_eq!(r.provenance, Provenance::LowerBound);
    }

    #[test]
    fn zero_set_formula_examples() {
        let empty = BTreeSet::new();
        assert!(mollard_zero_set_formula(&empty, &empty, 7, 7).is_empty());
        let ic: BTreeSet<usize> = [1, 2, 3, 4, 6, 7, 8].into_iter().collect();
        let shape = MollardShape::new(15, 7);
        let expected: BTreeSet<usize> = ic.iter().map(|&r| shape.index(r, 0)).collect();
        assert_eq!(mollard_zero_set_formula(&ic, &empty, 15, 7), expected);
    }
}
