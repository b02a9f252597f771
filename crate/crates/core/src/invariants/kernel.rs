//! Kernels `Ker(C) = {x ∈ C : x + C = C}` for explicit codes and Mollard descriptors.

use std::sync::Arc;

use rayon::prelude::*;

use super::linalg::Span;
use crate::bitcore::{hamming_syndrome, Code, Descriptor, ExplicitCode, Word};
use crate::construct::MollardShape;
use crate::error::Result;

/// Direct test of `x + C = C`.
pub fn translation_preserves(code: &ExplicitCode, x: &Word) -> bool {
    if let Some(xv) = x.as_u64() {
        code.words().iter().all(|c| code.contains_u64(c.as_u64().unwrap() ^ xv))
    } else {
        code.words().iter().all(|c| code.contains(&(c + x)))
    }
}

/// Kernel of an explicit code, grown as a span so that known kernel words are never retested.
pub fn explicit_kernel(code: &ExplicitCode) -> Result<ExplicitCode> {
    let n = code.len();
    let mut span = Span::new(n);
    let candidates: Vec<&Word> = code.words().iter().filter(|w| !w.is_zero()).collect();
    // Candidates are screened in parallel in chunks; each chunk is filtered against the
    // span found so far before testing.
    for chunk in candidates.chunks(256) {
        let fresh: Vec<&Word> = chunk.iter().copied().filter(|w| !span.contains(w)).collect();
        let hits: Vec<&Word> = fresh.par_iter().copied().filter(|w| translation_preserves(code, w)).collect();
        for w in hits {
            span.insert(w);
        }
    }
    ExplicitCode::new(n, span.elements())
}

/// Membership predicate for the kernel, mirroring the descriptor tree.
///
/// For a Mollard node, `x ∈ Ker(M(C, D))` iff `p1(x) ∈ Ker(C)` and `p2(x) ∈ Ker(D)`.
#[derive(Clone, Debug)]
pub enum KernelOracle {
    Explicit(Arc<ExplicitCode>),
    Hamming(u32),
    Mollard(Box<KernelOracle>, Box<KernelOracle>, MollardShape),
}

impl KernelOracle {
    pub fn for_code(code: &Code) -> Result<Self> {
        match code {
            Code::Explicit(c) => Ok(KernelOracle::Explicit(Arc::new(explicit_kernel(c)?))),
            Code::Oracle(o) => Self::for_descriptor(o.descriptor()),
        }
    }

    pub fn for_descriptor(descriptor: &Descriptor) -> Result<Self> {
        Ok(match descriptor {
            Descriptor::Explicit { code, .. } => KernelOracle::Explicit(Arc::new(explicit_kernel(code)?)),
            Descriptor::Hamming(r) => KernelOracle::Hamming(*r),
            Descriptor::Mollard(a, b) => KernelOracle::Mollard(
                Box::new(Self::for_descriptor(a)?),
                Box::new(Self::for_descriptor(b)?),
                MollardShape::new(a.len(), b.len()),
            ),
        })
    }

    pub fn len(&self) -> usize {
        match self {
            KernelOracle::Explicit(k) => k.len(),
            KernelOracle::Hamming(r) => (1usize << r) - 1,
            KernelOracle::Mollard(_, _, shape) => shape.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, w: &Word) -> bool {
        match self {
            KernelOracle::Explicit(k) => k.contains(w),
            KernelOracle::Hamming(_) => hamming_syndrome(w) == 0,
            KernelOracle::Mollard(a, b, shape) => {
                let (x, y) = shape.projections(w);
                a.contains(&x) && b.contains(&y)
            }
        }
    }

    /// Dimension; for Mollard nodes `dim Ker(C) + dim Ker(D) + tm`.
    pub fn dim(&self) -> usize {
        match self {
            KernelOracle::Explicit(k) => k.cardinality().trailing_zeros() as usize,
            KernelOracle::Hamming(r) => (1usize << r) - 1 - *r as usize,
            KernelOracle::Mollard(a, b, shape) => a.dim() + b.dim() + shape.t() * shape.m(),
        }
    }

    /// A basis: lifted factor bases plus the `tm` triples `(r,0),(r,s),(0,s)`.
    pub fn basis(&self) -> Vec<Word> {
        match self {
            KernelOracle::Explicit(k) => Span::from_words(k.len(), k.words()).basis().to_vec(),
            KernelOracle::Hamming(r) => {
                let n = (1usize << r) - 1;
                (1..=n)
                    .filter(|i| !i.is_power_of_two())
                    .map(|i| {
                        let mut w = Word::zero(n);
                        w.set(i, true);
                        for bit in 0..*r {
                            if i >> bit & 1 == 1 {
                                w.set(1 << bit, true);
                            }
                        }
                        w
                    })
                    .collect()
            }
            KernelOracle::Mollard(a, b, shape) => {
                let mut out: Vec<Word> = a.basis().iter().map(|x| shape.embed1_unchecked(x)).collect();
                out.extend(b.basis().iter().map(|y| shape.embed2_unchecked(y)));
                for r in 1..=shape.t() {
                    for s in 1..=shape.m() {
                        let mut w = Word::zero(shape.len());
                        w.set(shape.index(r, 0), true);
                        w.set(shape.index(r, s), true);
                        w.set(shape.index(0, s), true);
                        out.push(w);
                    }
                }
                out
            }
        }
    }
}

/// Kernel summary: dimension, a basis and the membership predicate.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub dim: usize,
    pub basis: Vec<Word>,
    pub oracle: KernelOracle,
}

pub fn kernel(code: &Code) -> Result<Kernel> {
    let oracle = KernelOracle::for_code(code)?;
    Ok(Kernel { dim: oracle.dim(), basis: oracle.basis(), oracle })
}

/// One representative per kernel coset, the least word of each coset in code order.
pub fn kernel_coset_representatives(code: &ExplicitCode, kernel: &ExplicitCode) -> Vec<Word> {
    let mut covered = std::collections::HashSet::new();
    let mut reps = Vec::new();
    for w in code.words() {
        if covered.contains(w) {
            continue;
        }
        for k in kernel.words() {
            covered.insert(w + k);
        }
        reps.push(w.clone());
    }
    reps
}
