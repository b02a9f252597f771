//! GF(2) span bookkeeping: incremental echelon basis, rank, dual and zero set.

use std::collections::BTreeSet;

use crate::bitcore::Word;

/// Incrementally built echelon basis of a subspace of `F_2^n`.
///
/// Each basis vector has a distinct pivot (its least coordinate), and no other basis
/// vector has a one at that pivot.
#[derive(Clone, Debug)]
pub struct Span {
    n: usize,
    rows: Vec<Word>,
    pivots: Vec<usize>,
}

fn lowest(w: &Word) -> Option<usize> {
    w.support_iter().next()
}

impl Span {
    pub fn new(n: usize) -> Self {
        Span { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_words<'a>(n: usize, words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut span = Span::new(n);
        for w in words {
            span.insert(w);
        }
        span
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduced basis, ordered by pivot.
    pub fn basis(&self) -> &[Word] {
        &self.rows
    }

    fn reduce(&self, w: &Word) -> Word {
        let mut r = w.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r += row;
            }
        }
        r
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.reduce(w).is_zero()
    }

    /// Adds `w`; returns `true` when the dimension grew.
    pub fn insert(&mut self, w: &Word) -> bool {
        assert_eq!(w.len(), self.n);
        let r = self.reduce(w);
        let Some(p) = lowest(&r) else { return false };
        for row in &mut self.rows {
            if row.get(p) {
                *row += &r;
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Basis of the orthogonal complement.
    pub fn dual_basis(&self) -> Vec<Word> {
        let pivot_set: BTreeSet<usize> = self.pivots.iter().copied().collect();
        (1..=self.n)
            .filter(|f| !pivot_set.contains(f))
            .map(|f| {
                let mut v = Word::zero(self.n);
                v.set(f, true);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Coordinates that vanish on the whole orthogonal complement.
    pub fn dual_zero_set(&self) -> BTreeSet<usize> {
        let dual = self.dual_basis();
        (1..=self.n).filter(|&i| dual.iter().all(|v| !v.get(i))).collect()
    }

    /// Enumerates every vector of the span (small dimensions only).
    pub fn elements(&self) -> Vec<Word> {
        assert!(self.dim() <= 24, "span too large to enumerate");
        let mut out = vec![Word::zero(self.n)];
        for row in &self.rows {
            let shifted: Vec<Word> = out.iter().map(|w| w + row).collect();
            out.extend(shifted);
        }
        out
    }
}

pub fn rank_of(n: usize, words: &[Word]) -> usize {
    Span::from_words(n, words).dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn dual_is_orthogonal_and_complementary() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = rng.gen_range(1..=70);
            let k = rng.gen_range(0..=n + 3);
            let words: Vec<Word> = (0..k)
                .map(|_| {
                    let mut w = Word::zero(n);
                    for i in 1..=n {
                        if rng.gen_bool(0.3) {
                            w.set(i, true);
                        }
                    }
                    w
                })
                .collect();
            let span = Span::from_words(n, &words);
            let dual = span.dual_basis();
            assert_eq!(span.dim() + dual.len(), n);
            for d in &dual {
                for w in &words {
                    assert!(!d.dot(w));
                }
            }
            assert_eq!(rank_of(n, &dual), dual.len());
            // zero set via the unit-vector route: i ∈ I iff e_i lies in the span
            let via_units: BTreeSet<usize> =
                (1..=n).filter(|&i| span.contains(&Word::from_support(n, &[i]).unwrap())).collect();
            assert_eq!(span.dual_zero_set(), via_units);
        }
    }

    #[test]
    fn insert_reports_growth() {
        let mut span = Span::new(4);
        let a = Word::from_bit_str("1100").unwrap();
        let b = Word::from_bit_str("0110").unwrap();
        assert!(span.insert(&a));
        assert!(span.insert(&b));
        assert!(!span.insert(&(&a + &b)));
        assert_eq!(span.dim(), 2);
        assert_eq!(span.elements().len(), 4);
    }
}
