//! Triple systems: extraction of the weight-3 codewords and the Mollard block decomposition.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitcore::{Code, Word};
use crate::construct::MollardShape;
use crate::error::{Error, Result};

/// A set of 3-subsets of `{1..n}`, each stored ascending, the list sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    n: usize,
    triples: Vec<[usize; 3]>,
}

impl TripleSystem {
    pub fn new(n: usize, triples: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut out: Vec<[usize; 3]> = Vec::new();
        for mut t in triples {
            t.sort_unstable();
            if t[0] == 0 || t[2] > n || t[0] == t[1] || t[1] == t[2] {
                return Err(Error::Precondition(format!("{t:?} is not a 3-subset of 1..={n}")));
            }
            out.push(t);
        }
        out.sort_unstable();
        out.dedup();
        Ok(TripleSystem { n, triples: out })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Every unordered pair in exactly one triple.
    pub fn is_steiner(&self) -> bool {
        let n = self.n;
        if self.triples.len() * 6 != n * (n - 1) {
            return false;
        }
        let mut hit = vec![false; (n + 1) * (n + 1)];
        for t in &self.triples {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                if hit[a * (n + 1) + b] {
                    return false;
                }
                hit[a * (n + 1) + b] = true;
            }
        }
        true
    }

    pub fn as_words(&self) -> Vec<Word> {
        self.triples.iter().map(|t| Word::from_support(self.n, t).unwrap()).collect()
    }

    /// `third[a][b]`: the point completing `{a, b}` to a triple, 0 when none.
    pub fn third_point_table(&self) -> Vec<usize> {
        let n = self.n;
        let mut table = vec![0usize; (n + 1) * (n + 1)];
        for &[a, b, c] in &self.triples {
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                table[x * (n + 1) + y] = z;
                table[y * (n + 1) + x] = z;
            }
        }
        table
    }

    /// One triple per line, `a b c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        out
    }

    pub fn parse_text(n: usize, text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let pts: Vec<usize> = line
                .split_whitespace()
                .map(|p| p.parse().map_err(|_| Error::Parse { line: k + 1, msg: format!("bad point {p:?}") }))
                .collect::<Result<_>>()?;
            let [a, b, c] = pts[..] else {
                return Err(Error::Parse { line: k + 1, msg: "expected three points".into() });
            };
            triples.push([a, b, c]);
        }
        TripleSystem::new(n, triples)
    }
}

/// All `C(n,3)` weight-3 candidates passing `keep`, grouped by first point for parallelism.
pub(crate) fn weight_three_matching<F>(n: usize, keep: F) -> Vec<[usize; 3]>
where
    F: Fn(&Word) -> bool + Sync,
{
    let mut out: Vec<[usize; 3]> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            let mut w = Word::zero(n);
            w.set(a, true);
            for b in a + 1..=n {
                w.set(b, true);
                for c in b + 1..=n {
                    w.set(c, true);
                    if keep(&w) {
                        local.push([a, b, c]);
                    }
                    w.set(c, false);
                }
                w.set(b, false);
            }
            local
        })
        .collect();
    out.sort_unstable();
    out
}

/// Supports of the weight-3 codewords.
pub fn sts_extract(code: &Code) -> TripleSystem {
    let triples = weight_three_matching(code.len(), |w| code.contains(w));
    TripleSystem { n: code.len(), triples }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MollardTripleClass {
    T00,
    T30,
    T03,
    T33,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MollardDecomposition {
    pub t00: usize,
    pub t30: usize,
    pub t03: usize,
    pub t33: usize,
}

impl MollardDecomposition {
    pub fn total(&self) -> usize {
        self.t00 + self.t30 + self.t03 + self.t33
    }
}

fn all_distinct(v: [usize; 3]) -> bool {
    v[0] != v[1] && v[0] != v[2] && v[1] != v[2]
}

/// Values are all `0`, or exactly one `0` and the other two equal.
fn zero_or_one_zero_pair(v: [usize; 3]) -> bool {
    let zeros = v.iter().filter(|&&x| x == 0).count();
    match zeros {
        3 => true,
        1 => {
            let rest: Vec<usize> = v.iter().copied().filter(|&x| x != 0).collect();
            rest[0] == rest[1]
        }
        _ => false,
    }
}

pub fn classify_mollard_triple(triple: [usize; 3], shape: &MollardShape) -> Result<MollardTripleClass> {
    let pairs = triple.map(|i| shape.pair(i));
    let rows = pairs.map(|p| p.0);
    let cols = pairs.map(|p| p.1);
    // T00: (r,0), (r,s), (0,s)
    let is_t00 = {
        let has = |p: (usize, usize)| pairs.contains(&p);
        pairs.iter().any(|&(r, s)| r >= 1 && s >= 1 && has((r, 0)) && has((0, s)))
    };
    if is_t00 {
        return Ok(MollardTripleClass::T00);
    }
    let rows_nonzero = rows.iter().all(|&r| r >= 1);
    let cols_nonzero = cols.iter().all(|&s| s >= 1);
    if rows_nonzero && cols_nonzero && all_distinct(rows) && all_distinct(cols) {
        return Ok(MollardTripleClass::T33);
    }
    if rows_nonzero && all_distinct(rows) && zero_or_one_zero_pair(cols) {
        return Ok(MollardTripleClass::T30);
    }
    if cols_nonzero && all_distinct(cols) && zero_or_one_zero_pair(rows) {
        return Ok(MollardTripleClass::T03);
    }
    Err(Error::Unclassifiable(triple))
}

/// Assigns every triple of a Mollard STS to one of `T00`, `T30`, `T03`, `T33`.
pub fn sts_mollard_decompose(ts: &TripleSystem, shape: &MollardShape) -> Result<MollardDecomposition> {
    if ts.len() != shape.len() {
        return Err(Error::LengthMismatch { expected: shape.len(), found: ts.len() });
    }
    let mut out = MollardDecomposition::default();
    for &t in ts.triples() {
        match classify_mollard_triple(t, shape)? {
            MollardTripleClass::T00 => out.t00 += 1,
            MollardTripleClass::T30 => out.t30 += 1,
            MollardTripleClass::T03 => out.t03 += 1,
            MollardTripleClass::T33 => out.t33 += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{hamming, mollard, trivial};

    #[test]
    fn fano_plane_from_hamming_7() {
        let ts = sts_extract(&hamming(3).unwrap());
        assert_eq!(ts.triples().len(), 7);
        assert!(ts.is_steiner());
        for t in ts.triples() {
            assert_eq!(t[0] ^ t[1], t[2]);
        }
    }

    #[test]
    fn sts_of_hamming_15_and_63() {
        let ts = sts_extract(&hamming(4).unwrap());
        assert_eq!(ts.triples().len(), 35);
        assert!(ts.is_steiner());
        let c = hamming(3).unwrap();
        let big = sts_extract(&mollard(&c, &c).unwrap());
        assert_eq!(big.triples().len(), 651);
        assert!(big.is_steiner());
    }

    #[test]
    fn non_steiner_detected() {
        let ts = TripleSystem::new(7, [[1, 2, 3]]).unwrap();
        assert!(!ts.is_steiner());
        assert!(TripleSystem::new(7, [[1, 1, 3]]).is_err());
        assert!(TripleSystem::new(7, [[1, 2, 8]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let ts = sts_extract(&hamming(3).unwrap());
        let text = ts.to_text();
        assert!(text.starts_with("1 2 3\n"));
        assert_eq!(TripleSystem::parse_text(7, &text).unwrap(), ts);
        assert!(TripleSystem::parse_text(7, "1 2\n").is_err());
    }

    #[test]
    fn decomposition_of_h7_p1() {
        let m = mollard(&hamming(3).unwrap(), &trivial()).unwrap();
        let ts = sts_extract(&m);
        let d = sts_mollard_decompose(&ts, &MollardShape::new(7, 1)).unwrap();
        assert_eq!(d.t00, 7);
        assert_eq!(d.total(), 35);
    }

    #[test]
    fn decomposition_of_h7_h7() {
        let c = hamming(3).unwrap();
        let ts = sts_extract(&mollard(&c, &c).unwrap());
        let d = sts_mollard_decompose(&ts, &MollardShape::new(7, 7)).unwrap();
        // brute-force counts: 7·7; 7 C-triples × (3·7 + 1); symmetric; 7·7·3!
        assert_eq!(d, MollardDecomposition { t00: 49, t30: 154, t03: 154, t33: 294 });
        assert_eq!(d.total(), 651);
    }

    #[test]
    fn two_points_on_row_zero_is_unclassifiable() {
        let shape = MollardShape::new(7, 7);
        let t = [shape.index(0, 1), shape.index(0, 2), shape.index(1, 3)];
        assert!(matches!(classify_mollard_triple(t, &shape), Err(Error::Unclassifiable(_))));
    }
}
