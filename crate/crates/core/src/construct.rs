//! Code builders: Hamming codes, the length-1 code, and the Mollard construction
//! with its coordinate algebra.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::bitcore::{hamming_syndrome, is_perfect, Code, Descriptor, ExplicitCode, OracleCode, Word, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::groups::Permutation;

/// Hamming codes with `r` up to this value are materialized explicitly.
pub const EXPLICIT_HAMMING_MAX_R: u32 = 4;

/// Coordinate layout of a Mollard code built from lengths `t` and `m`.
///
/// Pair `(r, s)` with `r in 1..=t`, `s in 0..=m` sits at `(r-1)(m+1) + s + 1`;
/// pair `(0, s)` with `s in 1..=m` sits at `t(m+1) + s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MollardShape {
    t: usize,
    m: usize,
}

impl MollardShape {
    pub fn new(t: usize, m: usize) -> Self {
        assert!(t >= 1 && m >= 1);
        MollardShape { t, m }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.t * self.m + self.t + self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, r: usize, s: usize) -> usize {
        debug_assert!(r <= self.t && s <= self.m && (r, s) != (0, 0));
        if r >= 1 {
            (r - 1) * (self.m + 1) + s + 1
        } else {
            self.t * (self.m + 1) + s
        }
    }

    #[inline]
    pub fn pair(&self, index: usize) -> (usize, usize) {
        debug_assert!(index >= 1 && index <= self.len());
        let block = self.t * (self.m + 1);
        if index <= block {
            ((index - 1) / (self.m + 1) + 1, (index - 1) % (self.m + 1))
        } else {
            (0, index - block)
        }
    }

    fn check(&self, z: &Word) -> Result<()> {
        if z.len() == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.len(), found: z.len() })
        }
    }

    /// Both generalized parity checks at once.
    pub fn projections(&self, z: &Word) -> (Word, Word) {
        let mut x = Word::zero(self.t);
        let mut y = Word::zero(self.m);
        for i in z.support_iter() {
            let (r, s) = self.pair(i);
            if r >= 1 {
                x.flip(r);
            }
            if s >= 1 {
                y.flip(s);
            }
        }
        (x, y)
    }

    pub fn p1(&self, z: &Word) -> Result<Word> {
        self.check(z)?;
        Ok(self.projections(z).0)
    }

    pub fn p2(&self, z: &Word) -> Result<Word> {
        self.check(z)?;
        Ok(self.projections(z).1)
    }

    /// Places `x` on the column `(r, 0)`, zeros elsewhere.
    pub fn embed1_unchecked(&self, x: &Word) -> Word {
        let mut z = Word::zero(self.len());
        for r in x.support_iter() {
            z.set(self.index(r, 0), true);
        }
        z
    }

    /// Places `y` on the row `(0, s)`, zeros elsewhere.
    pub fn embed2_unchecked(&self, y: &Word) -> Word {
        let mut z = Word::zero(self.len());
        for s in y.support_iter() {
            z.set(self.index(0, s), true);
        }
        z
    }

    /// Codeword with inner part `inner` (indexed `(r-1)m + (s-1)` over `r, s >= 1`)
    /// and projections `x`, `y`.
    fn assemble(&self, inner: u64, x: &Word, y: &Word) -> Word {
        let mut z = Word::zero(self.len());
        let mut row = vec![false; self.t + 1];
        let mut col = vec![false; self.m + 1];
        for r in 1..=self.t {
            for s in 1..=self.m {
                if inner >> ((r - 1) * self.m + (s - 1)) & 1 == 1 {
                    z.set(self.index(r, s), true);
                    row[r] ^= true;
                    col[s] ^= true;
                }
            }
        }
        for r in 1..=self.t {
            if row[r] != x.get(r) {
                z.set(self.index(r, 0), true);
            }
        }
        for s in 1..=self.m {
            if col[s] != y.get(s) {
                z.set(self.index(0, s), true);
            }
        }
        z
    }

    /// `D_1(π)`: `(r, s) ↦ (π(r), s)` for `r ≥ 1`, row 0 fixed.
    pub fn lift_d1(&self, perm: &Permutation) -> Result<Permutation> {
        if perm.len() != self.t {
            return Err(Error::LengthMismatch { expected: self.t, found: perm.len() });
        }
        let images = (1..=self.len())
            .map(|i| {
                let (r, s) = self.pair(i);
                if r == 0 { i } else { self.index(perm.apply(r), s) }
            })
            .collect();
        Permutation::from_images(images)
    }

    /// `D_2(π)`: `(r, s) ↦ (r, π(s))` for `s ≥ 1`, column 0 fixed.
    pub fn lift_d2(&self, perm: &Permutation) -> Result<Permutation> {
        if perm.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, found: perm.len() });
        }
        let images = (1..=self.len())
            .map(|i| {
                let (r, s) = self.pair(i);
                if s == 0 { i } else { self.index(r, perm.apply(s)) }
            })
            .collect();
        Permutation::from_images(images)
    }
}

/// Hamming code of length `2^r - 1`; explicit for `r <= 4`, parity-check oracle above.
pub fn hamming(r: u32) -> Result<Code> {
    if r == 0 || (1usize << r) - 1 > crate::bitcore::MAX_LENGTH {
        return Err(Error::Precondition(format!("hamming redundancy r={r} outside 1..=10")));
    }
    code_from_descriptor(Descriptor::Hamming(r))
}

/// The length-1 perfect code `{0}`.
pub fn trivial() -> Code {
    hamming(1).unwrap()
}

/// Explicit when the cardinality is within [`ENUMERATION_CAP`], an oracle code otherwise.
pub fn code_from_descriptor(descriptor: Descriptor) -> Result<Code> {
    code_from_descriptor_capped(descriptor, ENUMERATION_CAP)
}

/// Explicit when the cardinality is within `cap`, an oracle code otherwise.
pub fn code_from_descriptor_capped(descriptor: Descriptor, cap: usize) -> Result<Code> {
    let fits = descriptor.cardinality().to_usize().is_some_and(|c| c <= cap);
    if fits {
        Ok(Code::from(ExplicitCode::new(descriptor.len(), enumerate_words(&descriptor, cap)?)?))
    } else {
        Ok(Code::from(OracleCode::new(descriptor)?))
    }
}

/// Enumerates a small descriptor by walking its free parameters.
pub fn enumerate_descriptor(descriptor: &Descriptor) -> Result<ExplicitCode> {
    let words = enumerate_words(descriptor, ENUMERATION_CAP)?;
    ExplicitCode::new(descriptor.len(), words)
}

fn enumerate_words(descriptor: &Descriptor, cap: usize) -> Result<Vec<Word>> {
    let card = descriptor.cardinality().to_usize().filter(|&c| c <= cap);
    if card.is_none() {
        return Err(Error::TooLarge {
            what: "descriptor enumeration",
            size: descriptor.cardinality().to_string(),
            cap: cap.to_string(),
        });
    }
    match descriptor {
        Descriptor::Explicit { code, .. } => Ok(code.words().to_vec()),
        Descriptor::Hamming(r) => {
            // systematic encoding: information bits at the non-power-of-two coordinates,
            // check bits at coordinate 2^j set from bit j of the syndrome
            let n = (1usize << r) - 1;
            let info: Vec<usize> = (1..=n).filter(|i| !i.is_power_of_two()).collect();
            let mut out: Vec<Word> = (0u64..1 << info.len())
                .map(|v| {
                    let mut w = Word::zero(n);
                    for (b, &i) in info.iter().enumerate() {
                        if v >> b & 1 == 1 {
                            w.set(i, true);
                        }
                    }
                    let syndrome = hamming_syndrome(&w);
                    for j in 0..*r {
                        if syndrome >> j & 1 == 1 {
                            w.set(1 << j, true);
                        }
                    }
                    w
                })
                .collect();
            out.sort_unstable();
            Ok(out)
        }
        Descriptor::Mollard(a, b) => {
            let shape = MollardShape::new(a.len(), b.len());
            let xs = enumerate_words(a, cap)?;
            let ys = enumerate_words(b, cap)?;
            let inner_bits = shape.t() * shape.m();
            let mut out = Vec::with_capacity(card.unwrap());
            for inner in 0u64..1 << inner_bits {
                for x in &xs {
                    for y in &ys {
                        out.push(shape.assemble(inner, x, y));
                    }
                }
            }
            Ok(out)
        }
    }
}

fn require_perfect(code: &Code, side: &str) -> Result<()> {
    if is_perfect(code).perfect {
        Ok(())
    } else {
        Err(Error::NotPerfect(format!("{side} factor of length {}", code.len())))
    }
}

/// Mollard code `M(C, D)` with zero inner function. Both inputs must be perfect.
pub fn mollard(c: &Code, d: &Code) -> Result<Code> {
    require_perfect(c, "left")?;
    require_perfect(d, "right")?;
    code_from_descriptor(mollard_descriptor(c, d))
}

/// Mollard code kept as a membership oracle regardless of size.
pub fn mollard_oracle(c: &Code, d: &Code) -> Result<OracleCode> {
    require_perfect(c, "left")?;
    require_perfect(d, "right")?;
    OracleCode::new(mollard_descriptor(c, d))
}

fn mollard_descriptor(c: &Code, d: &Code) -> Descriptor {
    Descriptor::Mollard(Arc::new(leaf(c)), Arc::new(leaf(d)))
}

fn leaf(code: &Code) -> Descriptor {
    match code {
        Code::Explicit(e) => Descriptor::Explicit {
            code: Arc::clone(e),
            label: format!("explicit[n={},k={}]", e.len(), e.cardinality()),
        },
        Code::Oracle(o) => o.descriptor().clone(),
    }
}

/// `x¹`: embeds a codeword of the left factor.
pub fn embed1(x: &Word, c: &Code, d_len: usize) -> Result<Word> {
    if !crate::bitcore::membership(c, x)? {
        return Err(Error::NotMember);
    }
    Ok(MollardShape::new(c.len(), d_len).embed1_unchecked(x))
}

/// `y²`: embeds a codeword of the right factor.
pub fn embed2(y: &Word, c_len: usize, d: &Code) -> Result<Word> {
    if !crate::bitcore::membership(d, y)? {
        return Err(Error::NotMember);
    }
    Ok(MollardShape::new(c_len, d.len()).embed2_unchecked(y))
}

/// Parsed code descriptor:
/// `hamming:<r>` | `p1` | `file:<path>` | `builtin:<id>` | `mollard(<desc>,<desc>)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorExpr {
    Hamming(u32),
    P1,
    File(String),
    Builtin(u32),
    Mollard(Box<DescriptorExpr>, Box<DescriptorExpr>),
}

impl fmt::Display for DescriptorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescriptorExpr::Hamming(r) => write!(f, "hamming:{r}"),
            DescriptorExpr::P1 => f.write_str("p1"),
            DescriptorExpr::File(p) => write!(f, "file:{p}"),
            DescriptorExpr::Builtin(id) => write!(f, "builtin:{id}"),
            DescriptorExpr::Mollard(a, b) => write!(f, "mollard({a},{b})"),
        }
    }
}

impl DescriptorExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser { src: text.trim(), pos: 0 };
        let expr = parser.expr()?;
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(expr)
    }

    /// Hamming redundancy when this is `hamming:<r>` or `p1`.
    pub fn hamming_r(&self) -> Option<u32> {
        match self {
            DescriptorExpr::Hamming(r) => Some(*r),
            DescriptorExpr::P1 => Some(1),
            _ => None,
        }
    }

    /// Resolves the expression into a descriptor tree, loading files and builtins.
    pub fn to_descriptor(&self) -> Result<Descriptor> {
        Ok(match self {
            DescriptorExpr::Hamming(r) => {
                hamming(*r)?;
                Descriptor::Hamming(*r)
            }
            DescriptorExpr::P1 => Descriptor::Hamming(1),
            DescriptorExpr::File(path) => Descriptor::Explicit {
                code: Arc::new(crate::dataset::load_code(path)?.code),
                label: self.to_string(),
            },
            DescriptorExpr::Builtin(id) => Descriptor::Explicit {
                code: crate::dataset::builtin_code(*id)?,
                label: self.to_string(),
            },
            DescriptorExpr::Mollard(a, b) => {
                let (da, db) = (a.to_descriptor()?, b.to_descriptor()?);
                for (side, d) in [("left", &da), ("right", &db)] {
                    let code = code_from_descriptor(d.clone())?;
                    require_perfect(&code, side)?;
                }
                Descriptor::Mollard(Arc::new(da), Arc::new(db))
            }
        })
    }

    pub fn build(&self) -> Result<Code> {
        code_from_descriptor(self.to_descriptor()?)
    }

    /// As [`DescriptorExpr::build`] with a custom enumeration cap.
    pub fn build_capped(&self, cap: usize) -> Result<Code> {
        code_from_descriptor_capped(self.to_descriptor()?, cap)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Descriptor { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn atom(&mut self) -> &'a str {
        let rest = &self.src[self.pos..];
        let end = rest.find([',', ')']).unwrap_or(rest.len());
        let atom = &rest[..end];
        self.pos += end;
        atom.trim_end()
    }

    fn integer<T: std::str::FromStr>(&mut self) -> Result<T> {
        let start = self.pos;
        let atom = self.atom().to_string();
        atom.parse().map_err(|_| Error::Descriptor { pos: start, msg: format!("expected integer, got {atom:?}") })
    }

    fn expr(&mut self) -> Result<DescriptorExpr> {
        self.skip_ws();
        if self.eat("mollard(") {
            let left = self.expr()?;
            self.skip_ws();
            if !self.eat(",") {
                return Err(self.error("expected `,`"));
            }
            let right = self.expr()?;
            self.skip_ws();
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(DescriptorExpr::Mollard(Box::new(left), Box::new(right)));
        }
        if self.eat("hamming:") {
            return Ok(DescriptorExpr::Hamming(self.integer()?));
        }
        if self.eat("builtin:") {
            return Ok(DescriptorExpr::Builtin(self.integer()?));
        }
        if self.eat("file:") {
            let start = self.pos;
            let path = self.atom().to_string();
            if path.is_empty() {
                return Err(Error::Descriptor { pos: start, msg: "empty path".into() });
            }
            return Ok(DescriptorExpr::File(path));
        }
        if self.eat("p1") {
            return Ok(DescriptorExpr::P1);
        }
        Err(self.error("expected `hamming:<r>`, `p1`, `file:<path>`, `builtin:<id>` or `mollard(`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::{is_perfect, min_distance, PerfectMode};
    use crate::groups::Permutation;
    use num_bigint::BigUint;
    use rand::SeedableRng;

    fn h(r: u32) -> Code {
        hamming(r).unwrap()
    }

    #[test]
    fn shape_index_is_a_bijection() {
        for (t, m) in [(7, 1), (15, 7), (3, 3), (1, 1)] {
            let shape = MollardShape::new(t, m);
            let mut seen = vec![false; shape.len() + 1];
            for r in 0..=t {
                for s in 0..=m {
                    if (r, s) == (0, 0) {
                        continue;
                    }
                    let i = shape.index(r, s);
                    assert!(i >= 1 && i <= shape.len());
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(shape.pair(i), (r, s));
                }
            }
            assert!(seen[1..].iter().all(|&b| b));
        }
    }

    #[test]
    fn hamming_7_has_16_words_and_fano_weights() {
        let c = h(3);
        let e = c.as_explicit().unwrap();
        assert_eq!(e.len(), 7);
        assert_eq!(e.cardinality(), 16);
        let mut dist = [0usize; 8];
        for w in e.words() {
            dist[w.weight()] += 1;
        }
        assert_eq!(dist, [1, 0, 0, 7, 7, 0, 0, 1]);
    }

    #[test]
    fn trivial_code_is_zero_of_length_one() {
        let p1 = trivial();
        let e = p1.as_explicit().unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.words(), &[Word::zero(1)]);
    }

    #[test]
    fn hamming_switches_to_oracle_above_r4() {
        assert!(h(4).as_explicit().is_some());
        let h5 = h(5);
        assert!(h5.as_explicit().is_none());
        assert_eq!(h5.cardinality(), BigUint::from(1u64 << 26));
        assert!(hamming(0).is_err());
        assert!(hamming(11).is_err());
    }

    #[test]
    fn mollard_h7_p1_is_explicit_and_perfect() {
        let m = mollard(&h(3), &trivial()).unwrap();
        let e = m.as_explicit().expect("explicit");
        assert_eq!(e.len(), 15);
        assert_eq!(e.cardinality(), 2048);
        let v = is_perfect(&m);
        assert!(v.perfect);
        assert_eq!(v.mode, PerfectMode::Exhaustive);
        assert_eq!(min_distance(e).unwrap(), 3);
    }

    #[test]
    fn mollard_enumeration_matches_oracle_membership() {
        let c = h(3);
        let d = trivial();
        let explicit = mollard(&c, &d).unwrap();
        let oracle = mollard_oracle(&c, &d).unwrap();
        let e = explicit.as_explicit().unwrap();
        for v in 0u64..1 << 15 {
            let w = Word::from_u64(15, v);
            assert_eq!(e.contains(&w), oracle.contains(&w), "{w}");
        }
    }

    #[test]
    fn mollard_cardinalities() {
        let m = mollard(&h(3), &h(3)).unwrap();
        assert_eq!(m.len(), 63);
        assert_eq!(m.cardinality(), BigUint::from(1u64 << 57));
        assert!(m.contains(&Word::zero(63)));
    }

    #[test]
    fn mollard_rejects_non_perfect_input() {
        let bad: Code = ExplicitCode::new(3, vec![Word::zero(3)]).unwrap().into();
        assert!(matches!(mollard(&bad, &trivial()), Err(Error::NotPerfect(_))));
    }

    #[test]
    fn projections_of_embeddings() {
        let c = h(3);
        let shape = MollardShape::new(7, 7);
        for x in c.as_explicit().unwrap().words() {
            let z = embed1(x, &c, 7).unwrap();
            assert_eq!(shape.p1(&z).unwrap(), *x);
            assert!(shape.p2(&z).unwrap().is_zero());
            let z = embed2(x, 7, &c).unwrap();
            assert_eq!(shape.p2(&z).unwrap(), *x);
            assert!(shape.p1(&z).unwrap().is_zero());
        }
        assert!(shape.p1(&Word::zero(62)).is_err());
    }

    #[test]
    fn embed1_support_under_index_map() {
        let shape = MollardShape::new(15, 1);
        let x = Word::from_support(15, &[2, 3, 4]).unwrap();
        assert_eq!(shape.embed1_unchecked(&x).support(), vec![3, 5, 7]);
        assert!(shape.embed1_unchecked(&Word::zero(15)).is_zero());
    }

    #[test]
    fn embed_rejects_non_members() {
        let c = h(3);
        let x = Word::from_support(7, &[1]).unwrap();
        assert_eq!(embed1(&x, &c, 1), Err(Error::NotMember));
    }

    #[test]
    fn embed2_words_are_mollard_members() {
        let c = h(3);
        let m = mollard_oracle(&c, &c).unwrap();
        for y in c.as_explicit().unwrap().words() {
            assert!(m.contains(&embed2(y, 7, &c).unwrap()));
            assert!(m.contains(&embed1(y, &c, 7).unwrap()));
        }
    }

    #[test]
    fn sampled_members_project_into_factors() {
        let c = h(3);
        let m = mollard_oracle(&c, &c).unwrap();
        let shape = MollardShape::new(7, 7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let z = m.descriptor().sample(&mut rng);
            let (x, y) = shape.projections(&z);
            assert!(c.contains(&x) && c.contains(&y));
            assert!(m.contains(&z));
        }
    }

    #[test]
    fn projections_are_linear() {
        let shape = MollardShape::new(15, 7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let oracle = crate::bitcore::Descriptor::Hamming(7);
        for _ in 0..200 {
            let a = oracle.sample(&mut rng);
            let b = oracle.sample(&mut rng);
            let (a1, a2) = shape.projections(&a);
            let (b1, b2) = shape.projections(&b);
            let (s1, s2) = shape.projections(&(&a + &b));
            assert_eq!(s1, &a1 + &b1);
            assert_eq!(s2, &a2 + &b2);
        }
    }

    #[test]
    fn lifts_of_identity_and_commutation() {
        let shape = MollardShape::new(7, 3);
        assert!(shape.lift_d1(&Permutation::identity(7)).unwrap().is_identity());
        assert!(shape.lift_d2(&Permutation::identity(3)).unwrap().is_identity());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = shape.lift_d1(&Permutation::random(7, &mut rng)).unwrap();
            let b = shape.lift_d2(&Permutation::random(3, &mut rng)).unwrap();
            assert_eq!(a.compose(&b), b.compose(&a));
        }
        assert!(shape.lift_d1(&Permutation::identity(6)).is_err());
    }

    #[test]
    fn descriptor_grammar_round_trips() {
        for text in ["hamming:3", "p1", "builtin:4918", "file:/tmp/a.code", "mollard(hamming:3,p1)", "mollard(mollard(builtin:4918,hamming:4),hamming:2)"] {
            let expr = DescriptorExpr::parse(text).unwrap();
            assert_eq!(expr.to_string(), text);
        }
        let spaced = DescriptorExpr::parse(" mollard( hamming:3 , p1 ) ").unwrap();
        assert_eq!(spaced.to_string(), "mollard(hamming:3,p1)");
    }

    #[test]
    fn descriptor_grammar_errors() {
        for text in ["", "hamming:", "hamming:x", "mollard(p1", "mollard(p1,p1", "p2", "p1 p1", "file:"] {
            assert!(matches!(DescriptorExpr::parse(text), Err(Error::Descriptor { .. })), "{text}");
        }
    }

    #[test]
    fn descriptor_build() {
        let code = DescriptorExpr::parse("mollard(hamming:3,p1)").unwrap().build().unwrap();
        assert_eq!(code.as_explicit().unwrap().cardinality(), 2048);
        let big = DescriptorExpr::parse("mollard(hamming:3,hamming:3)").unwrap().build().unwrap();
        assert!(big.as_explicit().is_none());
        assert_eq!(big.len(), 63);
    }
}
