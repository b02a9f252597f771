//! Search for a regular subgroup of `Aut(C)`: a subgroup `H` with `|H| = |C|` whose
//! only element fixing `0` is the identity.
//!
//! Three strategies, tried in order:
//! - linear codes use the translation subgroup `{(x, id)}` directly;
//! - when `|Aut(C)|` is a power of two, subgroups of the target order are reached by
//!   descending through maximal subgroups, which for a 2-group are exactly the kernels
//!   of nonzero functionals on `G / Φ(G)` with `Φ(G) = ⟨g² : g ∈ G⟩`;
//! - otherwise a generator backtracking picks, for the least codeword not yet reached,
//!   each element that could carry `0` to it, and closes.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use crate::bitcore::ExplicitCode;
use crate::error::{Error, Result};
use crate::groups::{AutGroup, Automorphism, Permutation};
use crate::invariants::explicit_kernel;

use super::assignment::PropelinearAssignment;

/// Rotation products are tabulated when `|R(C)|` is at most this.
const PRODUCT_TABLE_MAX: usize = 4096;

/// `Aut(C)` indexed for fast multiplication (`n <= 64`).
///
/// Elements are ordered by codeword (numeric order of the packed word) and then by
/// rotation index, so each codeword owns a contiguous block of `|Sym(C)|` elements.
pub struct AutTable {
    n: usize,
    words: Vec<u64>,
    rotations: Vec<Permutation>,
    rotation_index: HashMap<Permutation, u32>,
    product: Option<Vec<u32>>,
    elements: Vec<(u32, u32)>,
    block: usize,
}

impl AutTable {
    pub fn new(aut: &AutGroup) -> Result<Self> {
        let code = &aut.code;
        let n = code.len();
        if n > 64 {
            return Err(Error::TooLarge { what: "code length for automorphism tables", size: n.to_string(), cap: "64".into() });
        }
        if !aut.transitive {
            return Err(Error::Precondition("regular subgroups need a transitive automorphism group".into()));
        }
        let mut words: Vec<u64> = code.words().iter().map(|w| w.as_u64().unwrap()).collect();
        words.sort_unstable();
        let mut rotations: Vec<Permutation> = aut.elements.iter().map(|a| a.perm.clone()).collect();
        rotations.sort_unstable();
        rotations.dedup();
        let rotation_index: HashMap<Permutation, u32> = rotations.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let product = (rotations.len() <= PRODUCT_TABLE_MAX).then(|| {
            let r = rotations.len();
            let mut t = vec![0u32; r * r];
            for (i, a) in rotations.iter().enumerate() {
                for (j, b) in rotations.iter().enumerate() {
                    t[i * r + j] = rotation_index[&a.compose(b)];
                }
            }
            t
        });
        let mut elements: Vec<(u32, u32)> = aut
            .elements
            .iter()
            .map(|a| {
                let w = words.binary_search(&a.translation.as_u64().unwrap()).unwrap() as u32;
                (w, rotation_index[&a.perm])
            })
            .collect();
        elements.sort_unstable();
        let block = aut.sym.order();
        if elements.len() != words.len() * block {
            return Err(Error::InvariantViolated("automorphism list is not |C|·|Sym(C)| long".into()));
        }
        Ok(AutTable { n, words, rotations, rotation_index, product, elements, block })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        let id = self.rotation_index[&Permutation::identity(self.n)];
        self.find(0, id).expect("identity is an automorphism")
    }

    fn find(&self, word: u32, rot: u32) -> Option<u32> {
        let start = word as usize * self.block;
        let block = &self.elements[start..start + self.block];
        block.binary_search(&(word, rot)).ok().map(|k| (start + k) as u32)
    }

    /// Codeword index of the translation part.
    pub fn word_of(&self, e: u32) -> u32 {
        self.elements[e as usize].0
    }

    /// `(x, π)(y, π') = (x + π(y), π∘π')`.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (xa, ra) = self.elements[a as usize];
        let (xb, rb) = self.elements[b as usize];
        let pa = &self.rotations[ra as usize];
        let z = self.words[xa as usize] ^ pa.apply_u64(self.words[xb as usize]);
        let zi = self.words.binary_search(&z).expect("automorphisms preserve the code") as u32;
        let r = match &self.product {
            Some(t) => t[ra as usize * self.rotations.len() + rb as usize],
            None => self.rotation_index[&pa.compose(&self.rotations[rb as usize])],
        };
        self.find(zi, r).expect("products of automorphisms are automorphisms")
    }

    pub fn automorphism(&self, e: u32) -> Automorphism {
        let (w, r) = self.elements[e as usize];
        Automorphism::new(crate::bitcore::Word::from_u64(self.n, self.words[w as usize]), self.rotations[r as usize].clone())
    }

    fn is_stabilizer(&self, e: u32) -> bool {
        self.words[self.word_of(e) as usize] == 0
    }
}

/// A subgroup as a membership bitmap, its element list and a generating set.
#[derive(Clone)]
struct Subgroup {
    members: Vec<u64>,
    list: Vec<u32>,
    gens: Vec<u32>,
}

impl Subgroup {
    fn trivial(t: &AutTable) -> Self {
        let mut h = Subgroup { members: vec![0; t.order().div_ceil(64)], list: Vec::new(), gens: Vec::new() };
        h.insert(t.identity());
        h
    }

    fn full(t: &AutTable) -> Self {
        let mut h = Subgroup { members: vec![0; t.order().div_ceil(64)], list: Vec::new(), gens: Vec::new() };
        for e in 0..t.order() as u32 {
            h.insert(e);
        }
        h
    }

    fn contains(&self, e: u32) -> bool {
        self.members[e as usize / 64] >> (e % 64) & 1 == 1
    }

    fn insert(&mut self, e: u32) -> bool {
        if self.contains(e) {
            return false;
        }
        self.members[e as usize / 64] |= 1 << (e % 64);
        self.list.push(e);
        true
    }

    fn len(&self) -> usize {
        self.list.len()
    }
}

/// `⟨base, extra⟩`, where `base` carries its generators; `None` once the size passes
/// `cap` or `reject` fires on a new element.
fn close_with(t: &AutTable, base: &Subgroup, extra: &[u32], cap: usize, reject: &mut dyn FnMut(u32) -> bool) -> Option<Subgroup> {
    let mut h = base.clone();
    let old_gens = h.gens.len();
    h.gens.extend_from_slice(extra);
    // Every element is a word in the generators. Old elements times old generators stay
    // old, so old elements need only the new generators; new elements need all of them.
    let mut frontier: Vec<(u32, usize)> = h.list.iter().map(|&e| (e, old_gens)).collect();
    while let Some((e, from)) = frontier.pop() {
        for k in from..h.gens.len() {
            let p = t.mul(e, h.gens[k]);
            if h.insert(p) {
                if h.len() > cap || reject(p) {
                    return None;
                }
                frontier.push((p, 0));
            }
        }
    }
    Some(h)
}

/// `Φ(G) = ⟨g² : g ∈ G⟩` for a 2-group `G`.
fn frattini(t: &AutTable, g: &Subgroup) -> Subgroup {
    let mut phi = Subgroup::trivial(t);
    for &e in &g.list {
        let sq = t.mul(e, e);
        if !phi.contains(sq) {
            phi = close_with(t, &phi, &[sq], usize::MAX, &mut |_| false).unwrap();
        }
    }
    phi
}

/// Labels each element of `g` with its image in `G / Φ(G) ≅ F_2^d`; returns `(labels, d)`.
fn quotient_labels(t: &AutTable, g: &Subgroup, phi: &Subgroup) -> (HashMap<u32, u32>, u32) {
    let mut labels: HashMap<u32, u32> = phi.list.iter().map(|&e| (e, 0)).collect();
    let mut d = 0;
    for &b in &g.list {
        if labels.contains_key(&b) {
            continue;
        }
        let snapshot: Vec<(u32, u32)> = labels.iter().map(|(&e, &l)| (e, l)).collect();
        for (e, l) in snapshot {
            labels.insert(t.mul(e, b), l | 1 << d);
        }
        d += 1;
    }
    (labels, d)
}

fn parity(v: u32) -> bool {
    v.count_ones() % 2 == 1
}

/// Outcome of a regular-subgroup search.
#[derive(Clone, Debug)]
pub struct RegularSearch {
    pub found: Option<PropelinearAssignment>,
    /// True when the absence of a regular subgroup is proved, or one was found.
    pub complete: bool,
    pub strategy: &'static str,
    /// Subgroups or search nodes visited.
    pub visited: u64,
}

struct Descent<'a> {
    t: &'a AutTable,
    target: usize,
    deadline: Option<Instant>,
    visited: u64,
    timed_out: bool,
    seen: HashSet<Vec<u64>>,
}

impl Descent<'_> {
    fn stab_count(&self, g: &Subgroup) -> usize {
        g.list.iter().filter(|&&e| self.t.is_stabilizer(e)).count()
    }

    fn run(&mut self, g: &Subgroup) -> Option<Subgroup> {
        self.visited += 1;
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out = true;
            return None;
        }
        if g.len() == self.target {
            return (self.stab_count(g) == 1).then(|| g.clone());
        }
        let phi = frattini(self.t, g);
        let (labels, d) = quotient_labels(self.t, g, &phi);
        let stab: Vec<u32> = g.list.iter().copied().filter(|&e| self.t.is_stabilizer(e) && e != self.t.identity()).collect();
        let last_level = g.len() == 2 * self.target;
        for f in 1u32..1 << d {
            if last_level {
                if stab.iter().all(|s| parity(labels[s] & f)) {
                    self.visited += 1;
                    return Some(self.kernel_of(g, &labels, f));
                }
                continue;
            }
            let m = self.kernel_of(g, &labels, f);
            // A regular H inside M meets the stabilizer trivially, so |M ∩ Stab| <= [M : H].
            if self.stab_count(&m) > m.len() / self.target || !self.seen.insert(m.members.clone()) {
                continue;
            }
            if let Some(h) = self.run(&m) {
                return Some(h);
            }
            if self.timed_out {
                return None;
            }
        }
        None
    }

    fn kernel_of(&self, g: &Subgroup, labels: &HashMap<u32, u32>, f: u32) -> Subgroup {
        let mut m = Subgroup { members: vec![0; self.t.order().div_ceil(64)], list: Vec::new(), gens: Vec::new() };
        for &e in &g.list {
            if !parity(labels[&e] & f) {
                m.insert(e);
            }
        }
        m.list.sort_unstable();
        m
    }
}

struct Backtrack<'a> {
    t: &'a AutTable,
    target: usize,
    deadline: Option<Instant>,
    visited: u64,
    timed_out: bool,
}

impl Backtrack<'_> {
    fn run(&mut self, h: &Subgroup) -> Option<Subgroup> {
        self.visited += 1;
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out = true;
            return None;
        }
        if h.len() == self.target {
            return Some(h.clone());
        }
        let mut covered = vec![false; self.t.words.len()];
        for &e in &h.list {
            covered[self.t.word_of(e) as usize] = true;
        }
        let next = covered.iter().position(|c| !c).expect("a proper subgroup misses some codeword");
        let start = next * self.t.block;
        for g in start..start + self.t.block {
            let mut reached = covered.clone();
            // a second element over the same codeword means a nontrivial stabilizer element
            let mut reject = |p: u32| std::mem::replace(&mut reached[self.t.word_of(p) as usize], true);
            let Some(bigger) = close_with(self.t, h, &[g as u32], self.target, &mut reject) else { continue };
            if let Some(found) = self.run(&bigger) {
                return Some(found);
            }
            if self.timed_out {
                return None;
            }
        }
        None
    }
}

/// How the regular-subgroup search walks `Aut(C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Frattini descent for 2-groups, generator backtracking otherwise.
    Auto,
    /// Descends through maximal subgroups; only valid when `|Aut(C)|` is a power of 2.
    FrattiniDescent,
    /// Grows `H` one generator at a time, one codeword block at a time.
    GeneratorBacktracking,
}

/// Looks for a regular subgroup of `Aut(C)`.
pub fn regular_subgroup_search(aut: &AutGroup, deadline: Option<Instant>) -> Result<RegularSearch> {
    regular_subgroup_search_with(aut, Strategy::Auto, deadline)
}

pub fn regular_subgroup_search_with(aut: &AutGroup, strategy: Strategy, deadline: Option<Instant>) -> Result<RegularSearch> {
    let code = &aut.code;
    let target = code.cardinality();
    if aut.order() % target != 0 {
        return Err(Error::Precondition(format!("|C| = {target} does not divide |Aut(C)| = {}", aut.order())));
    }
    let descent = match strategy {
        Strategy::Auto => aut.order().is_power_of_two(),
        Strategy::FrattiniDescent if !aut.order().is_power_of_two() => {
            return Err(Error::Precondition(format!("Frattini descent needs a 2-group, |Aut(C)| = {}", aut.order())));
        }
        Strategy::FrattiniDescent => true,
        Strategy::GeneratorBacktracking => false,
    };
    let t = AutTable::new(aut)?;
    let (subgroup, strategy, visited, timed_out) = if descent {
        let mut d = Descent { t: &t, target, deadline, visited: 0, timed_out: false, seen: HashSet::new() };
        let h = d.run(&Subgroup::full(&t));
        (h, "frattini-descent", d.visited, d.timed_out)
    } else {
        let mut b = Backtrack { t: &t, target, deadline, visited: 0, timed_out: false };
        let h = b.run(&Subgroup::trivial(&t));
        (h, "generator-backtracking", b.visited, b.timed_out)
    };
    let found = subgroup.map(|h| {
        let mut perms = vec![None; target];
        for &e in &h.list {
            let a = t.automorphism(e);
            let idx = code.words().binary_search(&a.translation).unwrap();
            perms[idx] = Some(a.perm);
        }
        PropelinearAssignment::new(Arc::clone(code), perms.into_iter().map(Option::unwrap).collect())
    });
    Ok(RegularSearch { complete: found.is_some() || !timed_out, found, strategy, visited })
}

/// `{(x, id)}` when `Ker(C) = C`.
pub fn translation_witness(code: &Arc<ExplicitCode>) -> Result<Option<PropelinearAssignment>> {
    let kernel = explicit_kernel(code)?;
    if kernel.cardinality() != code.cardinality() {
        return Ok(None);
    }
    let id = Permutation::identity(code.len());
    Ok(Some(PropelinearAssignment::new(Arc::clone(code), vec![id; code.cardinality()])))
}
