//! Backtracking search for coordinate permutations mapping one word set onto another.
//!
//! Points are assigned one at a time. Three kinds of constraint prune the tree:
//! per-point invariants (how many words of each weight contain the point, plus the
//! sorted list of its pair counts), pair counts over the weight-3 and weight-4 words,
//! and third-point propagation: once two points of a weight-3 word are placed, the third
//! is forced. Every complete assignment is checked word by word.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::perm::Permutation;

const NONE: u8 = u8::MAX;
pub(crate) const MAX_SEARCH_LEN: usize = 64;

/// A word set prepared for the search.
#[derive(Clone, Debug)]
pub(crate) struct Structure {
    n: usize,
    words: Vec<u64>,
    /// `third[a * n + b]`: 1 + the point completing `{a, b}` to a weight-3 word, or 0.
    third: Vec<u8>,
    /// Pair statistic: weight-3 count in the high half, weight-4 count in the low half.
    pair: Vec<u64>,
    invariant: Vec<Vec<u64>>,
}

impl Structure {
    pub(crate) fn new(n: usize, mut words: Vec<u64>) -> Self {
        assert!(n <= MAX_SEARCH_LEN);
        words.sort_unstable();
        words.dedup();
        let mut third = vec![0u8; n * n];
        let mut pair = vec![0u64; n * n];
        let mut by_weight = vec![vec![0u64; n + 1]; n];
        for &w in &words {
            let pts: Vec<usize> = bits(w).collect();
            for &p in &pts {
                by_weight[p][pts.len()] += 1;
            }
            let bump = match pts.len() {
                3 => 1 << 32,
                4 => 1,
                _ => continue,
            };
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    pair[a * n + b] += bump;
                    pair[b * n + a] += bump;
                }
            }
            if pts.len() == 3 {
                for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                    third[pts[x] * n + pts[y]] = pts[z] as u8 + 1;
                    third[pts[y] * n + pts[x]] = pts[z] as u8 + 1;
                }
            }
        }
        let invariant = (0..n)
            .map(|a| {
                let mut profile: Vec<u64> = (0..n).filter(|&b| b != a).map(|b| pair[a * n + b]).collect();
                profile.sort_unstable();
                let mut v = by_weight[a].clone();
                v.extend(profile);
                v
            })
            .collect();
        Structure { n, words, third, pair, invariant }
    }

    pub(crate) fn contains(&self, w: u64) -> bool {
        self.words.binary_search(&w).is_ok()
    }
}

fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            return None;
        }
        let b = w.trailing_zeros() as usize;
        w &= w - 1;
        Some(b)
    })
}

#[derive(Clone, Copy)]
struct Assign {
    to: [u8; MAX_SEARCH_LEN],
    used: u64,
    assigned: u64,
}

pub(crate) struct SearchOutcome {
    /// False when the node budget ran out before the tree was exhausted.
    pub complete: bool,
    pub nodes: u64,
}

struct Searcher<'a, F> {
    a: &'a Structure,
    b: &'a Structure,
    class_a: Vec<u32>,
    class_b: Vec<u32>,
    order: Vec<usize>,
    budget: Option<u64>,
    nodes: u64,
    exhausted: bool,
    visit: F,
}

impl<F: FnMut(&Permutation) -> ControlFlow<()>> Searcher<'_, F> {
    /// Places `a -> b` and everything it forces; false on contradiction.
    fn place(&self, st: &mut Assign, a: usize, b: usize) -> bool {
        let n = self.a.n;
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            if st.assigned >> a & 1 == 1 {
                if st.to[a] as usize != b {
                    return false;
                }
                continue;
            }
            if st.used >> b & 1 == 1 || self.class_a[a] != self.class_b[b] {
                return false;
            }
            let mut rest = st.assigned;
            while rest != 0 {
                let a2 = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let b2 = st.to[a2] as usize;
                if self.a.pair[a * n + a2] != self.b.pair[b * n + b2] {
                    return false;
                }
                let c = self.a.third[a * n + a2];
                if c != 0 {
                    let d = self.b.third[b * n + b2];
                    if d == 0 {
                        return false;
                    }
                    stack.push((c as usize - 1, d as usize - 1));
                }
            }
            st.to[a] = b as u8;
            st.assigned |= 1 << a;
            st.used |= 1 << b;
        }
        true
    }

    fn leaf(&mut self, st: &Assign) -> ControlFlow<()> {
        let n = self.a.n;
        let images: Vec<u16> = st.to[..n].iter().map(|&v| v as u16).collect();
        let perm = Permutation::from_zero_based(images);
        if self.a.words.iter().all(|&w| self.b.contains(perm.apply_u64(w))) {
            (self.visit)(&perm)
        } else {
            ControlFlow::Continue(())
        }
    }

    fn descend(&mut self, st: Assign) -> ControlFlow<()> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.exhausted = true;
            return ControlFlow::Break(());
        }
        let n = self.a.n;
        let Some(&a) = self.order.iter().find(|&&p| st.assigned >> p & 1 == 0) else {
            return self.leaf(&st);
        };
        for b in 0..n {
            if st.used >> b & 1 == 1 || self.class_a[a] != self.class_b[b] {
                continue;
            }
            let mut next = st;
            if self.place(&mut next, a, b) {
                self.descend(next)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` for every permutation `π` with `π(A) = B`, in search order, until it
/// breaks. Deterministic for fixed inputs.
pub(crate) fn search<F>(a: &Structure, b: &Structure, budget: Option<u64>, visit: F) -> SearchOutcome
where
    F: FnMut(&Permutation) -> ControlFlow<()>,
{
    let n = a.n;
    if a.n != b.n || a.words.len() != b.words.len() {
        return SearchOutcome { complete: true, nodes: 0 };
    }
    let mut ids: BTreeMap<&Vec<u64>, u32> = BTreeMap::new();
    for v in a.invariant.iter().chain(&b.invariant) {
        let next = ids.len() as u32;
        ids.entry(v).or_insert(next);
    }
    let class_a: Vec<u32> = a.invariant.iter().map(|v| ids[v]).collect();
    let class_b: Vec<u32> = b.invariant.iter().map(|v| ids[v]).collect();
    let (mut sa, mut sb) = (class_a.clone(), class_b.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return SearchOutcome { complete: true, nodes: 0 };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.invariant[y].cmp(&a.invariant[x]).then(x.cmp(&y)));
    let mut s = Searcher { a, b, class_a, class_b, order, budget, nodes: 0, exhausted: false, visit };
    let _ = s.descend(Assign { to: [NONE; MAX_SEARCH_LEN], used: 0, assigned: 0 });
    SearchOutcome { complete: !s.exhausted, nodes: s.nodes }
}
