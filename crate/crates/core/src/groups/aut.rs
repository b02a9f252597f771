//! Symmetry groups, rotation cosets `R_x(C)`, automorphism groups and transitivity.

use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;

use super::group::{PermGroup, GROUP_ELEMENT_CAP};
use super::perm::{Automorphism, Permutation};
use super::search::{search, Structure, MAX_SEARCH_LEN};
use crate::bitcore::{ExplicitCode, Word};
use crate::error::{Error, Result};
use crate::invariants::{explicit_kernel, kernel_coset_representatives, TripleSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    First,
    All,
}

/// Permutations found by an equivalence search.
#[derive(Clone, Debug)]
pub struct EquivalenceResult {
    /// Sorted.
    pub maps: Vec<Permutation>,
    /// False when a node budget stopped the search early.
    pub complete: bool,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

fn packed(code: &ExplicitCode) -> Result<Vec<u64>> {
    if code.len() > MAX_SEARCH_LEN {
        return Err(Error::TooLarge { what: "code length for permutation search", size: code.len().to_string(), cap: MAX_SEARCH_LEN.to_string() });
    }
    Ok(code.words().iter().map(|w| w.as_u64().unwrap()).collect())
}

fn run(a: &Structure, b: &Structure, mode: SearchMode, budget: Option<u64>) -> EquivalenceResult {
    let mut maps = Vec::new();
    let outcome = search(a, b, budget, |p| {
        maps.push(p.clone());
        if mode == SearchMode::First { ControlFlow::Break(()) } else { ControlFlow::Continue(()) }
    });
    maps.sort_unstable();
    EquivalenceResult { maps, complete: outcome.complete, nodes: outcome.nodes }
}

/// All (or the first) `π` with `π(A) = B`, with an optional node budget.
pub fn equivalence_search(a: &ExplicitCode, b: &ExplicitCode, mode: SearchMode, budget: Option<u64>) -> Result<EquivalenceResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
    }
    let sa = Structure::new(a.len(), packed(a)?);
    let sb = Structure::new(b.len(), packed(b)?);
    Ok(run(&sa, &sb, mode, budget))
}

pub fn equivalence_maps(a: &ExplicitCode, b: &ExplicitCode, mode: SearchMode) -> Result<Vec<Permutation>> {
    Ok(equivalence_search(a, b, mode, None)?.maps)
}

/// `Aut(STS)`: point permutations mapping the triple set onto itself.
pub fn sts_automorphisms(ts: &TripleSystem) -> Result<PermGroup> {
    let n = ts.len();
    if n > MAX_SEARCH_LEN {
        return Err(Error::TooLarge { what: "triple system size for permutation search", size: n.to_string(), cap: MAX_SEARCH_LEN.to_string() });
    }
    let words: Vec<u64> = ts.triples().iter().map(|t| t.iter().map(|p| 1u64 << (p - 1)).sum()).collect();
    let s = Structure::new(n, words);
    collect_group(n, &s)
}

fn collect_group(n: usize, s: &Structure) -> Result<PermGroup> {
    let mut maps = Vec::new();
    let mut overflow = false;
    search(s, s, None, |p| {
        maps.push(p.clone());
        if maps.len() > GROUP_ELEMENT_CAP {
            overflow = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if overflow {
        return Err(Error::TooLarge { what: "permutation group", size: format!("> {GROUP_ELEMENT_CAP}"), cap: GROUP_ELEMENT_CAP.to_string() });
    }
    maps.sort_unstable();
    Ok(PermGroup::from_sorted_unchecked(n, maps))
}

/// `Sym(C)`: permutations fixing the code setwise.
///
/// The search only follows branches consistent with the weight-3 words, so for perfect
/// codes it walks `Aut(STS(C))` and keeps the members that also fix `C`.
pub fn symmetry_group(code: &ExplicitCode) -> Result<PermGroup> {
    let s = Structure::new(code.len(), packed(code)?);
    collect_group(code.len(), &s)
}

/// `π(C) = C`.
pub fn preserves(perm: &Permutation, code: &ExplicitCode) -> bool {
    if let Some(words) = code.words().iter().map(Word::as_u64).collect::<Option<Vec<u64>>>() {
        words.iter().all(|&w| code.contains_u64(perm.apply_u64(w)))
    } else {
        code.words().iter().all(|w| code.contains(&perm.apply_word(w)))
    }
}

/// `R_x(C) = {π : x + π(C) = C}`; empty or a left coset of `Sym(C)`.
pub fn rotations_at(code: &ExplicitCode, x: &Word) -> Result<Vec<Permutation>> {
    let target = code.translate(x)?;
    equivalence_maps(code, &target, SearchMode::All)
}

fn first_rotation(code: &ExplicitCode, x: &Word) -> Result<Option<Permutation>> {
    let target = code.translate(x)?;
    Ok(equivalence_maps(code, &target, SearchMode::First)?.into_iter().next())
}

/// One kernel-coset representative with a rotation reaching it, if any.
///
/// The orbit of `0` under `Aut(C)` is a union of kernel cosets: if `(y, π)` reaches `y`
/// then `(k, id)(y, π) = (y + k, π)` reaches `y + k` for every kernel word `k`.
#[derive(Clone, Debug)]
pub struct CosetWitness {
    pub representative: Word,
    pub rotation: Option<Permutation>,
}

pub fn transitivity_witnesses(code: &ExplicitCode) -> Result<Vec<CosetWitness>> {
    let kernel = explicit_kernel(code)?;
    let reps = kernel_coset_representatives(code, &kernel);
    reps.into_par_iter()
        .map(|x| Ok(CosetWitness { rotation: first_rotation(code, &x)?, representative: x }))
        .collect()
}

pub fn is_transitive(code: &ExplicitCode) -> Result<bool> {
    Ok(transitivity_witnesses(code)?.iter().all(|w| w.rotation.is_some()))
}

/// `Aut(C)` as an explicit element list.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub code: Arc<ExplicitCode>,
    pub sym: PermGroup,
    /// Sorted by translation, then permutation.
    pub elements: Vec<Automorphism>,
    /// False when only the elements over the orbit of `0` are listed.
    pub transitive: bool,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &Automorphism) -> bool {
        self.elements.binary_search(a).is_ok()
    }
}

/// All pairs `(x, π)` with `x + π(C) = C`.
///
/// Built from one rotation `π0` per reachable kernel coset: `R_{x+k} = R_x = π0·Sym(C)`.
pub fn automorphism_group(code: &Arc<ExplicitCode>) -> Result<AutGroup> {
    let sym = symmetry_group(code)?;
    let kernel = explicit_kernel(code)?;
    let witnesses = transitivity_witnesses(code)?;
    let reached = witnesses.iter().filter(|w| w.rotation.is_some()).count();
    let order = reached as u128 * kernel.cardinality() as u128 * sym.order() as u128;
    if order > GROUP_ELEMENT_CAP as u128 {
        return Err(Error::TooLarge { what: "automorphism group", size: order.to_string(), cap: GROUP_ELEMENT_CAP.to_string() });
    }
    let mut elements = Vec::with_capacity(order as usize);
    for w in &witnesses {
        let Some(pi0) = &w.rotation else { continue };
        let coset: Vec<Permutation> = sym.elements().iter().map(|s| pi0.compose(s)).collect();
        for k in kernel.words() {
            let x = &w.representative + k;
            for p in &coset {
                elements.push(Automorphism::new(x.clone(), p.clone()));
            }
        }
    }
    elements.sort_unstable();
    elements.dedup();
    Ok(AutGroup { code: Arc::clone(code), sym, elements, transitive: reached == witnesses.len() })
}

/// `R(C)`: the permutation parts of `Aut(C)`.
pub fn rotation_group(code: &ExplicitCode) -> Result<PermGroup> {
    let sym = symmetry_group(code)?;
    let mut elements = Vec::new();
    for w in transitivity_witnesses(code)? {
        if let Some(pi0) = w.rotation {
            elements.extend(sym.elements().iter().map(|s| pi0.compose(s)));
            if elements.len() > GROUP_ELEMENT_CAP {
                return Err(Error::TooLarge { what: "rotation group", size: format!("> {GROUP_ELEMENT_CAP}"), cap: GROUP_ELEMENT_CAP.to_string() });
            }
        }
    }
    elements.sort_unstable();
    elements.dedup();
    Ok(PermGroup::from_sorted_unchecked(code.len(), elements))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::hamming;
    use crate::invariants::sts_extract;

    fn h7() -> Arc<ExplicitCode> {
        Arc::clone(hamming(3).unwrap().as_explicit().unwrap())
    }

    #[test]
    fn hamming_7_groups() {
        let h = h7();
        assert_eq!(symmetry_group(&h).unwrap().order(), 168);
        assert_eq!(sts_automorphisms(&sts_extract(&hamming(3).unwrap())).unwrap().order(), 168);
        assert_eq!(equivalence_maps(&h, &h, SearchMode::All).unwrap().len(), 168);
        let aut = automorphism_group(&h).unwrap();
        assert_eq!(aut.order(), 16 * 168);
        assert!(aut.transitive);
        let r = rotation_group(&h).unwrap();
        assert_eq!(r, symmetry_group(&h).unwrap());
    }

    #[test]
    fn relabelled_code_is_found() {
        let h = h7();
        let swap = Permutation::parse_cycles(7, "(1,5)").unwrap();
        let b = ExplicitCode::new(7, h.words().iter().map(|w| swap.apply_word(w)).collect()).unwrap();
        let maps = equivalence_maps(&h, &b, SearchMode::All).unwrap();
        assert!(maps.contains(&swap));
        assert_eq!(maps.len(), 168);
    }

    #[test]
    fn rotations_at_zero_and_kernel_words() {
        let h = h7();
        let zero = Word::zero(7);
        assert_eq!(rotations_at(&h, &zero).unwrap().len(), 168);
        let x = h.words()[5].clone();
        assert!(rotations_at(&h, &x).unwrap().contains(&Permutation::identity(7)));
        let outside = Word::from_support(7, &[1]).unwrap();
        assert!(matches!(rotations_at(&h, &outside), Err(Error::NotMember)));
    }

    #[test]
    fn aut_of_hamming_15_is_over_the_cap() {
        let h = Arc::clone(hamming(4).unwrap().as_explicit().unwrap());
        assert!(is_transitive(&h).unwrap());
        assert!(matches!(automorphism_group(&h), Err(Error::TooLarge { .. })));
    }
}
