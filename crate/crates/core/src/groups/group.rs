use std::collections::BTreeSet;

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Largest group kept as an explicit element list.
pub const GROUP_ELEMENT_CAP: usize = 1 << 16;

/// A permutation group stored as its full, sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        PermGroup { n, elements: vec![Permutation::identity(n)], generators: Vec::new() }
    }

    /// Closure of `generators` under composition.
    pub fn generate(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        let id = Permutation::identity(n);
        for g in &generators {
            if g.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: g.len() });
            }
        }
        let mut seen: BTreeSet<Permutation> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for g in &generators {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() > GROUP_ELEMENT_CAP {
                        return Err(Error::TooLarge {
                            what: "permutation group",
                            size: format!("> {GROUP_ELEMENT_CAP}"),
                            cap: GROUP_ELEMENT_CAP.to_string(),
                        });
                    }
                    frontier.push(q);
                }
            }
        }
        Ok(PermGroup { n, elements: seen.into_iter().collect(), generators })
    }

    /// Wraps a list already known to be a group; checks closure and identity.
    pub fn from_elements(n: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let group = PermGroup { n, elements, generators: Vec::new() };
        if !group.contains(&Permutation::identity(n)) {
            return Err(Error::InvariantViolated("element list lacks the identity".into()));
        }
        for a in &group.elements {
            for b in &group.elements {
                if !group.contains(&a.compose(b)) {
                    return Err(Error::InvariantViolated(format!("{a} ∘ {b} is outside the list")));
                }
            }
        }
        Ok(group)
    }

    /// Wraps a sorted, deduplicated list without checking the group axioms.
    pub(crate) fn from_sorted_unchecked(n: usize, elements: Vec<Permutation>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        PermGroup { n, elements, generators: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Generators passed to [`PermGroup::generate`]; empty for groups built from lists.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// True when every element maps `points` onto itself.
    pub fn stabilizes(&self, points: &[usize]) -> bool {
        self.elements.iter().all(|p| p.stabilizes(points))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_on_four_points() {
        let gens = vec![Permutation::parse_cycles(4, "(1,2)").unwrap(), Permutation::parse_cycles(4, "(1,2,3,4)").unwrap()];
        let g = PermGroup::generate(4, gens).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.contains(&Permutation::identity(4)));
        let klein = PermGroup::generate(4, vec![
            Permutation::parse_cycles(4, "(1,2)(3,4)").unwrap(),
            Permutation::parse_cycles(4, "(1,3)(2,4)").unwrap(),
        ])
        .unwrap();
        assert_eq!(klein.order(), 4);
        assert!(klein.is_subgroup_of(&g));
        assert!(PermGroup::from_elements(4, klein.elements().to_vec()).is_ok());
    }

    #[test]
    fn non_closed_list_rejected() {
        let p = Permutation::parse_cycles(3, "(1,2,3)").unwrap();
        assert!(PermGroup::from_elements(3, vec![Permutation::identity(3), p]).is_err());
    }

    #[test]
    fn oversized_group_fails_loudly() {
        // S_9 has 362880 elements
        let gens = vec![Permutation::parse_cycles(9, "(1,2)").unwrap(), Permutation::parse_cycles(9, "(1,2,3,4,5,6,7,8,9)").unwrap()];
        assert!(matches!(PermGroup::generate(9, gens), Err(Error::TooLarge { .. })));
    }
}
