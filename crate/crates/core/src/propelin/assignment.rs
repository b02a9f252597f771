use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::bitcore::{ExplicitCode, Word};
use crate::error::{Error, Result};
use crate::groups::Permutation;
use crate::invariants::explicit_kernel;

/// Codes up to this size have every pair checked; larger ones are sampled.
pub const EXHAUSTIVE_PAIR_CHECK_MAX: usize = 1 << 11;
pub const SAMPLED_PAIRS: usize = 100_000;

/// `x ↦ π_x`, aligned with the code's word order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropelinearAssignment {
    code: Arc<ExplicitCode>,
    perms: Vec<Permutation>,
}

impl PropelinearAssignment {
    pub fn new(code: Arc<ExplicitCode>, perms: Vec<Permutation>) -> Self {
        PropelinearAssignment { code, perms }
    }

    pub fn code(&self) -> &Arc<ExplicitCode> {
        &self.code
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn perm_of(&self, x: &Word) -> Option<&Permutation> {
        self.code.words().binary_search(x).ok().map(|i| &self.perms[i])
    }

    /// Distinct permutations, sorted.
    pub fn distinct_perms(&self) -> Vec<Permutation> {
        let mut v = self.perms.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `x * y = x + π_x(y)`.
    pub fn product(&self, x: &Word, y: &Word) -> Option<Word> {
        Some(x + &self.perm_of(x)?.apply_word(y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `(x, π_x) ∈ Aut(C)`.
    Automorphism,
    /// `z = x + π_x(y)` implies `π_z = π_x ∘ π_y`.
    Multiplicative,
    /// `|{π_x}| = |C| / |Ker(C)|`.
    Normalized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentFailure {
    pub condition: Condition,
    pub x: String,
    pub y: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentCheck {
    pub valid: bool,
    /// False when the pair condition was checked on a sample only.
    pub exhaustive: bool,
    pub distinct_perms: usize,
    pub failure: Option<AssignmentFailure>,
}

fn fail(condition: Condition, x: &Word, y: Option<&Word>, exhaustive: bool, distinct: usize) -> AssignmentCheck {
    AssignmentCheck {
        valid: false,
        exhaustive,
        distinct_perms: distinct,
        failure: Some(AssignmentFailure { condition, x: x.to_bit_string(), y: y.map(Word::to_bit_string) }),
    }
}

/// Checks the propelinear conditions for an assignment; `normalized` also checks the
/// size of the permutation set.
pub fn verify_propelinear_assignment(code: &ExplicitCode, pa: &PropelinearAssignment, normalized: bool, seed: u64) -> Result<AssignmentCheck> {
    if pa.perms.len() != code.cardinality() || pa.code.as_ref() != code {
        return Err(Error::Precondition(format!(
            "assignment covers {} words of a different or {}-word code",
            pa.perms.len(),
            code.cardinality()
        )));
    }
    let n = code.len();
    if n > 64 {
        return Err(Error::TooLarge { what: "code length for assignment checks", size: n.to_string(), cap: "64".into() });
    }
    let words: Vec<u64> = code.words().iter().map(|w| w.as_u64().unwrap()).collect();
    let distinct = pa.distinct_perms();
    let id_of: HashMap<&Permutation, usize> = distinct.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let ids: Vec<usize> = pa.perms.iter().map(|p| id_of[p]).collect();
    let exhaustive = code.cardinality() <= EXHAUSTIVE_PAIR_CHECK_MAX;

    for (i, p) in pa.perms.iter().enumerate() {
        if p.len() != n || !words.iter().all(|&y| code.contains_u64(words[i] ^ p.apply_u64(y))) {
            return Ok(fail(Condition::Automorphism, &code.words()[i], None, exhaustive, distinct.len()));
        }
    }

    let mut compose: HashMap<(usize, usize), usize> = HashMap::new();
    let mut check_pair = |i: usize, j: usize| -> bool {
        let z = words[i] ^ pa.perms[i].apply_u64(words[j]);
        let k = code.words().binary_search(&Word::from_u64(n, z)).expect("condition (i) holds");
        let want = *compose
            .entry((ids[i], ids[j]))
            .or_insert_with(|| id_of.get(&distinct[ids[i]].compose(&distinct[ids[j]])).copied().unwrap_or(usize::MAX));
        ids[k] == want
    };
    let size = words.len();
    if exhaustive {
        for i in 0..size {
            for j in 0..size {
                if !check_pair(i, j) {
                    return Ok(fail(Condition::Multiplicative, &code.words()[i], Some(&code.words()[j]), true, distinct.len()));
                }
            }
        }
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_PAIRS {
            let (i, j) = (rng.gen_range(0..size), rng.gen_range(0..size));
            if !check_pair(i, j) {
                return Ok(fail(Condition::Multiplicative, &code.words()[i], Some(&code.words()[j]), false, distinct.len()));
            }
        }
    }

    if normalized {
        let kernel = explicit_kernel(code)?;
        if distinct.len() * kernel.cardinality() != code.cardinality() {
            return Ok(fail(Condition::Normalized, &Word::zero(n), None, exhaustive, distinct.len()));
        }
    }
    Ok(AssignmentCheck { valid: true, exhaustive, distinct_perms: distinct.len(), failure: None })
}
