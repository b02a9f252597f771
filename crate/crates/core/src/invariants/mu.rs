//! The μ invariant: per coordinate, the number of weight-3 kernel codewords through it.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::kernel::KernelOracle;
use super::sts::weight_three_matching;
use crate::bitcore::{Code, Descriptor};
use crate::construct::MollardShape;
use crate::error::{Error, Result};

/// Multiset of μ values, rendered `base^count` with bases ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MuMultiset(pub BTreeMap<u64, usize>);

impl MuMultiset {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 0, msg: format!("{msg} in μ notation {text:?}") };
        let mut map = BTreeMap::new();
        for term in text.split_whitespace() {
            let (base, count) = term.split_once('^').ok_or_else(|| bad("expected base^count"))?;
            let base: u64 = base.parse().map_err(|_| bad("bad base"))?;
            let count: usize = count.parse().map_err(|_| bad("bad count"))?;
            if count == 0 {
                return Err(bad("zero count"));
            }
            *map.entry(base).or_insert(0) += count;
        }
        if map.is_empty() {
            return Err(bad("empty"));
        }
        Ok(MuMultiset(map))
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// A per-coordinate profile with this multiset, values ascending.
    pub fn arbitrary_profile(&self) -> MuProfile {
        MuProfile::new(self.0.iter().flat_map(|(&v, &c)| std::iter::repeat_n(v, c)).collect())
    }
}

impl fmt::Display for MuMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.0.iter().map(|(b, c)| format!("{b}^{c}")).collect();
        f.write_str(&terms.join(" "))
    }
}

/// `μ_1, ..., μ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuProfile {
    values: Vec<u64>,
}

impl MuProfile {
    pub fn new(values: Vec<u64>) -> Self {
        MuProfile { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// μ at the 1-based coordinate `i`.
    pub fn at(&self, i: usize) -> u64 {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn multiset(&self) -> MuMultiset {
        let mut map = BTreeMap::new();
        for &v in &self.values {
            *map.entry(v).or_insert(0) += 1;
        }
        MuMultiset(map)
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

/// Brute force over all `C(n,3)` weight-3 words through the kernel predicate.
pub fn mu_with_kernel(n: usize, kernel: &KernelOracle) -> MuProfile {
    let triples = weight_three_matching(n, |w| kernel.contains(w));
    let mut values = vec![0u64; n];
    for t in triples {
        for p in t {
            values[p - 1] += 1;
        }
    }
    MuProfile { values }
}

pub fn mu(code: &Code) -> Result<MuProfile> {
    let kernel = KernelOracle::for_code(code)?;
    Ok(mu_with_kernel(code.len(), &kernel))
}

/// μ by recursion over the descriptor: brute force at explicit leaves, `(m-1)/2` for
/// Hamming leaves, [`mollard_mu_formula`] at Mollard nodes.
pub fn descriptor_mu(descriptor: &Descriptor) -> Result<MuProfile> {
    Ok(match descriptor {
        Descriptor::Explicit { code, .. } => mu(&Code::Explicit(code.clone()))?,
        Descriptor::Hamming(r) => {
            let m = (1u64 << r) - 1;
            MuProfile { values: vec![(m - 1) / 2; m as usize] }
        }
        Descriptor::Mollard(a, b) => mollard_mu_formula(&descriptor_mu(a)?, &descriptor_mu(b)?),
    })
}

/// μ of `M(C, D)` from the factor profiles:
/// `μ(r,0) = μ_r(C)(m+1) + m`, `μ(0,s) = μ_s(D)(t+1) + t`,
/// `μ(r,s) = 1 + 2(μ_s(D) + μ_r(C) + μ_r(C)μ_s(D))`.
pub fn mollard_mu_formula(mu_c: &MuProfile, mu_d: &MuProfile) -> MuProfile {
    let (t, m) = (mu_c.len(), mu_d.len());
    let shape = MollardShape::new(t, m);
    let mut values = vec![0u64; shape.len()];
    let (tt, mm) = (t as u64, m as u64);
    for r in 1..=t {
        let c = mu_c.at(r);
        values[shape.index(r, 0) - 1] = c * (mm + 1) + mm;
        for s in 1..=m {
            let d = mu_d.at(s);
            values[shape.index(r, s) - 1] = 1 + 2 * (d + c + c * d);
        }
    }
    for s in 1..=m {
        values[shape.index(0, s) - 1] = mu_d.at(s) * (tt + 1) + tt;
    }
    MuProfile { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{hamming, mollard, trivial};

    #[test]
    fn multiset_notation() {
        let m = MuMultiset::parse("1^13 3^1 5^1").unwrap();
        assert_eq!(m.to_string(), "1^13 3^1 5^1");
        assert_eq!(m.total(), 15);
        assert_eq!(MuMultiset::parse("5^1 1^13 3^1").unwrap(), m);
        assert!(MuMultiset::parse("").is_err());
        assert!(MuMultiset::parse("3").is_err());
        assert!(MuMultiset::parse("3^0").is_err());
        assert_eq!(MuProfile::new(vec![0; 15]).multiset().to_string(), "0^15");
    }

    #[test]
    fn mu_of_hamming_codes() {
        assert_eq!(mu(&hamming(3).unwrap()).unwrap().multiset().to_string(), "3^7");
        assert_eq!(mu(&hamming(4).unwrap()).unwrap().multiset().to_string(), "7^15");
        assert_eq!(mu(&trivial()).unwrap().multiset().to_string(), "0^1");
    }

    #[test]
    fn mu_sums_to_three_times_kernel_triples() {
        let m = mollard(&hamming(2).unwrap(), &hamming(3).unwrap()).unwrap();
        let profile = mu(&m).unwrap();
        let kernel = KernelOracle::for_code(&m).unwrap();
        let triples = weight_three_matching(m.len(), |w| kernel.contains(w)).len() as u64;
        assert_eq!(profile.values().iter().sum::<u64>(), 3 * triples);
    }

    #[test]
    fn formula_examples() {
        // t = 15 with μ_r(C) = 0, m = 7 with μ_s(D) = 3
        let out = mollard_mu_formula(&MuProfile::new(vec![0; 15]), &MuProfile::new(vec![3; 7]));
        let shape = MollardShape::new(15, 7);
        assert_eq!(out.at(shape.index(4, 0)), 7);
        assert_eq!(out.at(shape.index(0, 2)), 63);
        assert_eq!(out.at(shape.index(9, 5)), 7);
        // M(H7, P1) is the length-15 Hamming code up to equivalence
        let out = mollard_mu_formula(&MuProfile::new(vec![3; 7]), &MuProfile::new(vec![0]));
        assert_eq!(out.multiset().to_string(), "7^15");
        let out = mollard_mu_formula(&MuProfile::new(vec![3; 7]), &MuProfile::new(vec![3; 7]));
        assert_eq!(out.multiset().to_string(), "31^63");
    }

    #[test]
    fn formula_agrees_with_brute_force_on_small_mollard_codes() {
        for (a, b) in [(2, 2), (2, 3), (3, 2), (3, 1)] {
            let c = hamming(a).unwrap();
            let d = hamming(b).unwrap();
            let m = mollard(&c, &d).unwrap();
            let brute = mu(&m).unwrap();
            let formula = mollard_mu_formula(&mu(&c).unwrap(), &mu(&d).unwrap());
            assert_eq!(brute, formula, "M(H{a}, H{b})");
        }
    }
}
