//! One-stop invariant report for a code, in `key: value` text or JSON.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use super::kernel::{explicit_kernel, KernelOracle};
use super::linalg::Span;
use super::mu::{descriptor_mu, mu_with_kernel, MuMultiset, MuProfile};
use super::span::{code_span, Measured, Provenance, SampleOptions};
use super::sts::sts_extract;
use crate::bitcore::{is_perfect_with, Code, PerfectMode, DEFAULT_PERFECT_SAMPLES};
use crate::error::{Error, Result};
use crate::groups::{sts_automorphisms, symmetry_group};

/// Above this length μ and the triple count come from descriptor arithmetic instead of a
/// sweep over all `C(n,3)` weight-3 words.
pub const BRUTE_FORCE_MAX_N: usize = 255;

/// Explicit codes up to this length also get `|Sym(C)|` and `|Aut(STS(C))|`.
pub const GROUP_REPORT_MAX_N: usize = 31;

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub sample: SampleOptions,
    pub groups: bool,
    pub brute_force_max_n: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { sample: SampleOptions::default(), groups: true, brute_force_max_n: BRUTE_FORCE_MAX_N }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub code: String,
    pub n: usize,
    /// Decimal; may exceed 64 bits.
    pub cardinality: String,
    pub representation: &'static str,
    pub perfect: bool,
    pub perfect_check: &'static str,
    pub rank: Measured<usize>,
    pub kernel_dim: Measured<usize>,
    pub zero_set: Measured<BTreeSet<usize>>,
    pub mu: Measured<Vec<u64>>,
    pub mu_multiset: String,
    pub sts_triples: Measured<usize>,
    pub sts_rank: Option<usize>,
    pub sym_order: Option<usize>,
    pub aut_sts_order: Option<usize>,
    /// Some field is only a lower bound because a sampling budget ran out.
    pub partial: bool,
}

/// `(rank, dim Ker, μ multiset)`, the triple compared by [`mu_inequivalence`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InvariantTriple {
    pub rank: usize,
    pub kernel_dim: usize,
    pub mu: MuMultiset,
}

impl std::fmt::Display for InvariantTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rank {}, ker {}, mu {}", self.rank, self.kernel_dim, self.mu)
    }
}

fn exhaustive<T>(value: T) -> Measured<T> {
    Measured { value, provenance: Provenance::Exhaustive }
}

fn formula<T>(value: T) -> Measured<T> {
    Measured { value, provenance: Provenance::Formula }
}

pub fn invariant_report(label: &str, code: &Code, opts: &ReportOptions) -> Result<InvariantReport> {
    let n = code.len();
    let verdict = is_perfect_with(code, DEFAULT_PERFECT_SAMPLES, opts.sample.seed);
    let span = code_span(code, &opts.sample)?;
    let rank = Measured { value: span.value.dim(), provenance: span.provenance };
    let zero_set = Measured { value: span.value.dual_zero_set(), provenance: span.provenance };

    let (kernel_dim, kernel) = match code {
        Code::Explicit(c) => {
            let k = explicit_kernel(c)?;
            let dim = k.cardinality().trailing_zeros() as usize;
            (exhaustive(dim), KernelOracle::Explicit(k.into()))
        }
        Code::Oracle(o) => {
            let k = KernelOracle::for_descriptor(o.descriptor())?;
            (formula(k.dim()), k)
        }
    };

    let sweep = n <= opts.brute_force_max_n;
    let (mu, sts_triples, sts_rank) = if sweep {
        let ts = sts_extract(code);
        let rank = Span::from_words(n, &ts.as_words()).dim();
        (exhaustive(mu_with_kernel(n, &kernel)), exhaustive(ts.triples().len()), Some(rank))
    } else {
        let Code::Oracle(o) = code else {
            return Err(Error::Precondition(format!("explicit code of length {n} exceeds the sweep limit")));
        };
        (formula(descriptor_mu(o.descriptor())?), formula(n * (n - 1) / 6), None)
    };

    let (sym_order, aut_sts_order) = match code {
        Code::Explicit(c) if opts.groups && n <= GROUP_REPORT_MAX_N => {
            let ts = sts_extract(code);
            (Some(symmetry_group(c)?.order()), Some(sts_automorphisms(&ts)?.order()))
        }
        _ => (None, None),
    };

    let partial = !rank.provenance.is_exact();
    Ok(InvariantReport {
        code: label.to_string(),
        n,
        cardinality: code.cardinality().to_string(),
        representation: if code.as_explicit().is_some() { "explicit" } else { "oracle" },
        perfect: verdict.perfect,
        perfect_check: match verdict.mode {
            PerfectMode::Exhaustive => "exhaustive",
            PerfectMode::Sampled { .. } => "sampled",
        },
        mu_multiset: mu.value.multiset().to_string(),
        mu: Measured { value: mu.value.values().to_vec(), provenance: mu.provenance },
        rank,
        kernel_dim,
        zero_set,
        sts_triples,
        sts_rank,
        sym_order,
        aut_sts_order,
        partial,
    })
}

fn set_text(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl InvariantReport {
    pub fn triple(&self) -> InvariantTriple {
        InvariantTriple {
            rank: self.rank.value,
            kernel_dim: self.kernel_dim.value,
            mu: MuProfile::new(self.mu.value.clone()).multiset(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k}: {v}").unwrap();
        line("code", self.code.clone());
        line("n", self.n.to_string());
        line("cardinality", self.cardinality.clone());
        line("representation", self.representation.to_string());
        line("perfect", format!("{} ({})", self.perfect, self.perfect_check));
        line("rank", format!("{} ({})", self.rank.value, self.rank.provenance.as_str()));
        line("kernel_dim", format!("{} ({})", self.kernel_dim.value, self.kernel_dim.provenance.as_str()));
        line("zero_set", format!("{} ({})", set_text(&self.zero_set.value), self.zero_set.provenance.as_str()));
        line("mu", format!("{} ({})", self.mu_multiset, self.mu.provenance.as_str()));
        let profile: Vec<String> = self.mu.value.iter().map(u64::to_string).collect();
        line("mu_profile", profile.join(" "));
        line("sts_triples", format!("{} ({})", self.sts_triples.value, self.sts_triples.provenance.as_str()));
        let opt = |v: Option<usize>| v.map_or_else(|| "not computed".to_string(), |x| x.to_string());
        line("sts_rank", opt(self.sts_rank));
        line("sym_order", opt(self.sym_order));
        line("aut_sts_order", opt(self.aut_sts_order));
        line("partial", self.partial.to_string());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// True when the `(rank, dim Ker, μ)` triples differ, which proves the codes inequivalent.
/// False is inconclusive.
pub fn mu_inequivalence(a: &InvariantReport, b: &InvariantReport) -> Result<bool> {
    if a.partial || b.partial {
        return Err(Error::Precondition("both reports must be complete".into()));
    }
    Ok(a.triple() != b.triple())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{hamming, mollard};

    #[test]
    fn hamming_7_report() {
        let r = invariant_report("hamming:3", &hamming(3).unwrap(), &ReportOptions::default()).unwrap();
        assert_eq!((r.rank.value, r.kernel_dim.value), (4, 4));
        assert_eq!(r.mu_multiset, "3^7");
        assert_eq!(r.sts_triples.value, 7);
        assert_eq!(r.sym_order, Some(168));
        assert!(r.zero_set.value.is_empty());
        assert!(r.to_text().contains("rank: 4 (exhaustive)\n"));
        assert!(!r.partial);
    }

    #[test]
    fn identical_reports_are_inconclusive() {
        let a = invariant_report("hamming:3", &hamming(3).unwrap(), &ReportOptions::default()).unwrap();
        assert!(!mu_inequivalence(&a, &a.clone()).unwrap());
        let mut b = a.clone();
        b.partial = true;
        assert!(mu_inequivalence(&a, &b).is_err());
    }

    #[test]
    fn oracle_report_uses_formulas_above_the_sweep_limit() {
        let c = mollard(&hamming(3).unwrap(), &hamming(3).unwrap()).unwrap();
        let opts = ReportOptions { brute_force_max_n: 31, ..ReportOptions::default() };
        let r = invariant_report("mollard(hamming:3,hamming:3)", &c, &opts).unwrap();
        assert_eq!(r.representation, "oracle");
        assert_eq!(r.mu_multiset, "31^63");
        assert_eq!(r.mu.provenance, Provenance::Formula);
        assert_eq!(r.sts_triples.value, 651);
        assert_eq!((r.rank.value, r.kernel_dim.value), (57, 57));
        assert_eq!(r.rank.provenance, Provenance::SampledExact);
    }

    #[test]
    fn json_keys_keep_declaration_order() {
        let r = invariant_report("p1", &hamming(1).unwrap(), &ReportOptions::default()).unwrap();
        let j = r.to_json();
        let pos = |k: &str| j.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("code") < pos("n") && pos("rank") < pos("kernel_dim") && pos("sym_order") < pos("partial"));
    }
}
