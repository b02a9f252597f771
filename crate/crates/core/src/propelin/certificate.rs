//! Nonpropelinearity certificates.
//!
//! A codeword `x` has an incorrect inverse when `R_x(C)` is nonempty and each of its
//! elements has order above 2 and maps `supp(x)` onto itself. Such a code has no regular
//! subgroup: the element of `H` carrying `0` to `x` would equal its own inverse.
//!
//! For Mollard codes, `x¹` inherits the property when the μ values force every symmetry
//! of `M(C, D)` to respect the row and column blocks of the coordinate grid. The three
//! series below package the μ inequalities and zero-set inclusions that guarantee it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::json;

use crate::bitcore::{Code, ExplicitCode, Word};
use crate::construct::MollardShape;
use crate::error::{Error, Result};
use crate::groups::{rotations_at, symmetry_group, PermGroup, Permutation};
use crate::invariants::{dual_zero_set, explicit_kernel, kernel_coset_representatives, mu, MuProfile, SampleOptions};

/// True when `R_x(C)` is nonempty and every element has order above 2 and fixes `supp(x)` setwise.
pub fn incorrect_inverse(code: &ExplicitCode, x: &Word) -> Result<bool> {
    Ok(has_incorrect_inverse(&rotations_at(code, x)?, &x.support()))
}

fn has_incorrect_inverse(rotations: &[Permutation], support: &[usize]) -> bool {
    !rotations.is_empty() && rotations.iter().all(|p| p.order() > 2 && p.stabilizes(support))
}

/// Every codeword with an incorrect inverse, ordered by weight and then by support.
///
/// `R_x` depends only on the kernel coset of `x`, so one search per coset suffices.
pub fn incorrect_inverse_words(code: &ExplicitCode) -> Result<Vec<Word>> {
    let kernel = explicit_kernel(code)?;
    let mut out = Vec::new();
    for rep in kernel_coset_representatives(code, &kernel) {
        let rx = rotations_at(code, &rep)?;
        if rx.is_empty() || rx.iter().any(|p| p.order() <= 2) {
            continue;
        }
        for k in kernel.words() {
            let y = &rep + k;
            if rx.iter().all(|p| p.stabilizes(&y.support())) {
                out.push(y);
            }
        }
    }
    out.sort_by_key(|w| (w.weight(), w.support()));
    Ok(out)
}

/// Consequence of an incorrect inverse at `supp`: `Sym(C)` has even order and fixes `supp` setwise.
pub fn sym_consistent_with_incorrect_inverse(sym: &PermGroup, support: &[usize]) -> bool {
    sym.order() % 2 == 0 && sym.stabilizes(support)
}

/// Checks the consequence above for a codeword already known to have an incorrect inverse.
pub fn incorrect_inverse_sym_check(code: &ExplicitCode, x: &Word) -> Result<bool> {
    if !incorrect_inverse(code, x)? {
        return Err(Error::Precondition(format!("{x} does not have an incorrect inverse")));
    }
    Ok(sym_consistent_with_incorrect_inverse(&symmetry_group(code)?, &x.support()))
}

/// A factor code as seen by the certificate arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSummary {
    /// Descriptor text, used in recheck commands.
    pub label: String,
    pub mu: MuProfile,
    /// `I(C)`, when known exactly.
    pub zero_set: Option<BTreeSet<usize>>,
}

impl FactorSummary {
    pub fn from_code(label: impl Into<String>, code: &Code) -> Result<Self> {
        let zero = dual_zero_set(code, &SampleOptions::default())?;
        Ok(FactorSummary { label: label.into(), mu: mu(code)?, zero_set: zero.provenance.is_exact().then_some(zero.value) })
    }

    /// A factor known only through its μ profile.
    pub fn from_mu(label: impl Into<String>, mu: MuProfile) -> Self {
        FactorSummary { label: label.into(), mu, zero_set: None }
    }

    /// The Hamming code of length `2^r - 1`: every coordinate lies on `(m-1)/2` triples.
    pub fn hamming(r: u32) -> Self {
        let m = (1usize << r) - 1;
        let label = if r == 1 { "p1".to_string() } else { format!("hamming:{r}") };
        FactorSummary { label, mu: MuProfile::new(vec![(m as u64 - 1) / 2; m]), zero_set: Some(BTreeSet::new()) }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    IncorrectInverse,
    ExhaustiveRegularSearch,
    /// `M(C, H)` for a Hamming code `H`.
    MollardHamming,
    /// `M(C, D)`.
    MollardFactor,
    /// `M(M(C, D), H)` for a Hamming code `H`.
    MollardNested,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::IncorrectInverse => "incorrect-inverse",
            CertificateKind::ExhaustiveRegularSearch => "exhaustive-regular-search",
            CertificateKind::MollardHamming => "mollard-hamming",
            CertificateKind::MollardFactor => "mollard-factor",
            CertificateKind::MollardNested => "mollard-nested",
        }
    }
}

/// One checked fact with the data it was checked on and a command that recomputes it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Premise {
    pub name: &'static str,
    pub holds: bool,
    pub operands: serde_json::Value,
    pub recheck: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonpropelinearityCertificate {
    pub kind: CertificateKind,
    /// Descriptor of the certified code.
    pub code: String,
    /// Bit string of the witness codeword, when the certificate has one.
    pub witness: Option<String>,
    pub premises: Vec<Premise>,
}

impl NonpropelinearityCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// Premise that `x` has an incorrect inverse in an explicit code.
pub fn incorrect_inverse_premise(code: &ExplicitCode, label: &str, x: &Word) -> Result<Premise> {
    let rx = rotations_at(code, x)?;
    Ok(Premise {
        name: "incorrect-inverse",
        holds: has_incorrect_inverse(&rx, &x.support()),
        operands: json!({
            "code": label,
            "support": x.support(),
            "rotations": rx.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "orders": rx.iter().map(|p| p.order() as u64).collect::<Vec<_>>(),
        }),
        recheck: format!("perfcode propelinear {label}"),
    })
}

pub fn incorrect_inverse_certificate(code: &ExplicitCode, label: &str, x: &Word) -> Result<NonpropelinearityCertificate> {
    let premise = incorrect_inverse_premise(code, label, x)?;
    if !premise.holds {
        return Err(Error::ConditionFailed { name: "incorrect-inverse", detail: format!("at {x}") });
    }
    Ok(NonpropelinearityCertificate {
        kind: CertificateKind::IncorrectInverse,
        code: label.to_string(),
        witness: Some(x.to_bit_string()),
        premises: vec![premise],
    })
}

/// Which Mollard code the certificate is about.
#[derive(Clone, Debug)]
pub enum MollardSeries {
    /// `M(C, H)` with `H` the Hamming code of redundancy `r`.
    Hamming { r: u32 },
    /// `M(C, D)`.
    Factor { d: FactorSummary },
    /// `M(M(C, D), H)`.
    Nested { d: FactorSummary, r: u32 },
}

fn recheck(label: &str) -> String {
    format!("perfcode invariants {label}")
}

/// `supp(x) ⊆ I(C)`.
fn support_in_zero_set(c: &FactorSummary, x: &Word) -> Premise {
    let support = x.support();
    let holds = c.zero_set.as_ref().is_some_and(|z| support.iter().all(|i| z.contains(i)));
    Premise {
        name: "support-in-zero-set",
        holds,
        operands: json!({ "support": support, "zero_set": c.zero_set }),
        recheck: recheck(&c.label),
    }
}

/// `μ_r(C) < (t-1)/2` for every `r`.
fn column_mu_bound(c: &FactorSummary) -> Premise {
    let t = c.len() as u64;
    let max = c.mu.max();
    Premise {
        name: "column-mu-bound",
        holds: 2 * max + 1 < t,
        operands: json!({ "max_mu": max, "t": t }),
        recheck: recheck(&c.label),
    }
}

/// `μ_r(C) = 0` for every `r`.
fn column_mu_zero(c: &FactorSummary) -> Premise {
    Premise {
        name: "column-mu-zero",
        holds: c.mu.max() == 0,
        operands: json!({ "mu": c.mu.multiset().to_string() }),
        recheck: recheck(&c.label),
    }
}

/// `0 < μ_s(D) < (m-1)/2` for every `s`, and `m <= t`.
fn row_mu_window(d: &FactorSummary, t: usize) -> Premise {
    let m = d.len() as u64;
    let min = d.mu.values().iter().copied().min().unwrap_or(0);
    let max = d.mu.max();
    Premise {
        name: "row-mu-window",
        holds: min > 0 && 2 * max + 1 < m && d.len() <= t,
        operands: json!({ "min_mu": min, "max_mu": max, "m": m, "t": t }),
        recheck: recheck(&d.label),
    }
}

fn hamming_label(r: u32) -> String {
    if r == 1 { "p1".to_string() } else { format!("hamming:{r}") }
}

/// Certificate that `x¹` (or `(x¹)¹` for the nested series) has an incorrect inverse in
/// the Mollard code, given a verified incorrect inverse of `x` in `C`.
pub fn mollard_certificate(c: &FactorSummary, x: &Word, incorrect: Premise, series: &MollardSeries) -> Result<NonpropelinearityCertificate> {
    let t = c.len();
    if x.len() != t {
        return Err(Error::LengthMismatch { expected: t, found: x.len() });
    }
    let (kind, code, witness, mut premises) = match series {
        MollardSeries::Hamming { r } => {
            let m = (1usize << r) - 1;
            let w = MollardShape::new(t, m).embed1_unchecked(x);
            let code = format!("mollard({},{})", c.label, hamming_label(*r));
            (CertificateKind::MollardHamming, code, w, vec![support_in_zero_set(c, x), column_mu_bound(c)])
        }
        MollardSeries::Factor { d } => {
            let w = MollardShape::new(t, d.len()).embed1_unchecked(x);
            let code = format!("mollard({},{})", c.label, d.label);
            (CertificateKind::MollardFactor, code, w, vec![column_mu_zero(c), row_mu_window(d, t)])
        }
        MollardSeries::Nested { d, r } => {
            let inner = MollardShape::new(t, d.len());
            let m = (1usize << r) - 1;
            let w = MollardShape::new(inner.len(), m).embed1_unchecked(&inner.embed1_unchecked(x));
            let code = format!("mollard(mollard({},{}),{})", c.label, d.label, hamming_label(*r));
            let premises = vec![support_in_zero_set(c, x), column_mu_zero(c), row_mu_window(d, t)];
            (CertificateKind::MollardNested, code, w, premises)
        }
    };
    premises.insert(0, incorrect);
    if let Some(p) = premises.iter().find(|p| !p.holds) {
        return Err(Error::ConditionFailed { name: p.name, detail: p.operands.to_string() });
    }
    Ok(NonpropelinearityCertificate { kind, code, witness: Some(witness.to_bit_string()), premises })
}

/// How μ splits the coordinates of a Mollard code into the row-0 block `{(0,s)}`, the
/// column-0 block `{(r,0)}` and the inner block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    /// μ value to number of coordinates.
    pub classes: BTreeMap<u64, usize>,
    pub row0_values: Vec<u64>,
    pub col0_values: Vec<u64>,
    pub inner_values: Vec<u64>,
    /// No row-0 μ value occurs outside the row-0 block.
    pub row0_separated: bool,
    /// No column-0 μ value occurs outside the column-0 block.
    pub col0_separated: bool,
    /// The maximum μ is attained exactly on the row-0 block.
    pub row0_uniquely_maximal: bool,
}

pub fn mu_orbit_separation(profile: &MuProfile, shape: &MollardShape) -> Result<SeparationReport> {
    if profile.len() != shape.len() {
        return Err(Error::LengthMismatch { expected: shape.len(), found: profile.len() });
    }
    let (t, m) = (shape.t(), shape.m());
    let collect = |coords: &mut dyn Iterator<Item = usize>| -> BTreeSet<u64> { coords.map(|i| profile.at(i)).collect() };
    let row0 = collect(&mut (1..=m).map(|s| shape.index(0, s)));
    let col0 = collect(&mut (1..=t).map(|r| shape.index(r, 0)));
    let inner = collect(&mut (1..=t).flat_map(|r| (1..=m).map(move |s| shape.index(r, s))));
    let max = profile.max();
    Ok(SeparationReport {
        classes: profile.multiset().0,
        row0_separated: row0.is_disjoint(&col0) && row0.is_disjoint(&inner),
        col0_separated: col0.is_disjoint(&row0) && col0.is_disjoint(&inner),
        row0_uniquely_maximal: row0.len() == 1 && row0.contains(&max) && !col0.contains(&max) && !inner.contains(&max),
        row0_values: row0.into_iter().collect(),
        col0_values: col0.into_iter().collect(),
        inner_values: inner.into_iter().collect(),
    })
}
