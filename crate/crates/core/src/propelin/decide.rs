//! Deciding propelinearity: linear shortcut, Mollard certificates, regular-subgroup search
//! and the incorrect-inverse fallback.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::assignment::{verify_propelinear_assignment, AssignmentCheck, PropelinearAssignment};
use super::certificate::{
    incorrect_inverse_certificate, incorrect_inverse_premise, incorrect_inverse_words, mollard_certificate, CertificateKind,
    FactorSummary, MollardSeries, NonpropelinearityCertificate, Premise,
};
use super::regular::{regular_subgroup_search, translation_witness};
use crate::bitcore::{Code, ExplicitCode};
use crate::construct::DescriptorExpr;
use crate::error::{Error, Result};
use crate::groups::automorphism_group;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Propelinear,
    Nonpropelinear,
    Undecided,
}

#[derive(Clone, Debug, Default)]
pub struct DecideOptions {
    pub deadline: Option<Instant>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    /// Short name of the route that settled (or failed to settle) the question.
    pub method: &'static str,
    pub assignment: Option<PropelinearAssignment>,
    pub assignment_check: Option<AssignmentCheck>,
    pub certificate: Option<NonpropelinearityCertificate>,
    /// True when a deadline cut the search short.
    pub partial: bool,
    pub notes: Vec<String>,
}

impl Decision {
    fn undecided(method: &'static str, partial: bool, notes: Vec<String>) -> Self {
        Decision { verdict: Verdict::Undecided, method, assignment: None, assignment_check: None, certificate: None, partial, notes }
    }

    fn nonpropelinear(method: &'static str, certificate: NonpropelinearityCertificate, notes: Vec<String>) -> Self {
        Decision {
            verdict: Verdict::Nonpropelinear,
            method,
            assignment: None,
            assignment_check: None,
            certificate: Some(certificate),
            partial: false,
            notes,
        }
    }

    fn propelinear(method: &'static str, code: &ExplicitCode, pa: PropelinearAssignment, seed: u64) -> Result<Self> {
        let check = verify_propelinear_assignment(code, &pa, true, seed)?;
        if !check.valid {
            return Err(Error::InvariantViolated(format!("{method} produced an assignment failing {:?}", check.failure)));
        }
        Ok(Decision {
            verdict: Verdict::Propelinear,
            method,
            assignment: Some(pa),
            assignment_check: Some(check),
            certificate: None,
            partial: false,
            notes: Vec::new(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdict": self.verdict,
            "method": self.method,
            "partial": self.partial,
            "assignment": self.assignment.as_ref().map(|pa| json!({
                "distinct_perms": pa.distinct_perms().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            })),
            "assignment_check": self.assignment_check,
            "certificate": self.certificate,
            "notes": self.notes,
        })
    }
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() > d)
}

/// Decides an explicit code (length at most 64).
pub fn decide_explicit(code: &Arc<ExplicitCode>, label: &str, opts: &DecideOptions) -> Result<Decision> {
    if let Some(pa) = translation_witness(code)? {
        return Decision::propelinear("translation", code, pa, opts.seed);
    }
    let mut notes = Vec::new();
    let mut partial = false;
    match automorphism_group(code) {
        Ok(aut) if !aut.transitive => {
            let premise = Premise {
                name: "not-transitive",
                holds: true,
                operands: json!({ "orbit_of_zero": aut.order() / aut.sym.order() }),
                recheck: format!("perfcode invariants {label}"),
            };
            let cert = NonpropelinearityCertificate {
                kind: CertificateKind::ExhaustiveRegularSearch,
                code: label.to_string(),
                witness: None,
                premises: vec![premise],
            };
            return Ok(Decision::nonpropelinear("transitivity", cert, notes));
        }
        Ok(aut) => {
            let search = regular_subgroup_search(&aut, opts.deadline)?;
            if let Some(pa) = search.found {
                return Decision::propelinear(search.strategy, code, pa, opts.seed);
            }
            if search.complete {
                let premise = Premise {
                    name: "no-regular-subgroup",
                    holds: true,
                    operands: json!({
                        "aut_order": aut.order(),
                        "code_size": code.cardinality(),
                        "strategy": search.strategy,
                        "visited": search.visited,
                    }),
                    recheck: format!("perfcode propelinear {label}"),
                };
                let cert = NonpropelinearityCertificate {
                    kind: CertificateKind::ExhaustiveRegularSearch,
                    code: label.to_string(),
                    witness: None,
                    premises: vec![premise],
                };
                return Ok(Decision::nonpropelinear(search.strategy, cert, notes));
            }
            partial = true;
            notes.push(format!("{} stopped at the deadline after {} nodes", search.strategy, search.visited));
        }
        Err(Error::TooLarge { size, .. }) => notes.push(format!("automorphism group of order {size} exceeds the element cap")),
        Err(e) => return Err(e),
    }
    if past(opts.deadline) {
        return Ok(Decision::undecided("deadline", true, notes));
    }
    if let Some(x) = incorrect_inverse_words(code)?.first() {
        return Ok(Decision::nonpropelinear("incorrect-inverse", incorrect_inverse_certificate(code, label, x)?, notes));
    }
    notes.push("no codeword has an incorrect inverse".into());
    Ok(Decision::undecided("incorrect-inverse", partial, notes))
}

fn factor_summary(expr: &DescriptorExpr) -> Result<FactorSummary> {
    match expr.hamming_r() {
        Some(r) => Ok(FactorSummary::hamming(r)),
        None => FactorSummary::from_code(expr.to_string(), &expr.build()?),
    }
}

fn explicit_factor(expr: &DescriptorExpr) -> Result<Option<Arc<ExplicitCode>>> {
    let code = expr.build()?;
    Ok(match code {
        Code::Explicit(e) if e.len() <= 64 => Some(e),
        _ => None,
    })
}

/// Tries every incorrect-inverse word of `c` against the series; the first success wins.
fn try_series(c_expr: &DescriptorExpr, series: &MollardSeries, notes: &mut Vec<String>) -> Result<Option<NonpropelinearityCertificate>> {
    let Some(c) = explicit_factor(c_expr)? else {
        notes.push(format!("{c_expr} is too large to search for an incorrect inverse"));
        return Ok(None);
    };
    let words = incorrect_inverse_words(&c)?;
    if words.is_empty() {
        notes.push(format!("no codeword of {c_expr} has an incorrect inverse"));
        return Ok(None);
    }
    let summary = FactorSummary::from_code(c_expr.to_string(), &Code::Explicit(Arc::clone(&c)))?;
    let mut failed = std::collections::BTreeSet::new();
    for x in &words {
        let premise = incorrect_inverse_premise(&c, &c_expr.to_string(), x)?;
        match mollard_certificate(&summary, x, premise, series) {
            Ok(cert) => return Ok(Some(cert)),
            Err(Error::ConditionFailed { name, .. }) => failed.insert(name),
            Err(e) => return Err(e),
        };
    }
    let names: Vec<&str> = failed.into_iter().collect();
    notes.push(format!("no incorrect-inverse word of {c_expr} passes; failing conditions: {}", names.join(", ")));
    Ok(None)
}

/// The Mollard certificate routes that apply to the shape of `expr`, in the order tried.
fn mollard_routes(expr: &DescriptorExpr) -> Result<Vec<(DescriptorExpr, MollardSeries)>> {
    let DescriptorExpr::Mollard(left, right) = expr else { return Ok(Vec::new()) };
    let mut routes = Vec::new();
    if let (Some(r), DescriptorExpr::Mollard(c, d)) = (right.hamming_r(), left.as_ref()) {
        routes.push((c.as_ref().clone(), MollardSeries::Nested { d: factor_summary(d)?, r }));
    }
    match right.hamming_r() {
        Some(r) => routes.push((left.as_ref().clone(), MollardSeries::Hamming { r })),
        None => routes.push((left.as_ref().clone(), MollardSeries::Factor { d: factor_summary(right)? })),
    }
    Ok(routes)
}

/// Decides the code described by `expr`, preferring a Mollard certificate when the shape fits.
pub fn decide(expr: &DescriptorExpr, opts: &DecideOptions) -> Result<Decision> {
    let label = expr.to_string();
    let code = expr.build()?;
    let mut notes = Vec::new();
    if let Code::Explicit(e) = &code {
        if let Some(pa) = translation_witness(e)? {
            return Decision::propelinear("translation", e, pa, opts.seed);
        }
    }
    for (c, series) in mollard_routes(expr)? {
        if let Some(cert) = try_series(&c, &series, &mut notes)? {
            let method = cert.kind.as_str();
            return Ok(Decision::nonpropelinear(method, cert, notes));
        }
    }
    match &code {
        Code::Explicit(e) if e.len() <= 64 => {
            let mut d = decide_explicit(e, &label, opts)?;
            notes.append(&mut d.notes);
            d.notes = notes;
            Ok(d)
        }
        _ => {
            notes.push(format!("{label} is only available as a membership oracle"));
            Ok(Decision::undecided("none", false, notes))
        }
    }
}
