//! Reproduction suite for the length-15 code #4918 and its Mollard extensions.
//!
//! Each check recomputes its numbers from scratch and compares them with the reference
//! data in [`crate::dataset`] or with an independent route to the same value.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bitcore::{is_perfect, min_distance, Code, ExplicitCode, PerfectMode, Word};
use crate::construct::{enumerate_descriptor, hamming, mollard, DescriptorExpr, MollardShape};
use crate::dataset::{build_code_4918, reference_row, sts_4918, sym_4918, SUBSYSTEM_4918, TABLE4};
use crate::error::Result;
use crate::groups::{
    automorphism_group, preserves, rotation_group, rotations_at, sts_automorphisms, symmetry_group, transitivity_witnesses,
    Permutation,
};
use crate::invariants::{
    code_span, descriptor_rank_kernel, dual_zero_set, explicit_kernel, invariant_report, kernel_coset_representatives,
    mollard_mu_formula, mollard_rank_kernel_formula, mollard_zero_set_formula, mu, sts_extract, InvariantTriple, MuMultiset,
    MuProfile, Provenance, ReportOptions, SampleOptions, Span,
};
use crate::propelin::{
    incorrect_inverse, incorrect_inverse_certificate, incorrect_inverse_premise, incorrect_inverse_sym_check, mollard_certificate,
    mu_orbit_separation, regular_subgroup_search, translation_witness, verify_propelinear_assignment, FactorSummary, MollardSeries,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:>2} {}: {}", self.status, self.id, self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Skip every check that enumerates permutation groups.
    pub budget_low: bool,
    pub seed: u64,
    /// Deadline for the regular-subgroup search.
    pub search_time: Duration,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { budget_low: false, seed: 0x5eed, search_time: Duration::from_secs(600) }
    }
}

/// A check: id, name, time bound, whether it needs group enumeration, body.
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub time_bound: Option<Duration>,
    pub uses_groups: bool,
    run: fn(&Ctx) -> std::result::Result<String, String>,
}

struct Ctx {
    opts: SuiteOptions,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn code_4918() -> std::result::Result<Arc<ExplicitCode>, String> {
    lift(crate::dataset::builtin_code(4918))
}

fn support_234() -> Word {
    Word::from_support(15, &[2, 3, 4]).unwrap()
}

fn check_reconstruction(_: &Ctx) -> std::result::Result<String, String> {
    let c = lift(build_code_4918())?;
    ensure(c.cardinality() == 2048, || format!("{} codewords", c.cardinality()))?;
    let code = Code::from(c.clone());
    let v = is_perfect(&code);
    ensure(v.perfect && v.mode == PerfectMode::Exhaustive, || format!("perfect check {v:?}"))?;
    let d = lift(min_distance(&c))?;
    ensure(d == 3, || format!("min distance {d}"))?;
    let k = lift(explicit_kernel(&c))?;
    let dk = lift(min_distance(&k))?;
    ensure(dk == 4, || format!("kernel min distance {dk}"))?;
    Ok("2048 words, perfect (exhaustive 2^15 sweep), d = 3, d(Ker) = 4".into())
}

fn check_reference_row(_: &Ctx) -> std::result::Result<String, String> {
    let c = code_4918()?;
    let r = lift(invariant_report("builtin:4918", &Code::Explicit(c), &ReportOptions::default()))?;
    let row = lift(reference_row(4918))?;
    let got = (r.rank.value, r.kernel_dim.value, r.sym_order, r.mu_multiset.as_str(), r.aut_sts_order, r.sts_rank);
    let want = (row.rank, row.kernel_dim, Some(row.sym_order), row.mu, Some(row.aut_sts_order), Some(row.sts_rank));
    ensure(got == want, || format!("computed {got:?}, reference {want:?}"))?;
    Ok(format!("rank {}, ker {}, |Sym| {}, mu {}, |Aut(STS)| {}, STS rank {}", want.0, want.1, row.sym_order, row.mu, row.aut_sts_order, row.sts_rank))
}

fn check_sts(_: &Ctx) -> std::result::Result<String, String> {
    let c = code_4918()?;
    let ts = sts_extract(&Code::Explicit(c));
    ensure(ts == sts_4918(), || "triple system differs from the reference list".into())?;
    let g = lift(sts_automorphisms(&ts))?;
    let mut want = sym_4918();
    want.push(Permutation::identity(15));
    want.sort_unstable();
    ensure(g.elements() == want.as_slice(), || format!("Aut(STS) = {:?}", g.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>()))?;
    Ok(format!("35 triples match; Aut(STS) = {{id, {}}}", sym_4918().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
}

fn check_incorrect_inverse(_: &Ctx) -> std::result::Result<String, String> {
    let c = code_4918()?;
    let x = support_234();
    let rx = lift(rotations_at(&c, &x))?;
    ensure(rx.len() == 4, || format!("|R_x| = {}", rx.len()))?;
    for p in &rx {
        ensure(p.order() > 2 && p.stabilizes(&[2, 3, 4]), || format!("{p} has order {} or moves {{2,3,4}}", p.order()))?;
    }
    let sym = lift(symmetry_group(&c))?;
    let coset: BTreeSet<Permutation> = sym.elements().iter().map(|s| rx[0].compose(s)).collect();
    ensure(coset == rx.iter().cloned().collect(), || "R_x is not a single Sym-coset".into())?;
    ensure(lift(incorrect_inverse(&c, &x))?, || "incorrect_inverse returned false".into())?;
    ensure(lift(incorrect_inverse_sym_check(&c, &x))?, || "Sym(C) has odd order or moves {2,3,4}".into())?;
    Ok(format!("R_x = {{{}}}, all of order 4", rx.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
}

fn check_transitivity(_: &Ctx) -> std::result::Result<String, String> {
    let c = code_4918()?;
    let w = lift(transitivity_witnesses(&c))?;
    ensure(w.len() == 32, || format!("{} kernel cosets", w.len()))?;
    let missing = w.iter().filter(|w| w.rotation.is_none()).count();
    ensure(missing == 0, || format!("{missing} coset representatives unreachable"))?;
    Ok("all 32 kernel-coset representatives have nonempty R_x".into())
}

fn check_regular_search(ctx: &Ctx) -> std::result::Result<String, String> {
    let c = code_4918()?;
    let aut = lift(automorphism_group(&c))?;
    ensure(aut.order() == 8192, || format!("|Aut| = {}", aut.order()))?;
    let start = Instant::now();
    let r = lift(regular_subgroup_search(&aut, Some(start + ctx.opts.search_time)))?;
    ensure(r.found.is_none(), || "a regular subgroup was found".into())?;
    if r.complete {
        return Ok(format!("no regular subgroup of order 2048 in Aut (order 8192); search complete ({}, {} nodes)", r.strategy, r.visited));
    }
    // the search ran out of time: the incorrect-inverse route must still decide
    lift(incorrect_inverse_certificate(&c, "builtin:4918", &support_234()))?;
    Ok("search hit the deadline; incorrect-inverse certificate at {2,3,4} yields nonpropelinear".into())
}

fn check_linear_control(ctx: &Ctx) -> std::result::Result<String, String> {
    let expr = DescriptorExpr::parse("mollard(hamming:3,p1)").unwrap();
    let descriptor = lift(expr.to_descriptor())?;
    let c = Arc::new(lift(enumerate_descriptor(&descriptor))?);
    let pa = lift(translation_witness(&c))?.ok_or("kernel is smaller than the code")?;
    let check = lift(verify_propelinear_assignment(&c, &pa, true, ctx.opts.seed))?;
    ensure(check.valid && check.exhaustive, || format!("assignment check {check:?}"))?;
    let rank = Span::from_words(15, c.words()).dim();
    let ker = lift(explicit_kernel(&c))?.cardinality().trailing_zeros() as usize;
    let formula = lift(descriptor_rank_kernel(&descriptor))?;
    ensure((rank, ker) == (11, 11) && formula == (11, 11), || format!("exhaustive {:?}, formula {formula:?}", (rank, ker)))?;
    Ok("translation witness passes conditions (i)-(iii) exhaustively; rank = ker = 11 by enumeration and formula".into())
}

fn check_mu_formula(_: &Ctx) -> std::result::Result<String, String> {
    let c4918 = Code::Explicit(code_4918()?);
    let h7 = lift(hamming(3))?;
    let cases = [("M(#4918,P1)", c4918.clone(), lift(hamming(1))?), ("M(H7,H7)", h7.clone(), h7)];
    let mut out = Vec::new();
    for (name, c, d) in cases {
        let m = lift(mollard(&c, &d))?;
        let brute = lift(mu(&m))?;
        let formula = mollard_mu_formula(&lift(mu(&c))?, &lift(mu(&d))?);
        ensure(brute == formula, || format!("{name}: brute force {} vs formula {}", brute.multiset(), formula.multiset()))?;
        out.push(format!("{name} {}", brute.multiset()));
    }
    Ok(format!("brute force equals formula at every coordinate: {}", out.join("; ")))
}

fn check_dual_zero_set(ctx: &Ctx) -> std::result::Result<String, String> {
    let c = Code::Explicit(code_4918()?);
    let m = lift(mollard(&c, &lift(hamming(1))?))?;
    let opts = SampleOptions { seed: ctx.opts.seed, ..SampleOptions::default() };
    let measured = lift(dual_zero_set(&m, &opts))?;
    ensure(measured.provenance == Provenance::SampledExact, || format!("provenance {:?}", measured.provenance))?;
    let zc = lift(dual_zero_set(&c, &opts))?.value;
    let formula = mollard_zero_set_formula(&zc, &BTreeSet::new(), 15, 1);
    let shape = MollardShape::new(15, 1);
    let want: BTreeSet<usize> = SUBSYSTEM_4918.iter().map(|&r| shape.index(r, 0)).collect();
    ensure(measured.value == formula && formula == want, || format!("sampled {:?}, formula {formula:?}", measured.value))?;
    Ok(format!("I = {{(r,0): r in {SUBSYSTEM_4918:?}}} = coordinates {want:?}, sampled-exact"))
}

fn check_mollard_certificates(_: &Ctx) -> std::result::Result<String, String> {
    let c = code_4918()?;
    let x = support_234();
    let summary = lift(FactorSummary::from_code("builtin:4918", &Code::Explicit(c.clone())))?;
    let mut out = Vec::new();
    for r in 1..=3u32 {
        let premise = lift(incorrect_inverse_premise(&c, "builtin:4918", &x))?;
        let cert = lift(mollard_certificate(&summary, &x, premise, &MollardSeries::Hamming { r }))?;
        let names: Vec<&str> = cert.premises.iter().map(|p| p.name).collect();
        ensure(names.contains(&"support-in-zero-set") && names.contains(&"column-mu-bound"), || format!("premises {names:?}"))?;
        let m = (1usize << r) - 1;
        let profile = mollard_mu_formula(&summary.mu, &FactorSummary::hamming(r).mu);
        let sep = lift(mu_orbit_separation(&profile, &MollardShape::new(15, m)))?;
        ensure(sep.row0_uniquely_maximal, || format!("r = {r}: row 0 not uniquely maximal {sep:?}"))?;
        out.push(format!("{} (row-0 mu {:?})", cert.code, sep.row0_values));
    }
    for row in TABLE4.iter().filter(|r| r.id != 4918) {
        let d = FactorSummary::from_mu(format!("file:{}.code", row.id), lift(MuMultiset::parse(row.mu))?.arbitrary_profile());
        let premise = lift(incorrect_inverse_premise(&c, "builtin:4918", &x))?;
        lift(mollard_certificate(&summary, &x, premise, &MollardSeries::Factor { d }))?;
    }
    out.push("factor-series certificates for the four mu profiles of length-15 propelinear codes".into());
    Ok(out.join("; "))
}

fn triple_of(rank: usize, kernel_dim: usize, mu: MuMultiset) -> InvariantTriple {
    InvariantTriple { rank, kernel_dim, mu }
}

fn check_ledger(_: &Ctx) -> std::result::Result<String, String> {
    let rows: Vec<InvariantTriple> =
        TABLE4.iter().map(|r| Ok(triple_of(r.rank, r.kernel_dim, lift(MuMultiset::parse(r.mu))?))).collect::<std::result::Result<_, String>>()?;
    let distinct: BTreeSet<&InvariantTriple> = rows.iter().collect();
    ensure(distinct.len() == 5, || "two reference rows share (rank, ker, mu)".into())?;

    let c = lift(reference_row(4918))?;
    let mu_c = lift(MuMultiset::parse(c.mu))?.arbitrary_profile();
    let mut factors: Vec<(String, usize, usize, MuProfile)> = TABLE4
        .iter()
        .filter(|r| r.id != 4918)
        .map(|r| Ok((format!("#{}", r.id), r.rank, r.kernel_dim, lift(MuMultiset::parse(r.mu))?.arbitrary_profile())))
        .collect::<std::result::Result<_, String>>()?;
    factors.push(("H15".into(), 11, 11, FactorSummary::hamming(4).mu));
    let mut ledger = BTreeSet::new();
    let mut lines = Vec::new();
    for (name, rank, ker, mu_d) in &factors {
        let (rank_m, ker_m) = mollard_rank_kernel_formula((c.rank, c.kernel_dim), (*rank, *ker), 15, 15);
        let t = triple_of(rank_m, ker_m, mollard_mu_formula(&mu_c, mu_d).multiset());
        lines.push(format!("M(#4918,{name}): {t}"));
        ledger.insert(t);
    }
    ensure(ledger.len() == 5, || format!("length-255 ledgers collide: {lines:?}"))?;
    Ok(format!("5 distinct reference triples; 5 distinct length-255 ledgers [{}]", lines.join(" | ")))
}

fn check_group_laws(_: &Ctx) -> std::result::Result<String, String> {
    let mut out = Vec::new();
    for (name, c) in [("#4918", code_4918()?), ("H7", Arc::clone(lift(hamming(3))?.as_explicit().unwrap()))] {
        let sym = lift(symmetry_group(&c))?;
        let r = lift(rotation_group(&c))?;
        let kernel = lift(explicit_kernel(&c))?;
        ensure(sym.is_subgroup_of(&r), || format!("{name}: Sym not inside R"))?;
        ensure(r.elements().iter().all(|p| preserves(p, &kernel)), || format!("{name}: R does not fix Ker"))?;
        let span = lift(code_span(&Code::Explicit(c.clone()), &SampleOptions::default()))?.value;
        let dual = Span::from_words(c.len(), &span.dual_basis());
        ensure(
            r.elements().iter().all(|p| span.dual_basis().iter().all(|v| dual.contains(&p.apply_word(v)))),
            || format!("{name}: R does not fix the dual"),
        )?;
        for x in kernel_coset_representatives(&c, &kernel) {
            let rx = lift(rotations_at(&c, &x))?;
            if let Some(p0) = rx.first() {
                let mut coset: Vec<Permutation> = sym.elements().iter().map(|s| p0.compose(s)).collect();
                coset.sort_unstable();
                ensure(coset == rx, || format!("{name}: R_x at {x} is not p0 Sym"))?;
            }
        }
        let zero = span.dual_zero_set().into_iter().collect::<Vec<_>>();
        ensure(r.elements().iter().all(|p| p.stabilizes(&zero)), || format!("{name}: R moves I(C)"))?;
        out.push(format!("{name}: |Sym| {} <= |R| {}, I(C) = {zero:?}", sym.order(), r.order()));
    }
    Ok(out.join("; "))
}

pub fn checks() -> Vec<Check> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Check { id: 1, name: "code-4918-reconstruction", time_bound: secs(5), uses_groups: false, run: check_reconstruction },
        Check { id: 2, name: "reference-row-4918", time_bound: secs(60), uses_groups: true, run: check_reference_row },
        Check { id: 3, name: "triple-system-and-its-group", time_bound: None, uses_groups: true, run: check_sts },
        Check { id: 4, name: "incorrect-inverse-at-234", time_bound: secs(60), uses_groups: true, run: check_incorrect_inverse },
        Check { id: 5, name: "transitivity-4918", time_bound: None, uses_groups: true, run: check_transitivity },
        Check { id: 6, name: "no-regular-subgroup-4918", time_bound: secs(600), uses_groups: true, run: check_regular_search },
        Check { id: 7, name: "linear-positive-control", time_bound: None, uses_groups: false, run: check_linear_control },
        Check { id: 8, name: "mu-formula-vs-brute-force", time_bound: secs(30), uses_groups: false, run: check_mu_formula },
        Check { id: 9, name: "dual-zero-set-sampled", time_bound: None, uses_groups: false, run: check_dual_zero_set },
        Check { id: 10, name: "mollard-certificates", time_bound: None, uses_groups: true, run: check_mollard_certificates },
        Check { id: 11, name: "invariant-ledger-255", time_bound: None, uses_groups: false, run: check_ledger },
        Check { id: 12, name: "group-law-identities", time_bound: None, uses_groups: true, run: check_group_laws },
    ]
}

pub fn run_check(check: &Check, opts: &SuiteOptions) -> CheckResult {
    if opts.budget_low && check.uses_groups {
        return CheckResult { id: check.id, name: check.name, status: Status::Skipped, detail: "skipped (budget-low)".into(), seconds: 0.0 };
    }
    let ctx = Ctx { opts: opts.clone() };
    let start = Instant::now();
    let outcome = (check.run)(&ctx);
    let elapsed = start.elapsed();
    let (status, detail) = match outcome {
        Ok(d) => match check.time_bound {
            Some(b) if elapsed > b => (Status::Fail, format!("{d} (took {:.1} s, bound {} s)", elapsed.as_secs_f64(), b.as_secs())),
            _ => (Status::Pass, d),
        },
        Err(e) => (Status::Fail, e),
    };
    CheckResult { id: check.id, name: check.name, status, detail, seconds: elapsed.as_secs_f64() }
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    checks().iter().map(|c| run_check(c, opts)).collect()
}
