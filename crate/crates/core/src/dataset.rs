//! Reference data for the transitive nonpropelinear perfect code of length 15 and the
//! invariant rows of four propelinear transitive codes of the same length.
//!
//! The tables list supports only; every support is lifted to its characteristic vector
//! of length 15.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::bitcore::{is_perfect, min_distance, parse_code_text, write_code_text, Code, ExplicitCode, ParsedCode, PerfectMode, Word};
use crate::error::{Error, Result};
use crate::groups::Permutation;
use crate::invariants::{explicit_kernel, sts_extract, Span, TripleSystem};

pub const CODE_4918_LEN: usize = 15;

/// The 35 weight-3 supports of code 4918. The first seven form the subsystem of order 7.
pub const STS_4918: [[usize; 3]; 35] = [
    [1, 3, 7], [3, 6, 8], [1, 4, 8], [1, 2, 6], [2, 3, 4], [4, 6, 7], [2, 7, 8],
    [6, 11, 12], [1, 11, 14], [4, 10, 11], [3, 10, 12], [1, 10, 13], [2, 9, 12], [8, 9, 11],
    [1, 5, 9], [6, 10, 14], [5, 8, 14], [6, 9, 13], [3, 13, 15], [2, 5, 10], [3, 5, 11],
    [5, 7, 13], [7, 9, 10], [1, 12, 15], [5, 6, 15], [7, 12, 14], [4, 13, 14], [7, 11, 15],
    [8, 10, 15], [2, 14, 15], [4, 5, 12], [8, 12, 13], [3, 9, 14], [2, 11, 13], [4, 9, 15],
];

/// Coordinates of the order-7 subsystem.
pub const SUBSYSTEM_4918: [usize; 7] = [1, 2, 3, 4, 6, 7, 8];

/// Supports of a kernel basis.
pub const KERNEL_BASE_4918: [&[usize]; 6] = [
    &[9, 11, 12, 13],
    &[4, 6, 7, 8, 11, 12, 14, 15],
    &[5, 12, 13, 14],
    &[2, 3, 6, 7, 11, 13, 14, 15],
    &[10, 12, 13, 15],
    &[1, 6, 7, 12, 13],
];

/// Supports of the nonzero kernel coset representatives.
pub const COSET_REPS_4918: [&[usize]; 31] = [
    &[1, 12, 15], &[4, 6, 7], &[2, 4, 7, 10, 12], &[5, 6, 8, 9],
    &[4, 9, 15], &[4, 6, 14, 15], &[2, 11, 13], &[1, 4, 8],
    &[3, 9, 14], &[5, 7, 13], &[1, 2, 6], &[3, 5, 7, 12],
    &[4, 13, 14], &[1, 3, 7], &[2, 6, 8, 13, 15], &[2, 4, 9, 13],
    &[2, 8, 10, 11], &[8, 9, 11], &[3, 6, 8], &[6, 9, 13],
    &[5, 7, 8, 15], &[1, 5, 9], &[2, 5, 6, 13], &[6, 10, 14],
    &[2, 5, 10], &[3, 4, 5, 13], &[3, 13, 15], &[7, 11, 15],
    &[2, 7, 8], &[6, 8, 12, 15], &[3, 5, 8, 10],
];

/// The nontrivial symmetries of code 4918, in cycle notation.
pub const SYM_4918: [&str; 3] = [
    "(5,15)(9,12)(10,14)(11,13)",
    "(5,10)(9,13)(11,12)(14,15)",
    "(5,14)(9,11)(10,15)(12,13)",
];

/// Invariants of a transitive perfect code of length 15.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table4Row {
    pub id: u32,
    pub rank: usize,
    pub kernel_dim: usize,
    pub sym_order: usize,
    pub mu: &'static str,
    pub aut_sts_order: usize,
    pub sts_rank: usize,
}

pub const TABLE4: [Table4Row; 5] = [
    Table4Row { id: 51, rank: 13, kernel_dim: 7, sym_order: 8, mu: "1^13 3^1 5^1", aut_sts_order: 8, sts_rank: 13 },
    Table4Row { id: 694, rank: 13, kernel_dim: 8, sym_order: 32, mu: "1^8 3^5 5^2", aut_sts_order: 32, sts_rank: 13 },
    Table4Row { id: 724, rank: 13, kernel_dim: 8, sym_order: 32, mu: "1^13 3^1 5^1", aut_sts_order: 96, sts_rank: 13 },
    Table4Row { id: 771, rank: 13, kernel_dim: 8, sym_order: 96, mu: "1^12 3^3", aut_sts_order: 288, sts_rank: 13 },
    Table4Row { id: 4918, rank: 14, kernel_dim: 6, sym_order: 4, mu: "0^15", aut_sts_order: 4, sts_rank: 14 },
];

pub fn reference_row(id: u32) -> Result<&'static Table4Row> {
    TABLE4.iter().find(|r| r.id == id).ok_or(Error::UnknownCodeId(id))
}

pub fn sts_4918() -> TripleSystem {
    TripleSystem::new(CODE_4918_LEN, STS_4918).expect("static triples are valid")
}

pub fn sym_4918() -> Vec<Permutation> {
    SYM_4918.iter().map(|c| Permutation::parse_cycles(CODE_4918_LEN, c).expect("static cycles are valid")).collect()
}

fn violated(msg: String) -> Error {
    Error::InvariantViolated(msg)
}

/// Assembles `Ker ∪ ⋃ (rep + Ker)` and checks it against the expected structure:
/// perfect, minimum distance 3, the given triple system, rank and kernel dimension.
pub fn build_code_from_tables(
    kernel_base: &[&[usize]],
    coset_reps: &[&[usize]],
    expected_sts: &TripleSystem,
    expected_rank: usize,
) -> Result<ExplicitCode> {
    let n = expected_sts.len();
    let base: Vec<Word> = kernel_base.iter().map(|s| Word::from_support(n, s)).collect::<Result<_>>()?;
    let span = Span::from_words(n, &base);
    if span.dim() != base.len() {
        return Err(violated(format!("kernel base has rank {} instead of {}", span.dim(), base.len())));
    }
    let kernel = span.elements();
    let mut reps = vec![Word::zero(n)];
    for s in coset_reps {
        reps.push(Word::from_support(n, s)?);
    }
    let words: Vec<Word> = reps.iter().flat_map(|r| kernel.iter().map(move |k| r + k)).collect();
    let expected_size = words.len();
    let code = ExplicitCode::new(n, words)?;
    if code.cardinality() != expected_size {
        return Err(violated(format!("cosets overlap: {} distinct words instead of {expected_size}", code.cardinality())));
    }
    let wrapped = Code::from(code.clone());
    let verdict = is_perfect(&wrapped);
    if !verdict.perfect || verdict.mode != PerfectMode::Exhaustive {
        return Err(violated("code is not perfect".into()));
    }
    let d = min_distance(&code)?;
    if d != 3 {
        return Err(violated(format!("minimum distance {d} instead of 3")));
    }
    if &sts_extract(&wrapped) != expected_sts {
        return Err(violated("weight-3 codewords differ from the expected triple system".into()));
    }
    let rank = Span::from_words(n, code.words()).dim();
    if rank != expected_rank {
        return Err(violated(format!("rank {rank} instead of {expected_rank}")));
    }
    let ker = explicit_kernel(&code)?;
    if ker.cardinality() != kernel.len() {
        return Err(violated(format!("kernel has {} words instead of {}", ker.cardinality(), kernel.len())));
    }
    Ok(code)
}

pub fn build_code_4918() -> Result<ExplicitCode> {
    build_code_from_tables(&KERNEL_BASE_4918, &COSET_REPS_4918, &sts_4918(), reference_row(4918)?.rank)
}

/// Built-in explicit codes by id. Only 4918 has codewords available.
pub fn builtin_code(id: u32) -> Result<Arc<ExplicitCode>> {
    static CODE: OnceLock<Arc<ExplicitCode>> = OnceLock::new();
    match id {
        4918 => {
            if let Some(c) = CODE.get() {
                return Ok(Arc::clone(c));
            }
            let built = Arc::new(build_code_4918()?);
            Ok(Arc::clone(CODE.get_or_init(|| built)))
        }
        51 | 694 | 724 | 771 => Err(Error::Precondition(format!(
            "code {id} has reference invariants only; supply its codewords with file:<path>"
        ))),
        _ => Err(Error::UnknownCodeId(id)),
    }
}

pub fn load_code(path: impl AsRef<Path>) -> Result<ParsedCode> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_code_text(&text)
}

pub fn save_code(code: &ExplicitCode, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_code_text(code)).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

/// File names and contents of the exported reference data.
pub fn export_files() -> Result<Vec<(&'static str, String)>> {
    let code = builtin_code(4918)?;
    let table = serde_json::to_string_pretty(&TABLE4).expect("rows serialize") + "\n";
    Ok(vec![
        ("code4918.code", write_code_text(&code)),
        ("sts4918.sts", sts_4918().to_text()),
        ("table4.json", table),
    ])
}

pub fn export_data(dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.display().to_string(), msg: e.to_string() })?;
    for (name, contents) in export_files()? {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
    }
    Ok(())
}
