//! Plain-text code format.
//!
//! ```text
//! # optional comments
//! n=7 k=16
//! 0000000
//! 0001111
//! ...
//! ```
//!
//! Words are written one per line, coordinate 1 leftmost, in lexicographic order.

use std::fmt::Write as _;

use super::code::ExplicitCode;
use super::word::Word;
use crate::error::{Error, Result};

/// A parsed code plus the number of duplicate lines that were dropped.
#[derive(Debug)]
pub struct ParsedCode {
    pub code: ExplicitCode,
    pub duplicates: usize,
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let err = |msg: &str| Error::Parse { line: lineno, msg: msg.to_string() };
    let mut n = None;
    let mut k = None;
    for field in line.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| err("expected `n=<int> k=<int>`"))?;
        let value: usize = value.parse().map_err(|_| err("header value is not an integer"))?;
        match key {
            "n" => n = Some(value),
            "k" => k = Some(value),
            _ => return Err(err("unknown header key")),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok((n, k)),
        _ => Err(err("expected `n=<int> k=<int>`")),
    }
}

pub fn parse_code_text(text: &str) -> Result<ParsedCode> {
    let mut header = None;
    let mut words = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((n, _)) = header else {
            header = Some(parse_header(line, lineno)?);
            continue;
        };
        if line.len() != n {
            return Err(Error::Parse { line: lineno, msg: format!("word has length {}, expected {n}", line.len()) });
        }
        let w = Word::from_bit_str(line).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: lineno, msg },
            other => other,
        })?;
        words.push(w);
    }
    let (n, k) = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    if words.len() != k {
        return Err(Error::Parse { line: 0, msg: format!("header announces {k} words, found {}", words.len()) });
    }
    let (code, duplicates) = ExplicitCode::new_counting_duplicates(n, words)?;
    Ok(ParsedCode { code, duplicates })
}

pub fn write_code_text(code: &ExplicitCode) -> String {
    let mut out = String::with_capacity(code.cardinality() * (code.len() + 1) + 32);
    writeln!(out, "n={} k={}", code.len(), code.cardinality()).unwrap();
    for w in code.words() {
        out.push_str(&w.to_bit_string());
        out.push('\n');
    }
    out
}
