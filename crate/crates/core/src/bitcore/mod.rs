//! Binary words and the two code representations.

mod code;
mod io;
mod word;

pub use code::{
    hamming_syndrome, is_perfect, is_perfect_with, membership, min_distance, perfect_cardinality, Code,
    Descriptor, ExplicitCode, OracleCode, PerfectMode, PerfectVerdict, DEFAULT_PERFECT_SAMPLES,
    ENUMERATION_CAP, EXHAUSTIVE_PERFECT_MAX_N,
};
pub use io::{parse_code_text, write_code_text, ParsedCode};
pub use word::{distance, weight, Word, MAX_LENGTH};
