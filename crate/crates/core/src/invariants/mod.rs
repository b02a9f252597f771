//! Code invariants: rank, kernel, dual zero set, triple systems and μ.

pub mod kernel;
pub mod linalg;
pub mod mu;
pub mod report;
pub mod span;
pub mod sts;

pub use kernel::{explicit_kernel, kernel, kernel_coset_representatives, translation_preserves, Kernel, KernelOracle};
pub use linalg::{rank_of, Span};
pub use mu::{descriptor_mu, mollard_mu_formula, mu, mu_with_kernel, MuMultiset, MuProfile};
pub use report::{invariant_report, mu_inequivalence, InvariantReport, InvariantTriple, ReportOptions, BRUTE_FORCE_MAX_N, GROUP_REPORT_MAX_N};
pub use span::{
    code_span, descriptor_rank_kernel, dual_zero_set, mollard_rank_kernel_formula, mollard_zero_set_formula, rank,
    Measured, Provenance, SampleOptions,
};
pub use sts::{classify_mollard_triple, sts_extract, sts_mollard_decompose, MollardDecomposition, MollardTripleClass, TripleSystem};
