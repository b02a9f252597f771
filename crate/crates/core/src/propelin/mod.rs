//! Propelinear structures, regular subgroups of `Aut(C)` and nonpropelinearity certificates.

pub mod assignment;
pub mod certificate;
pub mod decide;
pub mod regular;

pub use assignment::{verify_propelinear_assignment, AssignmentCheck, AssignmentFailure, Condition, PropelinearAssignment};
pub use certificate::{
    incorrect_inverse, incorrect_inverse_certificate, incorrect_inverse_premise, incorrect_inverse_sym_check, incorrect_inverse_words,
    mollard_certificate, mu_orbit_separation, sym_consistent_with_incorrect_inverse, CertificateKind, FactorSummary, MollardSeries,
    NonpropelinearityCertificate, Premise, SeparationReport,
};
pub use decide::{decide, decide_explicit, DecideOptions, Decision, Verdict};
pub use regular::{regular_subgroup_search, regular_subgroup_search_with, Strategy, translation_witness, AutTable, RegularSearch};
