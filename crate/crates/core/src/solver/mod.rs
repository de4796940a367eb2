//! Satisfiability and validity: the closure pipeline, a brute-force oracle,
//! and verdicts whose SAT witnesses are always re-checked.

mod agreement;
mod brute;
mod pipeline;
mod verdict;

pub use agreement::{compare_engines, formula_corpus, AgreementReport, CorpusSpec, Disagreement};
pub use brute::{brute_force_sat, brute_force_sat_with, BruteOptions, MAX_BOUND, MAX_S4_STATES};
pub use pipeline::{auto_depth, closure_sat, decide_valid};
pub use verdict::{UnsatEvidence, Validity, Verdict, Witness, WitnessError};
