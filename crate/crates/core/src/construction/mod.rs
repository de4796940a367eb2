//! Atoms over a closure, canonical relations, depth-bounded standard models
//! and the audits that check them.

mod atoms;
mod audit;
mod horizon;
mod model;

pub use atoms::{
    canonical_relation, enumerate_atoms, Atom, AtomTable, Elimination, Literal, ModalEntry,
    Options, RelationReading,
};
pub use audit::{
    audit_all, audit_canonicity, audit_existence, audit_standardness, audit_truth, AuditReport,
    CanonicityReport, CanonicityViolation, ExistenceReport, ExistenceViolation, StandardnessReport,
    StandardnessViolation, TruthMismatch, TruthReport,
};
pub use horizon::horizon;
pub use model::{
    build_standard_model, build_witness_model, path_name, witness_steps, CanonicalPath,
    StandardModel,
};

/// Default build depth: one more than the modal depth of α.
pub fn default_depth(table: &AtomTable) -> usize {
    table.signature().alpha().modal_depth() + 1
}
