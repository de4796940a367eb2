//! Axiom schemata, assembled Hilbert systems and the proof-script checker.

mod checker;
mod schema;
mod system;
mod tautology;

pub use checker::{
    check_proof, ucl_rule_premise, Justification, ProofError, ProofLine, ProofScript, Reason,
    ScriptError,
};
pub use schema::{
    match_axiom, AxiomName, AxiomSchema, Pattern, SideCondition, SideVar, Substitution,
};
pub use system::{assemble_system, Rule, System, SystemId};
pub use tautology::{is_tautology, pc_atoms};
