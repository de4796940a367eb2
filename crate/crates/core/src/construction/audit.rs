use std::collections::HashMap;

use serde::Serialize;

use super::{horizon, AtomTable, StandardModel};
use crate::closure::Signature;
use crate::semantics::{
    compose_relation, condition_violations, frame_violations, Condition, Evaluator, FrameClass,
    Mode, Relation,
};
use crate::syntax::Index;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicityViolation {
    pub property: String,
    pub index: Index,
    /// The wider index, for monotonicity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wider: Option<Index>,
    pub atoms: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicityReport {
    pub signature: Signature,
    pub coherent: usize,
    pub atoms: usize,
    pub checked: Vec<String>,
    pub violations: Vec<CanonicityViolation>,
}

impl CanonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Frame properties ▷_I should have in this logic. Seriality is only
/// claimed for singleton indices.
fn expected(frame: FrameClass, singleton: bool) -> Vec<Condition> {
    use Condition::*;
    match frame {
        FrameClass::K => vec![],
        FrameClass::D if singleton => vec![Serial],
        FrameClass::D => vec![],
        FrameClass::T => vec![Reflexive],
        FrameClass::B => vec![Reflexive, Symmetric],
        FrameClass::S4 => vec![Reflexive, Transitive],
        FrameClass::S5 => vec![Reflexive, Symmetric, Transitive],
    }
}

fn condition_name(c: Condition) -> &'static str {
    match c {
        Condition::Serial => "serial",
        Condition::Reflexive => "reflexive",
        Condition::Symmetric => "symmetric",
        Condition::Transitive => "transitive",
        Condition::Euclidean => "euclidean",
    }
}

/// Per-logic properties of every ▷_I, and `▷_J ⊆ ▷_I` for `I ⊆ J ⊆ ι`.
pub fn audit_canonicity(table: &AtomTable) -> CanonicityReport {
    let frame = table.signature().frame();
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    for idx in table.subsets() {
        let r = table.relation(idx);
        for c in expected(frame, idx.is_singleton()) {
            checked.push(format!("{} {{{idx}}}", condition_name(c)));
            for v in condition_violations(r, 0, c) {
                violations.push(CanonicityViolation {
                    property: condition_name(c).into(),
                    index: idx.clone(),
                    wider: None,
                    atoms: v.states,
                });
            }
        }
        for wider in table.subsets() {
            if !idx.is_subset(wider) || idx == wider {
                continue;
            }
            checked.push(format!("monotone {{{idx}}} <= {{{wider}}}"));
            for (a, b) in table.relation(wider).pairs() {
                if !r.contains(a, b) {
                    violations.push(CanonicityViolation {
                        property: "monotone".into(),
                        index: idx.clone(),
                        wider: Some(wider.clone()),
                        atoms: vec![a, b],
                    });
                }
            }
        }
    }
    CanonicityReport {
        signature: table.signature().clone(),
        coherent: table.coherent_count(),
        atoms: table.len(),
        checked,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardnessViolation {
    pub index: u32,
    pub condition: String,
    pub states: Vec<String>,
    /// The first listed state has no room left below it.
    pub frontier: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StandardnessReport {
    pub signature: Signature,
    pub depth: usize,
    pub states: usize,
    pub frame: FrameClass,
    pub violations: Vec<StandardnessViolation>,
    pub non_frontier: usize,
}

impl StandardnessReport {
    /// No violations away from the frontier.
    pub fn passed(&self) -> bool {
        self.non_frontier == 0
    }
}

pub fn audit_standardness(m: &StandardModel) -> StandardnessReport {
    let iota: Vec<u32> = m.signature().iota().iter().collect();
    let raw =
        frame_violations(m.model(), m.frame(), &iota).expect("every index of iota has a relation");
    let violations: Vec<StandardnessViolation> = raw
        .into_iter()
        .map(|v| StandardnessViolation {
            index: v.index,
            condition: condition_name(v.condition).into(),
            frontier: m.is_frontier(v.states[0]),
            states: v
                .states
                .iter()
                .map(|&s| m.model().state_name(s).to_string())
                .collect(),
        })
        .collect();
    StandardnessReport {
        signature: m.signature().clone(),
        depth: m.depth(),
        states: m.num_states(),
        frame: m.frame(),
        non_frontier: violations.iter().filter(|v| !v.frontier).count(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruthMismatch {
    pub state: String,
    pub formula: String,
    pub in_tail: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruthReport {
    pub signature: Signature,
    pub depth: usize,
    pub ucl_depth: usize,
    pub states: usize,
    /// (state, formula) pairs far enough from the frontier to be compared.
    pub checked: usize,
    pub skipped: usize,
    pub no_interior: bool,
    pub mismatches: Vec<TruthMismatch>,
}

impl TruthReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `φ ∈ tail(s)` with `M, s ⊨ φ` for every closure member, at
/// states with at least `horizon(φ)` steps of room below them.
pub fn audit_truth(table: &AtomTable, m: &StandardModel) -> TruthReport {
    let w = table.ucl_witness_depth();
    let frame = m.frame();
    let mut ev = Evaluator::new(m.model());
    let (mut checked, mut skipped) = (0, 0);
    let mut mismatches = Vec::new();
    for f in table.closure().members() {
        let h = horizon(f, frame, w);
        let truth = ev.truth_set(f).expect("model covers iota");
        for s in 0..m.num_states() {
            if h.is_none_or(|h| m.remaining(s) < h) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let in_tail = table.contains(m.tail(s), f).expect("closure member");
            let holds = truth.contains(s);
            if in_tail != holds {
                mismatches.push(TruthMismatch {
                    state: m.model().state_name(s).to_string(),
                    formula: f.render(),
                    in_tail,
                    holds,
                });
            }
        }
    }
    TruthReport {
        signature: m.signature().clone(),
        depth: m.depth(),
        ucl_depth: w,
        states: m.num_states(),
        checked,
        skipped,
        no_interior: checked == 0,
        mismatches,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceViolation {
    pub state: String,
    pub formula: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExistenceReport {
    pub signature: Signature,
    pub depth: usize,
    pub checked_cap: usize,
    pub checked_ucl: usize,
    pub skipped: usize,
    pub no_interior: bool,
    pub violations: Vec<ExistenceViolation>,
}

impl ExistenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each `¬∩_Iφ` (resp. `¬⊎_Iφ`) in a tail, looks for a `⋂R_i`-successor
/// (resp. a successor in the transitive closure of `⋃R_i`) whose tail lacks
/// φ. States without room for the witness are skipped.
pub fn audit_existence(table: &AtomTable, m: &StandardModel) -> ExistenceReport {
    let atoms = table.atoms();
    let reflexive = m.frame().is_reflexive();
    let mut cache: HashMap<Mode, Relation> = HashMap::new();
    let mut rel = |mode: Mode| {
        cache
            .entry(mode.clone())
            .or_insert_with(|| compose_relation(m.model(), &mode).expect("model covers iota"))
            .clone()
    };
    let (mut checked_cap, mut checked_ucl, mut skipped) = (0, 0, 0);
    let mut violations = Vec::new();
    let positives = table.positives();
    for e in table.cap_entries() {
        let r = rel(Mode::Cap(e.index.clone()));
        for s in 0..m.num_states() {
            let tail = &atoms[m.tail(s)];
            if tail.contains(e.slot) {
                continue;
            }
            let need = usize::from(!(reflexive && !e.body.holds(tail)));
            if m.remaining(s) < need {
                skipped += 1;
                continue;
            }
            checked_cap += 1;
            if !r
                .successors(s)
                .iter()
                .any(|&t| !e.body.holds(&atoms[m.tail(t)]))
            {
                violations.push(ExistenceViolation {
                    state: m.model().state_name(s).to_string(),
                    formula: format!("~{}", positives[e.slot]),
                });
            }
        }
    }
    for (k, e) in table.ucl_entries().iter().enumerate() {
        let r = rel(Mode::Ucl(e.index.clone()));
        for s in 0..m.num_states() {
            let tail = &atoms[m.tail(s)];
            if tail.contains(e.slot) {
                continue;
            }
            let need = table
                .ucl_need(k, m.tail(s))
                .expect("survivors have witnesses");
            if m.remaining(s) < need {
                skipped += 1;
                continue;
            }
            checked_ucl += 1;
            if !r
                .successors(s)
                .iter()
                .any(|&t| !e.body.holds(&atoms[m.tail(t)]))
            {
                violations.push(ExistenceViolation {
                    state: m.model().state_name(s).to_string(),
                    formula: format!("~{}", positives[e.slot]),
                });
            }
        }
    }
    ExistenceReport {
        signature: m.signature().clone(),
        depth: m.depth(),
        checked_cap,
        checked_ucl,
        skipped,
        no_interior: checked_cap + checked_ucl == 0,
        violations,
    }
}

/// All four audits for one signature and depth.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub canonicity: CanonicityReport,
    pub standardness: StandardnessReport,
    pub truth: TruthReport,
    pub existence: ExistenceReport,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.canonicity.passed()
            && self.standardness.passed()
            && self.truth.passed()
            && self.existence.passed()
    }
}

pub fn audit_all(table: &AtomTable, m: &StandardModel) -> AuditReport {
    AuditReport {
        canonicity: audit_canonicity(table),
        standardness: audit_standardness(m),
        truth: audit_truth(table, m),
        existence: audit_existence(table, m),
    }
}
