//! Signatures and their finite closures `cl(σ)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::proof::SystemId;
use crate::semantics::FrameClass;
use crate::syntax::{Formula, Index, Level};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("{0} is not one of the full-language logics CK … CS5")]
    NotFullLogic(SystemId),
    #[error("index {index} of the formula is not contained in iota = {{{iota}}}")]
    IndexOutsideIota { index: Index, iota: Index },
}

/// `(logic, α, ι)`; the axiomatization is determined by the logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    logic: SystemId,
    alpha: Formula,
    iota: Index,
}

impl Signature {
    pub fn new(logic: SystemId, alpha: Formula, iota: Index) -> Result<Self, SignatureError> {
        if logic.level != Level::CapUcl {
            return Err(SignatureError::NotFullLogic(logic));
        }
        if let Some(index) = alpha.indices().into_iter().find(|i| !i.is_subset(&iota)) {
            return Err(SignatureError::IndexOutsideIota { index, iota });
        }
        Ok(Signature { logic, alpha, iota })
    }

    /// ι is the union of the indices of α, or `{1}` when α has none.
    pub fn with_default_iota(frame: FrameClass, alpha: Formula) -> Self {
        let iota = alpha.index_union().unwrap_or_else(|| Index::singleton(1));
        Signature::new(SystemId::logic(frame), alpha, iota).expect("iota covers alpha")
    }

    pub fn logic(&self) -> SystemId {
        self.logic
    }

    pub fn frame(&self) -> FrameClass {
        self.logic.frame
    }

    pub fn alpha(&self) -> &Formula {
        &self.alpha
    }

    pub fn iota(&self) -> &Index {
        &self.iota
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {{{}}})",
            self.logic.logic_name(),
            self.alpha,
            self.iota
        )
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            logic: String,
            alpha: String,
            iota: &'a Index,
        }
        Repr {
            logic: self.logic.logic_name(),
            alpha: self.alpha.render(),
            iota: &self.iota,
        }
        .serialize(s)
    }
}

/// How to read the sixth closure condition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Cond6Reading {
    /// `⊎_Iφ ∈ cl ⇒ ∩_J⊎_Iφ ∈ cl` for every `J ⊆ ι` meeting `I`.
    #[default]
    Repaired,
    /// Only for `I ⊂ J ⊆ ι`, as the quantifier is printed.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    signature: Signature,
    reading: Cond6Reading,
    members: BTreeSet<Formula>,
}

impl ClosureSet {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn reading(&self) -> Cond6Reading {
        self.reading
    }

    pub fn members(&self) -> &BTreeSet<Formula> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    /// Rendered members, sorted as strings.
    pub fn rendered(&self) -> Vec<String> {
        let mut out: Vec<String> = self.members.iter().map(Formula::render).collect();
        out.sort();
        out
    }

    /// Members not starting with a negation.
    pub fn positives(&self) -> impl Iterator<Item = &Formula> {
        self.members.iter().filter(|f| !f.is_neg())
    }
}

pub fn in_closure(cl: &ClosureSet, f: &Formula) -> bool {
    cl.contains(f)
}

/// Formulas that one application of the closure conditions demands of `f`.
fn demands(f: &Formula, iota: &Index, reading: Cond6Reading) -> Vec<Formula> {
    let mut out: Vec<Formula> = f.children().into_iter().cloned().collect();
    if !f.is_neg() {
        out.push(Formula::neg(f.clone()));
    }
    match f {
        Formula::Box(i, body) if iota.contains(*i) => {
            out.push(Formula::cap(Index::singleton(*i), (**body).clone()));
        }
        Formula::Cap(idx, body) => {
            if idx.is_singleton() {
                out.push(Formula::boxed(idx.members()[0], (**body).clone()));
            }
            for j in iota.nonempty_subsets() {
                if idx.is_subset(&j) && *idx != j {
                    out.push(Formula::cap(j, (**body).clone()));
                }
            }
        }
        Formula::Ucl(idx, _) => {
            for j in iota.nonempty_subsets() {
                let wanted = match reading {
                    Cond6Reading::Repaired => j.intersects(idx),
                    Cond6Reading::Literal => idx.is_subset(&j) && *idx != j,
                };
                if wanted {
                    out.push(Formula::cap(j, f.clone()));
                }
            }
        }
        _ => {}
    }
    out
}

pub fn closure(sig: &Signature) -> ClosureSet {
    closure_with(sig, Cond6Reading::Repaired)
}

/// Least set containing α and closed under the six conditions.
pub fn closure_with(sig: &Signature, reading: Cond6Reading) -> ClosureSet {
    let mut members = BTreeSet::new();
    let mut work = vec![sig.alpha.clone()];
    while let Some(f) = work.pop() {
        if members.contains(&f) {
            continue;
        }
        work.extend(demands(&f, &sig.iota, reading));
        members.insert(f);
    }
    ClosureSet {
        signature: sig.clone(),
        reading,
        members,
    }
}

/// Members whose demanded formulas are missing; empty for a closed set.
pub fn closure_defects(cl: &ClosureSet) -> Vec<(Formula, Formula)> {
    let mut out = Vec::new();
    for f in &cl.members {
        for g in demands(f, &cl.signature.iota, cl.reading) {
            if !cl.members.contains(&g) {
                out.push((f.clone(), g));
            }
        }
    }
    out
}
