use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::{KripkeModel, Relation};
use crate::syntax::{Formula, Index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("state #{0} is not in the model")]
    UnknownState(usize),
    #[error("index {0} has no relation in the model")]
    UnknownIndex(u32),
}

/// Which relation a modality is interpreted over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Single(u32),
    Cap(Index),
    Ucl(Index),
}

fn rel(m: &KripkeModel, i: u32) -> Result<&Relation, SemanticsError> {
    m.relation(i).ok_or(SemanticsError::UnknownIndex(i))
}

/// The relation a modality quantifies over: `R_i`, the intersection over `I`,
/// or the transitive (one step or more) closure of the union over `I`.
pub fn compose_relation(m: &KripkeModel, mode: &Mode) -> Result<Relation, SemanticsError> {
    match mode {
        Mode::Single(i) => Ok(rel(m, *i)?.clone()),
        Mode::Cap(idx) => {
            let mut acc: Option<Relation> = None;
            for i in idx.iter() {
                let r = rel(m, i)?;
                acc = Some(match acc {
                    None => r.clone(),
                    Some(a) => a.intersection(r),
                });
            }
            Ok(acc.expect("index is nonempty"))
        }
        Mode::Ucl(idx) => Ok(union_over(m, idx)?.transitive_closure()),
    }
}

fn union_over(m: &KripkeModel, idx: &Index) -> Result<Relation, SemanticsError> {
    let mut acc: Option<Relation> = None;
    for i in idx.iter() {
        let r = rel(m, i)?;
        acc = Some(match acc {
            None => r.clone(),
            Some(a) => a.union(r),
        });
    }
    Ok(acc.expect("index is nonempty"))
}

/// Global model checker: truth sets of subformulas, memoized per formula.
pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    memo: HashMap<Formula, FixedBitSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Self {
        Evaluator {
            model,
            memo: HashMap::new(),
        }
    }

    /// The set of states where `f` holds.
    pub fn truth_set(&mut self, f: &Formula) -> Result<FixedBitSet, SemanticsError> {
        if let Some(v) = self.memo.get(f) {
            return Ok(v.clone());
        }
        let n = self.model.num_states();
        let out = match f {
            Formula::Prop(p) => {
                let mut bits = FixedBitSet::with_capacity(n);
                if let Some(set) = self.model.valuation().get(p) {
                    for &s in set {
                        bits.insert(s);
                    }
                }
                bits
            }
            Formula::Neg(a) => {
                let mut bits = self.truth_set(a)?;
                bits.toggle_range(..);
                bits
            }
            Formula::Impl(a, b) => {
                let mut bits = self.truth_set(a)?;
                bits.toggle_range(..);
                bits.union_with(&self.truth_set(b)?);
                bits
            }
            Formula::Box(i, a) => {
                let body = self.truth_set(a)?;
                let r = rel(self.model, *i)?;
                all_successors_in(n, |s| r.successors(s).to_vec(), &body)
            }
            Formula::Cap(idx, a) => {
                let body = self.truth_set(a)?;
                let rels: Vec<&Relation> = idx
                    .iter()
                    .map(|i| rel(self.model, i))
                    .collect::<Result<_, _>>()?;
                all_successors_in(
                    n,
                    |s| {
                        let mut acc = rels[0].successors(s).to_vec();
                        for r in &rels[1..] {
                            acc = super::relation::intersect_sorted(&acc, r.successors(s));
                        }
                        acc
                    },
                    &body,
                )
            }
            Formula::Ucl(idx, a) => {
                let body = self.truth_set(a)?;
                let pred = union_over(self.model, idx)?.inverse();
                // A state fails iff it reaches a `~a` state in one or more steps.
                let mut bad = FixedBitSet::with_capacity(n);
                let mut seen = FixedBitSet::with_capacity(n);
                let mut stack: Vec<usize> = (0..n).filter(|&t| !body.contains(t)).collect();
                for &t in &stack {
                    seen.insert(t);
                }
                while let Some(t) = stack.pop() {
                    for &s in pred.successors(t) {
                        if !bad.contains(s) {
                            bad.insert(s);
                        }
                        if !seen.contains(s) {
                            seen.insert(s);
                            stack.push(s);
                        }
                    }
                }
                bad.toggle_range(..);
                bad
            }
        };
        self.memo.insert(f.clone(), out.clone());
        Ok(out)
    }
}

fn all_successors_in(
    n: usize,
    succ: impl Fn(usize) -> Vec<usize>,
    body: &FixedBitSet,
) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(n);
    for s in 0..n {
        if succ(s).iter().all(|&t| body.contains(t)) {
            bits.insert(s);
        }
    }
    bits
}

pub fn truth_set(m: &KripkeModel, f: &Formula) -> Result<FixedBitSet, SemanticsError> {
    Evaluator::new(m).truth_set(f)
}

/// `M, s |= f`.
pub fn satisfies(m: &KripkeModel, s: usize, f: &Formula) -> Result<bool, SemanticsError> {
    if s >= m.num_states() {
        return Err(SemanticsError::UnknownState(s));
    }
    Ok(truth_set(m, f)?.contains(s))
}

/// `f` holds at every state of `m`.
pub fn valid_on_model(m: &KripkeModel, f: &Formula) -> Result<bool, SemanticsError> {
    let t = truth_set(m, f)?;
    Ok(t.count_ones(..) == m.num_states())
}
