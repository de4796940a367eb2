use rayon::prelude::*;
use serde::Serialize;

use super::{brute_force_sat, closure_sat, Verdict};
use crate::semantics::FrameClass;
use crate::syntax::{Formula, Index};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub max_connectives: usize,
    pub max_depth: usize,
    pub indices: Vec<u32>,
    pub props: Vec<String>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_connectives: 4,
            max_depth: 2,
            indices: vec![1, 2],
            props: vec!["p".into()],
        }
    }
}

/// Every formula over the primitive connectives within the limits, by
/// connective count. Modalities are `□_i`, `∩_I` and `⊎_I` for nonempty
/// `I` over the given indices.
pub fn formula_corpus(spec: &CorpusSpec) -> Vec<Formula> {
    let all = Index::new(spec.indices.iter().copied());
    let subsets = all.map(|i| i.nonempty_subsets()).unwrap_or_default();
    let mut ops: Vec<Box<dyn Fn(Formula) -> Formula>> = Vec::new();
    for &i in &spec.indices {
        ops.push(Box::new(move |f| Formula::boxed(i, f)));
    }
    for idx in &subsets {
        let idx = idx.clone();
        ops.push(Box::new(move |f| Formula::cap(idx.clone(), f)));
    }
    for idx in subsets {
        ops.push(Box::new(move |f| Formula::ucl(idx.clone(), f)));
    }
    let mut by_count: Vec<Vec<Formula>> = vec![spec.props.iter().map(Formula::prop).collect()];
    for c in 1..=spec.max_connectives {
        let mut level = Vec::new();
        for f in &by_count[c - 1] {
            level.push(Formula::neg(f.clone()));
            if f.modal_depth() < spec.max_depth {
                level.extend(ops.iter().map(|op| op(f.clone())));
            }
        }
        for a in 0..c {
            for x in &by_count[a] {
                for y in &by_count[c - 1 - a] {
                    level.push(Formula::imp(x.clone(), y.clone()));
                }
            }
        }
        by_count.push(level);
    }
    by_count.concat()
}

#[derive(Clone, Debug, Serialize)]
pub struct Disagreement {
    pub formula: String,
    pub closure: String,
    pub oracle: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AgreementReport {
    pub frame: Option<FrameClass>,
    pub bound: usize,
    pub formulas: usize,
    pub both_definite: usize,
    pub sat: usize,
    pub unsat: usize,
    pub closure_unknown: usize,
    pub oracle_unknown: usize,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs both engines on every formula; formulas are handled in parallel.
pub fn compare_engines(formulas: &[Formula], frame: FrameClass, bound: usize) -> AgreementReport {
    let results: Vec<(Verdict, Verdict)> = formulas
        .par_iter()
        .map(|f| {
            (
                closure_sat(f, frame, None),
                brute_force_sat(f, frame, bound),
            )
        })
        .collect();
    let mut r = AgreementReport {
        frame: Some(frame),
        bound,
        formulas: formulas.len(),
        ..AgreementReport::default()
    };
    for (f, (c, o)) in formulas.iter().zip(&results) {
        r.closure_unknown += usize::from(!c.is_definite());
        r.oracle_unknown += usize::from(!o.is_definite());
        if !(c.is_definite() && o.is_definite()) {
            continue;
        }
        r.both_definite += 1;
        if c.is_sat() != o.is_sat() {
            r.disagreements.push(Disagreement {
                formula: f.render(),
                closure: c.label().into(),
                oracle: o.label().into(),
            });
        } else if c.is_sat() {
            r.sat += 1;
        } else {
            r.unsat += 1;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts from the recurrence F(c) = (1 + m) F(c-1) + Σ F(a) F(c-1-a),
    /// with m modal operators and no depth limit.
    fn expected(m: usize, c: usize) -> usize {
        let mut f = vec![1usize];
        for k in 1..=c {
            let pairs: usize = (0..k).map(|a| f[a] * f[k - 1 - a]).sum();
            f.push((1 + m) * f[k - 1] + pairs);
        }
        f.iter().sum()
    }

    #[test]
    fn corpus_size() {
        let spec = CorpusSpec {
            max_depth: 9,
            ..CorpusSpec::default()
        };
        let corpus = formula_corpus(&spec);
        assert_eq!(corpus.len(), expected(8, 4));
        let unique: std::collections::BTreeSet<_> = corpus.iter().collect();
        assert_eq!(unique.len(), corpus.len());
        let limited = formula_corpus(&CorpusSpec::default());
        assert!(limited
            .iter()
            .all(|f| f.modal_depth() <= 2 && f.connective_count() <= 4));
        assert!(limited.len() < corpus.len());
    }

    #[test]
    fn small_sweep_agrees() {
        let spec = CorpusSpec {
            max_connectives: 2,
            ..CorpusSpec::default()
        };
        let corpus = formula_corpus(&spec);
        for frame in [FrameClass::K, FrameClass::T, FrameClass::B] {
            let r = compare_engines(&corpus, frame, 3);
            assert!(r.passed(), "{:?}", r.disagreements);
            assert_eq!(r.both_definite, corpus.len());
        }
    }
}
