use thiserror::Error;

use super::{compose_relation, KripkeModel, Mode, SemanticsError};
use crate::syntax::Index;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path has {states} states but {indices} indices")]
    Shape { states: usize, indices: usize },
    #[error("not an initial segment")]
    NotInitialSegment,
    #[error("step {step} is not in the intersection of its index relations")]
    BrokenStep { step: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// An alternating sequence `<s0, I0, s1, ..., I(n-1), sn>`, n >= 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path<T> {
    states: Vec<T>,
    indices: Vec<Index>,
}

pub type ModelPath = Path<usize>;

impl<T: Clone + PartialEq> Path<T> {
    pub fn new(states: Vec<T>, indices: Vec<Index>) -> Result<Self, PathError> {
        if states.is_empty() || states.len() != indices.len() + 1 {
            return Err(PathError::Shape {
                states: states.len(),
                indices: indices.len(),
            });
        }
        Ok(Path { states, indices })
    }

    pub fn single(s: T) -> Self {
        Path {
            states: vec![s],
            indices: Vec::new(),
        }
    }

    pub fn extended(&self, idx: Index, t: T) -> Self {
        let mut p = self.clone();
        p.indices.push(idx);
        p.states.push(t);
        p
    }

    pub fn states(&self) -> &[T] {
        &self.states
    }

    pub fn indices(&self) -> &[Index] {
        &self.indices
    }

    /// Number of steps.
    pub fn steps(&self) -> usize {
        self.indices.len()
    }

    pub fn tail(&self) -> &T {
        self.states.last().expect("paths are nonempty")
    }

    /// `i` occurs in every index of the path; a one-state path qualifies.
    pub fn is_i_path(&self, i: u32) -> bool {
        self.indices.iter().all(|idx| idx.contains(i))
    }

    /// `set` is contained in every index of the path.
    pub fn is_index_path(&self, set: &Index) -> bool {
        self.indices.iter().all(|idx| set.is_subset(idx))
    }

    pub fn is_initial_segment_of(&self, other: &Path<T>) -> bool {
        self.states.len() <= other.states.len()
            && self.states[..] == other.states[..self.states.len()]
            && self.indices[..] == other.indices[..self.indices.len()]
    }

    /// `other \ self`: the part of `other` after `self`, starting at
    /// `tail(self)`.
    pub fn diff_from(&self, other: &Path<T>) -> Result<Path<T>, PathError> {
        if !self.is_initial_segment_of(other) {
            return Err(PathError::NotInitialSegment);
        }
        let m = self.indices.len();
        Ok(Path {
            states: other.states[m..].to_vec(),
            indices: other.indices[m..].to_vec(),
        })
    }
}

impl ModelPath {
    /// Checks that each step lies in the intersection of its index's relations.
    pub fn check_in(&self, m: &KripkeModel) -> Result<(), PathError> {
        for (k, idx) in self.indices.iter().enumerate() {
            let (s, t) = (self.states[k], self.states[k + 1]);
            if s >= m.num_states() {
                return Err(SemanticsError::UnknownState(s).into());
            }
            if t >= m.num_states() {
                return Err(SemanticsError::UnknownState(t).into());
            }
            if !compose_relation(m, &Mode::Cap(idx.clone()))?.contains(s, t) {
                return Err(PathError::BrokenStep { step: k });
            }
        }
        Ok(())
    }
}
