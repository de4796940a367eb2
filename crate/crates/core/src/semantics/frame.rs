use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{KripkeModel, Relation, SemanticsError};

/// Frame classes by the conditions imposed on every relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FrameClass {
    K,
    D,
    T,
    B,
    S4,
    S5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    Serial,
    Reflexive,
    Symmetric,
    Transitive,
    Euclidean,
}

impl FrameClass {
    pub const ALL: [FrameClass; 6] = [
        FrameClass::K,
        FrameClass::D,
        FrameClass::T,
        FrameClass::B,
        FrameClass::S4,
        FrameClass::S5,
    ];

    /// S5 is checked as an equivalence relation.
    pub fn conditions(self) -> &'static [Condition] {
        use Condition::*;
        match self {
            FrameClass::K => &[],
            FrameClass::D => &[Serial],
            FrameClass::T => &[Reflexive],
            FrameClass::B => &[Reflexive, Symmetric],
            FrameClass::S4 => &[Reflexive, Transitive],
            FrameClass::S5 => &[Reflexive, Symmetric, Transitive],
        }
    }

    pub fn is_reflexive(self) -> bool {
        !matches!(self, FrameClass::K | FrameClass::D)
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameClass::K => "K",
            FrameClass::D => "D",
            FrameClass::T => "T",
            FrameClass::B => "B",
            FrameClass::S4 => "S4",
            FrameClass::S5 => "S5",
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown frame class `{s}` (expected K, D, T, B, S4 or S5)"))
    }
}

/// One failure of a frame condition, with the states that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrameViolation {
    pub index: u32,
    pub condition: Condition,
    pub states: Vec<usize>,
}

pub fn condition_violations(r: &Relation, index: u32, c: Condition) -> Vec<FrameViolation> {
    let n = r.num_states();
    let v = |states: Vec<usize>| FrameViolation {
        index,
        condition: c,
        states,
    };
    let mut out = Vec::new();
    match c {
        Condition::Serial => {
            out.extend(
                (0..n)
                    .filter(|&s| r.successors(s).is_empty())
                    .map(|s| v(vec![s])),
            );
        }
        Condition::Reflexive => {
            out.extend((0..n).filter(|&s| !r.contains(s, s)).map(|s| v(vec![s])));
        }
        Condition::Symmetric => {
            out.extend(
                r.pairs()
                    .filter(|&(s, t)| !r.contains(t, s))
                    .map(|(s, t)| v(vec![s, t])),
            );
        }
        Condition::Transitive => {
            for (s, t) in r.pairs() {
                for &u in r.successors(t) {
                    if !r.contains(s, u) {
                        out.push(v(vec![s, t, u]));
                    }
                }
            }
        }
        Condition::Euclidean => {
            for s in 0..n {
                for &t in r.successors(s) {
                    for &u in r.successors(s) {
                        if !r.contains(t, u) {
                            out.push(v(vec![s, t, u]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every violation of the class's conditions on the given indices.
pub fn frame_violations(
    m: &KripkeModel,
    class: FrameClass,
    indices: &[u32],
) -> Result<Vec<FrameViolation>, SemanticsError> {
    let mut out = Vec::new();
    for &i in indices {
        let r = m.relation(i).ok_or(SemanticsError::UnknownIndex(i))?;
        for &c in class.conditions() {
            out.extend(condition_violations(r, i, c));
        }
    }
    Ok(out)
}

pub fn frame_check(
    m: &KripkeModel,
    class: FrameClass,
    indices: &[u32],
) -> Result<bool, SemanticsError> {
    Ok(frame_violations(m, class, indices)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn model(n: usize, pairs: &[(usize, usize)]) -> KripkeModel {
        let rel = BTreeMap::from([(1, Relation::from_pairs(n, pairs.iter().copied()))]);
        KripkeModel::with_numbered_states(n, rel, BTreeMap::new()).unwrap()
    }

    #[test]
    fn examples() {
        let id = model(2, &[(0, 0), (1, 1)]);
        assert!(frame_check(&id, FrameClass::T, &[1]).unwrap());
        let empty = model(2, &[]);
        assert!(!frame_check(&empty, FrameClass::D, &[1]).unwrap());
        let swap = model(2, &[(0, 1), (1, 0)]);
        assert!(!frame_check(&swap, FrameClass::B, &[1]).unwrap());
        assert!(frame_check(&swap, FrameClass::K, &[1]).unwrap());
        assert_eq!(
            frame_check(&swap, FrameClass::K, &[3]),
            Err(SemanticsError::UnknownIndex(3))
        );
    }

    #[test]
    fn equivalence_is_euclidean() {
        let eq = model(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]);
        assert!(frame_check(&eq, FrameClass::S5, &[1]).unwrap());
        let r = eq.relation(1).unwrap();
        assert!(condition_violations(r, 1, Condition::Euclidean).is_empty());
        let chain = model(3, &[(0, 1), (1, 2)]);
        let r = chain.relation(1).unwrap();
        assert_eq!(
            condition_violations(r, 1, Condition::Transitive),
            vec![FrameViolation {
                index: 1,
                condition: Condition::Transitive,
                states: vec![0, 1, 2]
            }]
        );
    }

    #[test]
    fn parse_class() {
        assert_eq!("s5".parse::<FrameClass>(), Ok(FrameClass::S5));
        assert!("KD45".parse::<FrameClass>().is_err());
    }
}
