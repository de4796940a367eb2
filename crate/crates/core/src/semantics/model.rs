use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("relation key `{0}` is not a decimal index")]
    BadIndexKey(String),
    #[error("relation for index {index} has {got} rows, expected {expected}")]
    RelationSize {
        index: u32,
        got: usize,
        expected: usize,
    },
    #[error("valuation of `{prop}` mentions state #{state}, out of range")]
    ValuationRange { prop: String, state: usize },
    #[error("malformed model JSON: {0}")]
    Json(String),
}

/// Finite Kripke model: named states, one relation per index in use, and a
/// valuation of propositions. States are addressed by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    states: Vec<String>,
    ids: HashMap<String, usize>,
    rel: BTreeMap<u32, Relation>,
    val: BTreeMap<String, BTreeSet<usize>>,
}

/// On-disk model format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub states: Vec<String>,
    pub rel: BTreeMap<String, Vec<(String, String)>>,
    pub val: BTreeMap<String, Vec<String>>,
}

impl KripkeModel {
    pub fn new(
        states: Vec<String>,
        rel: BTreeMap<u32, Relation>,
        val: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<KripkeModel, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let mut ids = HashMap::with_capacity(states.len());
        for (k, s) in states.iter().enumerate() {
            if ids.insert(s.clone(), k).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let n = states.len();
        for (&index, r) in &rel {
            if r.num_states() != n {
                return Err(ModelError::RelationSize {
                    index,
                    got: r.num_states(),
                    expected: n,
                });
            }
        }
        for (prop, set) in &val {
            if let Some(&state) = set.iter().find(|&&s| s >= n) {
                return Err(ModelError::ValuationRange {
                    prop: prop.clone(),
                    state,
                });
            }
        }
        Ok(KripkeModel {
            states,
            ids,
            rel,
            val,
        })
    }

    /// States named `s0, s1, ...`.
    pub fn with_numbered_states(
        n: usize,
        rel: BTreeMap<u32, Relation>,
        val: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<KripkeModel, ModelError> {
        KripkeModel::new((0..n).map(|k| format!("s{k}")).collect(), rel, val)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.ids.get(name).copied()
    }

    pub fn relation(&self, i: u32) -> Option<&Relation> {
        self.rel.get(&i)
    }

    pub fn relations(&self) -> &BTreeMap<u32, Relation> {
        &self.rel
    }

    pub fn indices(&self) -> BTreeSet<u32> {
        self.rel.keys().copied().collect()
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.val
    }

    pub fn holds(&self, prop: &str, s: usize) -> bool {
        self.val.get(prop).map(|v| v.contains(&s)).unwrap_or(false)
    }

    pub fn to_json_value(&self) -> ModelJson {
        let name = |s: usize| self.states[s].clone();
        ModelJson {
            states: self.states.clone(),
            rel: self
                .rel
                .iter()
                .map(|(i, r)| {
                    (
                        i.to_string(),
                        r.pairs().map(|(s, t)| (name(s), name(t))).collect(),
                    )
                })
                .collect(),
            val: self
                .val
                .iter()
                .map(|(p, set)| (p.clone(), set.iter().map(|&s| name(s)).collect()))
                .collect(),
        }
    }

    pub fn from_json_value(json: ModelJson) -> Result<KripkeModel, ModelError> {
        let ids: HashMap<&str, usize> = json
            .states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.as_str(), k))
            .collect();
        let lookup = |s: &str| {
            ids.get(s)
                .copied()
                .ok_or_else(|| ModelError::UnknownState(s.to_string()))
        };
        let n = json.states.len();
        let mut rel = BTreeMap::new();
        for (key, pairs) in &json.rel {
            if key.is_empty() || !key.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ModelError::BadIndexKey(key.clone()));
            }
            let i: u32 = key
                .parse()
                .map_err(|_| ModelError::BadIndexKey(key.clone()))?;
            let mut ps = Vec::with_capacity(pairs.len());
            for (s, t) in pairs {
                ps.push((lookup(s)?, lookup(t)?));
            }
            if rel.insert(i, Relation::from_pairs(n, ps)).is_some() {
                return Err(ModelError::BadIndexKey(key.clone()));
            }
        }
        let mut val = BTreeMap::new();
        for (p, states) in &json.val {
            let set = states
                .iter()
                .map(|s| lookup(s))
                .collect::<Result<BTreeSet<_>, _>>()?;
            val.insert(p.clone(), set);
        }
        KripkeModel::new(json.states, rel, val)
    }

    pub fn from_json(text: &str) -> Result<KripkeModel, ModelError> {
        let json: ModelJson =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        KripkeModel::from_json_value(json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("model serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_example_loads() {
        let m = KripkeModel::from_json(
            r#"{"states":["a","b"],"rel":{"1":[["a","b"]],"2":[]},"val":{"p":["a"]}}"#,
        )
        .unwrap();
        assert_eq!(m.num_states(), 2);
        assert!(m.relation(1).unwrap().contains(0, 1));
        assert_eq!(m.relation(2).unwrap().num_pairs(), 0);
        assert!(m.holds("p", 0) && !m.holds("p", 1));
        let again = KripkeModel::from_json(&m.to_json()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn json_rejections() {
        let unknown_key = r#"{"states":["a"],"rel":{},"val":{},"extra":1}"#;
        assert!(matches!(
            KripkeModel::from_json(unknown_key),
            Err(ModelError::Json(_))
        ));
        let bad_index = r#"{"states":["a"],"rel":{"x":[]},"val":{}}"#;
        assert_eq!(
            KripkeModel::from_json(bad_index),
            Err(ModelError::BadIndexKey("x".into()))
        );
        let bad_state = r#"{"states":["a"],"rel":{"1":[["a","z"]]},"val":{}}"#;
        assert_eq!(
            KripkeModel::from_json(bad_state),
            Err(ModelError::UnknownState("z".into()))
        );
        let empty = r#"{"states":[],"rel":{},"val":{}}"#;
        assert_eq!(KripkeModel::from_json(empty), Err(ModelError::NoStates));
        let dup = r#"{"states":["a","a"],"rel":{},"val":{}}"#;
        assert_eq!(
            KripkeModel::from_json(dup),
            Err(ModelError::DuplicateState("a".into()))
        );
    }
}
