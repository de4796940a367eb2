use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::semantics::{
    frame_violations, satisfies, FrameClass, FrameViolation, KripkeModel, SemanticsError,
};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("the formula is false at the claimed state")]
    NotSatisfied,
    #[error("the model is not in frame class {frame}: {} violation(s)", .violations.len())]
    WrongFrame {
        frame: FrameClass,
        violations: Vec<FrameViolation>,
    },
}

/// A model and state re-checked against the formula and frame class. The
/// only way to obtain one is [`Witness::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    model: KripkeModel,
    state: usize,
    frame: FrameClass,
}

impl Witness {
    pub fn new(
        f: &Formula,
        frame: FrameClass,
        model: KripkeModel,
        state: usize,
    ) -> Result<Self, WitnessError> {
        let indices: Vec<u32> = model.indices().into_iter().collect();
        let violations = frame_violations(&model, frame, &indices)?;
        if !violations.is_empty() {
            return Err(WitnessError::WrongFrame { frame, violations });
        }
        if !satisfies(&model, state, f)? {
            return Err(WitnessError::NotSatisfied);
        }
        Ok(Witness {
            model,
            state,
            frame,
        })
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn frame(&self) -> FrameClass {
        self.frame
    }

    pub fn to_json(&self) -> Value {
        json!({
            "state": self.model.state_name(self.state),
            "frame": self.frame,
            "model": self.model.to_json_value(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "evidence", rename_all = "kebab-case")]
pub enum UnsatEvidence {
    /// Every model up to `bound` states was ruled out.
    ExhaustedModels { bound: usize },
    /// No atom of the closure contains the formula.
    NoAtomContains,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(Witness),
    Unsat(UnsatEvidence),
    Unknown(String),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat(_))
    }

    pub fn is_definite(&self) -> bool {
        !matches!(self, Verdict::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "sat",
            Verdict::Unsat(_) => "unsat",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Sat(w) => json!({ "verdict": "sat", "witness": w.to_json() }),
            Verdict::Unsat(e) => json!({ "verdict": "unsat", "evidence": e }),
            Verdict::Unknown(r) => json!({ "verdict": "unknown", "reason": r }),
        }
    }
}

/// Validity verdict; `Invalid` carries a countermodel to the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Witness),
    Unknown { closure: Verdict, oracle: Verdict },
}

impl Validity {
    pub fn label(&self) -> &'static str {
        match self {
            Validity::Valid => "valid",
            Validity::Invalid(_) => "invalid",
            Validity::Unknown { .. } => "unknown",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Validity::Valid => json!({ "validity": "valid" }),
            Validity::Invalid(w) => json!({ "validity": "invalid", "countermodel": w.to_json() }),
            Validity::Unknown { closure, oracle } => json!({
                "validity": "unknown",
                "closure": closure.to_json(),
                "oracle": oracle.to_json(),
            }),
        }
    }
}
