use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AxiomName;
use crate::semantics::FrameClass;
use crate::syntax::Level;

/// Inference rules besides PC.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// from φ→ψ and φ infer ψ
    Mp,
    /// from φ infer □_iφ
    Nec,
    /// from φ infer ∩_Iφ
    NecCap,
    /// from φ → ⋀_{i∈I} □_i(φ∧ψ) infer φ → ⊎_Iψ
    UclInduction,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Mp => "MP",
            Rule::Nec => "N",
            Rule::NecCap => "N∩",
            Rule::UclInduction => "⊎2",
        }
    }
}

/// A frame class paired with a language level, e.g. `AX_S4∩` or `AX_CT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemId {
    pub frame: FrameClass,
    pub level: Level,
}

impl SystemId {
    pub fn new(frame: FrameClass, level: Level) -> Self {
        SystemId { frame, level }
    }

    /// The full-language logic over `frame` (`CK` … `CS5`).
    pub fn logic(frame: FrameClass) -> Self {
        SystemId::new(frame, Level::CapUcl)
    }

    /// Short logic name: `CK`, `CT`, … for the full language.
    pub fn logic_name(self) -> String {
        match self.level {
            Level::Basic => self.frame.name().to_string(),
            Level::Cap => format!("{}∩", self.frame.name()),
            Level::CapUcl => format!("C{}", self.frame.name()),
        }
    }

    /// All eighteen systems, level-major.
    pub fn all() -> Vec<SystemId> {
        [Level::Basic, Level::Cap, Level::CapUcl]
            .into_iter()
            .flat_map(|l| {
                FrameClass::ALL
                    .into_iter()
                    .map(move |c| SystemId::new(c, l))
            })
            .collect()
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AX_{}", self.logic_name())
    }
}

impl FromStr for SystemId {
    type Err = String;

    /// Accepts `AX_S4`, `AX_S4∩`, `AX_S4_CAP`, `AX_S4CAP`, `AX_CS4` and the
    /// same without the `AX_` prefix. Case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_uppercase();
        let body = upper.strip_prefix("AX_").unwrap_or(&upper);
        let (body, cap) = if let Some(b) = body.strip_suffix('∩') {
            (b, true)
        } else if let Some(b) = body.strip_suffix("CAP") {
            (b.strip_suffix('_').unwrap_or(b), true)
        } else {
            (body, false)
        };
        let err = || format!("unknown system `{s}`");
        if cap {
            let frame = body.parse::<FrameClass>().map_err(|_| err())?;
            return Ok(SystemId::new(frame, Level::Cap));
        }
        if let Ok(frame) = body.parse::<FrameClass>() {
            return Ok(SystemId::new(frame, Level::Basic));
        }
        match body.strip_prefix('C') {
            Some(rest) => {
                let frame = rest.parse::<FrameClass>().map_err(|_| err())?;
                Ok(SystemId::new(frame, Level::CapUcl))
            }
            None => Err(err()),
        }
    }
}

/// Axioms and rules of an assembled system. PC is always present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct System {
    pub id: SystemId,
    pub axioms: Vec<AxiomName>,
    pub rules: Vec<Rule>,
}

impl System {
    pub fn has_axiom(&self, a: AxiomName) -> bool {
        self.axioms.contains(&a)
    }

    pub fn has_rule(&self, r: Rule) -> bool {
        self.rules.contains(&r)
    }
}

pub fn assemble_system(id: SystemId) -> System {
    use AxiomName::*;
    let mut axioms = vec![K];
    axioms.extend_from_slice(match id.frame {
        FrameClass::K => &[][..],
        FrameClass::D => &[D],
        FrameClass::T => &[T],
        FrameClass::B => &[T, B],
        FrameClass::S4 => &[T, Four],
        FrameClass::S5 => &[T, Five],
    });
    let mut rules = vec![Rule::Mp, Rule::Nec];
    if id.level >= Level::Cap {
        axioms.extend_from_slice(&[KCap, Cap1, Cap2]);
        axioms.extend_from_slice(match id.frame {
            FrameClass::K | FrameClass::D => &[][..],
            FrameClass::T => &[TCap],
            FrameClass::B => &[TCap, BCap],
            FrameClass::S4 => &[TCap, FourCap],
            FrameClass::S5 => &[TCap, FiveCap],
        });
        rules.push(Rule::NecCap);
    }
    if id.level == Level::CapUcl {
        axioms.extend_from_slice(&[KUcl, Ucl1]);
        rules.push(Rule::UclInduction);
    }
    axioms.sort();
    System { id, axioms, rules }
}
