use std::fmt;

use thiserror::Error;

use super::{assemble_system, is_tautology, AxiomName, AxiomSchema, Rule, SystemId};
use crate::syntax::{parse, Formula, Index, Level};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Pc,
    Axiom(AxiomName),
    Mp(usize, usize),
    Nec(u32, usize),
    NecCap(Index, usize),
    UclRule(Index, usize),
}

impl Justification {
    /// Earlier lines this one cites.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Pc | Justification::Axiom(_) => vec![],
            Justification::Mp(j, k) => vec![*j, *k],
            Justification::Nec(_, j)
            | Justification::NecCap(_, j)
            | Justification::UclRule(_, j) => {
                vec![*j]
            }
        }
    }

    pub fn map_references(&self, f: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::Pc | Justification::Axiom(_) => self.clone(),
            Justification::Mp(j, k) => Justification::Mp(f(*j), f(*k)),
            Justification::Nec(i, j) => Justification::Nec(*i, f(*j)),
            Justification::NecCap(s, j) => Justification::NecCap(s.clone(), f(*j)),
            Justification::UclRule(s, j) => Justification::UclRule(s.clone(), f(*j)),
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Pc => write!(f, "PC"),
            Justification::Axiom(a) => write!(f, "AX {}", a.ascii()),
            Justification::Mp(j, k) => write!(f, "MP {j} {k}"),
            Justification::Nec(i, j) => write!(f, "N {i} {j}"),
            Justification::NecCap(s, j) => write!(f, "NCAP {{{s}}} {j}"),
            Justification::UclRule(s, j) => write!(f, "UCL {{{s}}} {j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
}

/// A parsed script. `goal`, when present, must equal the last line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofScript {
    pub goal: Option<Formula>,
    pub lines: Vec<ProofLine>,
}

/// Script syntax error at a 1-based text line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

fn parse_index(text: &str) -> Result<Index, String> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("expected an index like {{1 2}}, got `{text}`"))?;
    let members = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| format!("bad index member `{t}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Index::new(members).map_err(|_| "empty index".to_string())
}

fn parse_ref(t: &str) -> Result<usize, String> {
    t.parse().map_err(|_| format!("bad line reference `{t}`"))
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    // Split off an optional leading `{...}` so indices may contain spaces.
    let braced = || -> Result<(Index, usize), String> {
        let close = rest.find('}').ok_or("missing `}`")?;
        let idx = parse_index(&rest[..=close])?;
        let j = parse_ref(rest[close + 1..].trim())?;
        Ok((idx, j))
    };
    let words: Vec<&str> = rest.split_whitespace().collect();
    match head.to_ascii_uppercase().as_str() {
        "PC" if rest.is_empty() => Ok(Justification::Pc),
        "AX" if words.len() == 1 => Ok(Justification::Axiom(words[0].parse()?)),
        "MP" if words.len() == 2 => Ok(Justification::Mp(
            parse_ref(words[0])?,
            parse_ref(words[1])?,
        )),
        "N" if words.len() == 2 => Ok(Justification::Nec(
            words[0]
                .parse()
                .map_err(|_| format!("bad index `{}`", words[0]))?,
            parse_ref(words[1])?,
        )),
        "NCAP" | "N∩" => braced().map(|(i, j)| Justification::NecCap(i, j)),
        "UCL" | "⊎2" | "UCL2" => braced().map(|(i, j)| Justification::UclRule(i, j)),
        _ => Err(format!("bad justification `{text}`")),
    }
}

impl ProofScript {
    /// Parses the line format `n. <formula> ; <JUST>`, with `#` comments,
    /// blank lines and an optional `goal <formula>` directive.
    pub fn parse(text: &str) -> Result<ProofScript, ScriptError> {
        let mut script = ProofScript::default();
        for (k, raw) in text.lines().enumerate() {
            let err = |message: String| ScriptError {
                line: k + 1,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(g) = line.strip_prefix("goal ") {
                if script.goal.is_some() {
                    return Err(err("second goal directive".into()));
                }
                script.goal = Some(parse(g).map_err(|e| err(format!("goal: {e}")))?);
                continue;
            }
            let (num, rest) = line
                .split_once('.')
                .ok_or_else(|| err("expected `n. <formula> ; <justification>`".into()))?;
            let number = num
                .trim()
                .parse()
                .map_err(|_| err(format!("bad line number `{}`", num.trim())))?;
            let (formula, just) = rest
                .rsplit_once(';')
                .ok_or_else(|| err("missing `;` before the justification".into()))?;
            let formula = parse(formula).map_err(|e| err(e.to_string()))?;
            let justification = parse_justification(just).map_err(err)?;
            script.lines.push(ProofLine {
                number,
                formula,
                justification,
            });
        }
        Ok(script)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(g) = &self.goal {
            out.push_str(&format!("goal {g}\n"));
        }
        for l in &self.lines {
            out.push_str(&format!(
                "{}. {} ; {}\n",
                l.number, l.formula, l.justification
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Reason {
    #[error("expected line number {expected}, found {found}")]
    Numbering { expected: usize, found: usize },
    #[error("reference to line {0}, which is not an earlier line")]
    BadReference(usize),
    #[error("formula is in {found} but the system only covers {allowed}")]
    LanguageLevel { found: Level, allowed: Level },
    #[error("not a propositional tautology")]
    NotTautology,
    #[error("not an instance of {0}")]
    SchemaMismatch(AxiomName),
    #[error("{0} is not an axiom of this system")]
    AxiomNotInSystem(AxiomName),
    #[error("rule {} is not in this system", .0.name())]
    RuleNotInSystem(Rule),
    #[error("rule shape: {0}")]
    RuleShape(String),
    #[error("script is empty")]
    Empty,
    #[error("last line does not match the goal")]
    GoalMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof line {line}: {reason}")]
pub struct ProofError {
    pub line: usize,
    pub reason: Reason,
}

fn shape(msg: impl Into<String>) -> Reason {
    Reason::RuleShape(msg.into())
}

/// The ⊎2 premise `φ → ⋀_{i∈I} □_i(φ∧ψ)`, right-nested with ascending i.
pub fn ucl_rule_premise(idx: &Index, phi: &Formula, psi: &Formula) -> Formula {
    let parts = idx
        .iter()
        .map(|i| Formula::boxed(i, Formula::and(phi.clone(), psi.clone())))
        .collect();
    Formula::imp(
        phi.clone(),
        Formula::conj(parts).expect("index is nonempty"),
    )
}

fn check_line(sys: &super::System, lines: &[ProofLine], n: usize) -> Result<(), Reason> {
    let line = &lines[n - 1];
    let f = &line.formula;
    if f.level() > sys.id.level {
        return Err(Reason::LanguageLevel {
            found: f.level(),
            allowed: sys.id.level,
        });
    }
    for r in line.justification.references() {
        if r == 0 || r >= n {
            return Err(Reason::BadReference(r));
        }
    }
    let at = |r: usize| &lines[r - 1].formula;
    let need = |r: Rule| {
        if sys.has_rule(r) {
            Ok(())
        } else {
            Err(Reason::RuleNotInSystem(r))
        }
    };
    match &line.justification {
        Justification::Pc => {
            if !is_tautology(f) {
                return Err(Reason::NotTautology);
            }
        }
        Justification::Axiom(a) => {
            if !sys.has_axiom(*a) {
                return Err(Reason::AxiomNotInSystem(*a));
            }
            if AxiomSchema::get(*a).matches(f).is_none() {
                return Err(Reason::SchemaMismatch(*a));
            }
        }
        Justification::Mp(j, k) => {
            need(Rule::Mp)?;
            match at(*j) {
                Formula::Impl(a, b) if **a == *at(*k) && **b == *f => {}
                Formula::Impl(..) => {
                    return Err(shape(format!(
                        "line {j} is not `(line {k}) -> (this line)`"
                    )))
                }
                _ => return Err(shape(format!("line {j} is not an implication"))),
            }
        }
        Justification::Nec(i, j) => {
            need(Rule::Nec)?;
            if *f != Formula::boxed(*i, at(*j).clone()) {
                return Err(shape(format!("expected [{i}] applied to line {j}")));
            }
        }
        Justification::NecCap(idx, j) => {
            need(Rule::NecCap)?;
            if *f != Formula::cap(idx.clone(), at(*j).clone()) {
                return Err(shape(format!("expected [&{idx}] applied to line {j}")));
            }
        }
        Justification::UclRule(idx, j) => {
            need(Rule::UclInduction)?;
            let (phi, psi) = match f {
                Formula::Impl(a, b) => match &**b {
                    Formula::Ucl(k, psi) if k == idx => (a, psi),
                    _ => return Err(shape(format!("conclusion must be `phi -> [+{idx}]psi`"))),
                },
                _ => return Err(shape(format!("conclusion must be `phi -> [+{idx}]psi`"))),
            };
            if *at(*j) != ucl_rule_premise(idx, phi, psi) {
                return Err(shape(format!(
                    "line {j} must be `{}`",
                    ucl_rule_premise(idx, phi, psi)
                )));
            }
        }
    }
    Ok(())
}

/// Checks every line in order; reports the first failure.
pub fn check_proof(id: SystemId, script: &ProofScript) -> Result<(), ProofError> {
    let sys = assemble_system(id);
    if script.lines.is_empty() {
        return Err(ProofError {
            line: 0,
            reason: Reason::Empty,
        });
    }
    for (k, line) in script.lines.iter().enumerate() {
        let n = k + 1;
        if line.number != n {
            return Err(ProofError {
                line: n,
                reason: Reason::Numbering {
                    expected: n,
                    found: line.number,
                },
            });
        }
        check_line(&sys, &script.lines, n).map_err(|reason| ProofError { line: n, reason })?;
    }
    if let Some(goal) = &script.goal {
        let last = script.lines.last().expect("nonempty");
        if last.formula != *goal {
            return Err(ProofError {
                line: last.number,
                reason: Reason::GoalMismatch,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(sys: &str, text: &str) -> Result<(), ProofError> {
        check_proof(sys.parse().unwrap(), &ProofScript::parse(text).unwrap())
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            check("AX_S5_CAP", "1. [&1 2]p -> p ; AX TCAP\n2. p -> p ; PC\n"),
            Ok(())
        );
        let e = check("AX_K", "1. p ; PC\n2. p -> q ; PC\n3. q ; MP 2 1\n").unwrap_err();
        assert_eq!(
            e,
            ProofError {
                line: 1,
                reason: Reason::NotTautology
            }
        );
    }

    #[test]
    fn rejections() {
        let e = check("AX_D_CAP", "1. [&1 2]p -> ~[&1 2]~p ; AX DCAP").unwrap_err();
        assert_eq!(e.reason, Reason::AxiomNotInSystem(AxiomName::DCap));
        let e = check("AX_K", "1. [&1]p -> [&1]p ; PC").unwrap_err();
        assert!(matches!(e.reason, Reason::LanguageLevel { .. }));
        let e = check("AX_K", "1. p -> p ; PC\n2. [&1](p -> p) ; NCAP {1} 1").unwrap_err();
        assert!(matches!(e.reason, Reason::LanguageLevel { .. }));
        let e = check("AX_K", "1. p -> p ; PC\n3. [1](p -> p) ; N 1 1").unwrap_err();
        assert!(matches!(
            e.reason,
            Reason::Numbering {
                expected: 2,
                found: 3
            }
        ));
        let e = check("AX_K", "1. p -> p ; MP 1 1").unwrap_err();
        assert_eq!(e.reason, Reason::BadReference(1));
        let e = check("AX_K", "goal q -> q\n1. p -> p ; PC").unwrap_err();
        assert_eq!(e.reason, Reason::GoalMismatch);
        assert_eq!(
            check("AX_K", "# nothing\n").unwrap_err().reason,
            Reason::Empty
        );
    }

    #[test]
    fn necessitation() {
        let ok = "1. p -> p ; PC\n2. [2](p -> p) ; N 2 1\n3. [&1 2](p -> p) ; NCAP {1 2} 1\n";
        assert_eq!(check("AX_T_CAP", ok), Ok(()));
        let bad = "1. p -> p ; PC\n2. [1](p -> p) ; N 2 1\n";
        assert!(check("AX_T", bad).is_err());
    }

    #[test]
    fn ucl_rule() {
        // From  true -> [1](true & true)  infer  true -> [+1]true.
        let t = "(p -> p)";
        let script = format!(
            "1. {t} & {t} ; PC\n\
             2. [1]({t} & {t}) ; N 1 1\n\
             3. [1]({t} & {t}) -> {t} -> [1]({t} & {t}) ; PC\n\
             4. {t} -> [1]({t} & {t}) ; MP 3 2\n\
             5. {t} -> [+1]{t} ; UCL {{1}} 4\n"
        );
        assert_eq!(check("AX_CK", &script), Ok(()));
        assert!(check("AX_K_CAP", &script).is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "goal [+1 2]p -> p\n1. [&1 2]p -> p ; AX TCAP\n2. q -> q ; MP 1 1\n3. r ; UCL {1 2} 2\n";
        let s = ProofScript::parse(text).unwrap();
        assert_eq!(ProofScript::parse(&s.to_text()).unwrap(), s);
        assert_eq!(
            s.lines[2].justification,
            Justification::UclRule(Index::new([1, 2]).unwrap(), 2)
        );
    }

    #[test]
    fn script_syntax_errors() {
        assert_eq!(ProofScript::parse("\n1. p ; XX").unwrap_err().line, 2);
        assert!(ProofScript::parse("1 p ; PC").is_err());
        assert!(ProofScript::parse("1. p PC").is_err());
        assert!(ProofScript::parse("1. p ; NCAP {} 1").is_err());
        assert!(ProofScript::parse("1. p ; AX FOO").is_err());
    }
}
