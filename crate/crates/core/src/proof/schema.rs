use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::syntax::{Formula, Index};

/// Named axiom schemata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomName {
    K,
    D,
    T,
    B,
    Four,
    Five,
    KCap,
    DCap,
    TCap,
    FourCap,
    BCap,
    FiveCap,
    Cap1,
    Cap2,
    KUcl,
    DUcl,
    TUcl,
    FourUcl,
    BUcl,
    FiveUcl,
    Ucl1,
}

impl AxiomName {
    pub const ALL: [AxiomName; 21] = [
        AxiomName::K,
        AxiomName::D,
        AxiomName::T,
        AxiomName::B,
        AxiomName::Four,
        AxiomName::Five,
        AxiomName::KCap,
        AxiomName::DCap,
        AxiomName::TCap,
        AxiomName::FourCap,
        AxiomName::BCap,
        AxiomName::FiveCap,
        AxiomName::Cap1,
        AxiomName::Cap2,
        AxiomName::KUcl,
        AxiomName::DUcl,
        AxiomName::TUcl,
        AxiomName::FourUcl,
        AxiomName::BUcl,
        AxiomName::FiveUcl,
        AxiomName::Ucl1,
    ];

    pub fn symbol(self) -> &'static str {
        use AxiomName::*;
        match self {
            K => "K",
            D => "D",
            T => "T",
            B => "B",
            Four => "4",
            Five => "5",
            KCap => "K∩",
            DCap => "D∩",
            TCap => "T∩",
            FourCap => "4∩",
            BCap => "B∩",
            FiveCap => "5∩",
            Cap1 => "∩1",
            Cap2 => "∩2",
            KUcl => "K⊎",
            DUcl => "D⊎",
            TUcl => "T⊎",
            FourUcl => "4⊎",
            BUcl => "B⊎",
            FiveUcl => "5⊎",
            Ucl1 => "⊎1",
        }
    }

    /// ASCII spelling used in proof scripts.
    pub fn ascii(self) -> String {
        self.symbol().replace('∩', "CAP").replace('⊎', "UCL")
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s
            .to_ascii_uppercase()
            .replace('∩', "CAP")
            .replace('⊎', "UCL");
        AxiomName::ALL
            .into_iter()
            .find(|a| a.ascii() == norm)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

/// Pattern over formula metavariables (`Phi`), single-index metavariables
/// and index-set metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Phi(u8),
    Neg(Box<Pattern>),
    Impl(Box<Pattern>, Box<Pattern>),
    Box(u8, Box<Pattern>),
    /// `∩_{i}` for a single-index metavariable `i`.
    CapOf(u8, Box<Pattern>),
    Cap(u8, Box<Pattern>),
    Ucl(u8, Box<Pattern>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    None,
    /// set var ⊆ set var
    Subset(u8, SideVar),
    /// index var ∈ set var
    Member(u8, u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideVar(pub u8);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: AxiomName,
    pub pattern: Pattern,
    pub side: SideCondition,
}

/// Metavariable assignment produced by matching.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pub formulas: BTreeMap<u8, Formula>,
    pub singles: BTreeMap<u8, u32>,
    pub sets: BTreeMap<u8, Index>,
}

const PHI: u8 = 0;
const PSI: u8 = 1;
const I: u8 = 0;
const J: u8 = 1;
const SI: u8 = 0;

mod pat {
    use super::Pattern;

    pub fn phi(k: u8) -> Pattern {
        Pattern::Phi(k)
    }
    pub fn neg(p: Pattern) -> Pattern {
        Pattern::Neg(Box::new(p))
    }
    pub fn imp(a: Pattern, b: Pattern) -> Pattern {
        Pattern::Impl(Box::new(a), Box::new(b))
    }
    pub fn and(a: Pattern, b: Pattern) -> Pattern {
        neg(imp(a, neg(b)))
    }
    pub fn iff(a: Pattern, b: Pattern) -> Pattern {
        and(imp(a.clone(), b.clone()), imp(b, a))
    }
}

type Wrap = fn(Pattern) -> Pattern;

fn family(m: Wrap) -> [Pattern; 6] {
    use pat::*;
    [
        // K
        imp(m(imp(phi(PHI), phi(PSI))), imp(m(phi(PHI)), m(phi(PSI)))),
        // D
        imp(m(phi(PHI)), neg(m(neg(phi(PHI))))),
        // T
        imp(m(phi(PHI)), phi(PHI)),
        // 4
        imp(m(phi(PHI)), m(m(phi(PHI)))),
        // B
        imp(neg(phi(PHI)), m(neg(m(phi(PHI))))),
        // 5
        imp(neg(m(phi(PHI))), m(neg(m(phi(PHI))))),
    ]
}

fn boxed(p: Pattern) -> Pattern {
    Pattern::Box(SI, Box::new(p))
}

fn capped(p: Pattern) -> Pattern {
    Pattern::Cap(I, Box::new(p))
}

fn ucled(p: Pattern) -> Pattern {
    Pattern::Ucl(I, Box::new(p))
}

impl AxiomSchema {
    pub fn get(name: AxiomName) -> AxiomSchema {
        use pat::*;
        use AxiomName::*;
        let pick = |m: Wrap, k: usize| family(m)[k].clone();
        let (pattern, side) = match name {
            K => (pick(boxed, 0), SideCondition::None),
            D => (pick(boxed, 1), SideCondition::None),
            T => (pick(boxed, 2), SideCondition::None),
            Four => (pick(boxed, 3), SideCondition::None),
            B => (pick(boxed, 4), SideCondition::None),
            Five => (pick(boxed, 5), SideCondition::None),
            KCap => (pick(capped, 0), SideCondition::None),
            DCap => (pick(capped, 1), SideCondition::None),
            TCap => (pick(capped, 2), SideCondition::None),
            FourCap => (pick(capped, 3), SideCondition::None),
            BCap => (pick(capped, 4), SideCondition::None),
            FiveCap => (pick(capped, 5), SideCondition::None),
            KUcl => (pick(ucled, 0), SideCondition::None),
            DUcl => (pick(ucled, 1), SideCondition::None),
            TUcl => (pick(ucled, 2), SideCondition::None),
            FourUcl => (pick(ucled, 3), SideCondition::None),
            BUcl => (pick(ucled, 4), SideCondition::None),
            FiveUcl => (pick(ucled, 5), SideCondition::None),
            Cap1 => (
                iff(
                    Pattern::Box(SI, Box::new(phi(PHI))),
                    Pattern::CapOf(SI, Box::new(phi(PHI))),
                ),
                SideCondition::None,
            ),
            Cap2 => (
                imp(
                    Pattern::Cap(I, Box::new(phi(PHI))),
                    Pattern::Cap(J, Box::new(phi(PHI))),
                ),
                SideCondition::Subset(I, SideVar(J)),
            ),
            Ucl1 => (
                imp(
                    Pattern::Ucl(I, Box::new(phi(PHI))),
                    Pattern::Box(
                        SI,
                        Box::new(and(phi(PHI), Pattern::Ucl(I, Box::new(phi(PHI))))),
                    ),
                ),
                SideCondition::Member(SI, I),
            ),
        };
        AxiomSchema {
            name,
            pattern,
            side,
        }
    }

    /// Matches `f` against the schema; on success, substituting back gives `f`.
    pub fn matches(&self, f: &Formula) -> Option<Substitution> {
        let mut sub = Substitution::default();
        if !match_pattern(&self.pattern, f, &mut sub) {
            return None;
        }
        let ok = match self.side {
            SideCondition::None => true,
            SideCondition::Subset(a, SideVar(b)) => match (sub.sets.get(&a), sub.sets.get(&b)) {
                (Some(x), Some(y)) => x.is_subset(y),
                _ => false,
            },
            SideCondition::Member(i, set) => match (sub.singles.get(&i), sub.sets.get(&set)) {
                (Some(i), Some(s)) => s.contains(*i),
                _ => false,
            },
        };
        ok.then_some(sub)
    }

    /// Instantiates the schema. Returns `None` if a metavariable is unbound or
    /// the side condition fails.
    pub fn instantiate(&self, sub: &Substitution) -> Option<Formula> {
        let side_ok = match self.side {
            SideCondition::None => true,
            SideCondition::Subset(a, SideVar(b)) => sub.sets.get(&a)?.is_subset(sub.sets.get(&b)?),
            SideCondition::Member(i, s) => sub.sets.get(&s)?.contains(*sub.singles.get(&i)?),
        };
        if !side_ok {
            return None;
        }
        build(&self.pattern, sub)
    }

    /// Formula, single-index and set metavariables the schema uses.
    pub fn metavariables(&self) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let (mut f, mut s, mut t) = (Vec::new(), Vec::new(), Vec::new());
        collect_vars(&self.pattern, &mut f, &mut s, &mut t);
        for v in [&mut f, &mut s, &mut t] {
            v.sort_unstable();
            v.dedup();
        }
        (f, s, t)
    }
}

fn collect_vars(p: &Pattern, f: &mut Vec<u8>, s: &mut Vec<u8>, t: &mut Vec<u8>) {
    match p {
        Pattern::Phi(k) => f.push(*k),
        Pattern::Neg(a) => collect_vars(a, f, s, t),
        Pattern::Impl(a, b) => {
            collect_vars(a, f, s, t);
            collect_vars(b, f, s, t);
        }
        Pattern::Box(i, a) | Pattern::CapOf(i, a) => {
            s.push(*i);
            collect_vars(a, f, s, t);
        }
        Pattern::Cap(k, a) | Pattern::Ucl(k, a) => {
            t.push(*k);
            collect_vars(a, f, s, t);
        }
    }
}

fn bind<K: Ord + Copy, V: PartialEq + Clone>(map: &mut BTreeMap<K, V>, k: K, v: &V) -> bool {
    match map.get(&k) {
        Some(old) => old == v,
        None => {
            map.insert(k, v.clone());
            true
        }
    }
}

fn match_pattern(p: &Pattern, f: &Formula, sub: &mut Substitution) -> bool {
    match (p, f) {
        (Pattern::Phi(k), _) => bind(&mut sub.formulas, *k, f),
        (Pattern::Neg(a), Formula::Neg(x)) => match_pattern(a, x, sub),
        (Pattern::Impl(a, b), Formula::Impl(x, y)) => {
            match_pattern(a, x, sub) && match_pattern(b, y, sub)
        }
        (Pattern::Box(i, a), Formula::Box(j, x)) => {
            bind(&mut sub.singles, *i, j) && match_pattern(a, x, sub)
        }
        (Pattern::CapOf(i, a), Formula::Cap(idx, x)) => {
            idx.is_singleton()
                && bind(&mut sub.singles, *i, &idx.members()[0])
                && match_pattern(a, x, sub)
        }
        (Pattern::Cap(k, a), Formula::Cap(idx, x)) => {
            bind(&mut sub.sets, *k, idx) && match_pattern(a, x, sub)
        }
        (Pattern::Ucl(k, a), Formula::Ucl(idx, x)) => {
            bind(&mut sub.sets, *k, idx) && match_pattern(a, x, sub)
        }
        _ => false,
    }
}

fn build(p: &Pattern, sub: &Substitution) -> Option<Formula> {
    Some(match p {
        Pattern::Phi(k) => sub.formulas.get(k)?.clone(),
        Pattern::Neg(a) => Formula::neg(build(a, sub)?),
        Pattern::Impl(a, b) => Formula::imp(build(a, sub)?, build(b, sub)?),
        Pattern::Box(i, a) => Formula::boxed(*sub.singles.get(i)?, build(a, sub)?),
        Pattern::CapOf(i, a) => {
            Formula::cap(Index::singleton(*sub.singles.get(i)?), build(a, sub)?)
        }
        Pattern::Cap(k, a) => Formula::cap(sub.sets.get(k)?.clone(), build(a, sub)?),
        Pattern::Ucl(k, a) => Formula::ucl(sub.sets.get(k)?.clone(), build(a, sub)?),
    })
}

/// Convenience: match by axiom name.
pub fn match_axiom(name: AxiomName, f: &Formula) -> Option<Substitution> {
    AxiomSchema::get(name).matches(f)
}
