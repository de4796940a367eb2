//! Formula language: propositions, `~`, `->`, `[i]` boxes, `[&I]` intersection
//! modalities and `[+I]` transitive-closure-of-union modalities.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use parser::{parse, ParseError};

/// A finite nonempty set of natural numbers, kept sorted and deduplicated so
/// that two indices with the same members compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("an index must have at least one member")]
pub struct EmptyIndex;

impl Index {
    pub fn new<I: IntoIterator<Item = u32>>(members: I) -> Result<Index, EmptyIndex> {
        let mut v: Vec<u32> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(EmptyIndex);
        }
        Ok(Index(v))
    }

    pub fn singleton(i: u32) -> Index {
        Index(vec![i])
    }

    pub fn members(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &Index) -> bool {
        self.0.iter().all(|i| other.contains(*i))
    }

    pub fn intersects(&self, other: &Index) -> bool {
        self.0.iter().any(|i| other.contains(*i))
    }

    pub fn union(&self, other: &Index) -> Index {
        Index::new(self.0.iter().chain(other.0.iter()).copied()).expect("union of nonempty sets")
    }

    /// All nonempty subsets, ordered by size and then lexicographically.
    pub fn nonempty_subsets(&self) -> Vec<Index> {
        let n = self.0.len();
        assert!(n < 32, "index too large to enumerate subsets");
        let mut out: Vec<Index> = (1u32..(1 << n))
            .map(|mask| {
                Index(
                    (0..n)
                        .filter(|b| mask & (1 << b) != 0)
                        .map(|b| self.0[b])
                        .collect(),
                )
            })
            .collect();
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Index::new(v).map_err(serde::de::Error::custom)
    }
}

/// Formula AST over the primitive connectives. Derived connectives are
/// expanded by the smart constructors below (and by the parser).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(String),
    Neg(Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Box(u32, Box<Formula>),
    Cap(Index, Box<Formula>),
    Ucl(Index, Box<Formula>),
}

/// Which of the three languages a formula belongs to (the least one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Basic,
    Cap,
    CapUcl,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Basic => "L",
            Level::Cap => "L(&)",
            Level::CapUcl => "L(&,+)",
        })
    }
}

/// Proposition used to spell `true` and `false` in the primitive connectives.
pub const VERUM_PROP: &str = "p";

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn boxed(i: u32, f: Formula) -> Formula {
        Formula::Box(i, Box::new(f))
    }

    pub fn cap(idx: Index, f: Formula) -> Formula {
        Formula::Cap(idx, Box::new(f))
    }

    pub fn ucl(idx: Index, f: Formula) -> Formula {
        Formula::Ucl(idx, Box::new(f))
    }

    /// `a & b` as `~(a -> ~b)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::neg(Formula::imp(a, Formula::neg(b)))
    }

    /// `a | b` as `~a -> b`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::imp(Formula::neg(a), b)
    }

    /// `a <-> b` as `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `true` as `p -> p`.
    pub fn top() -> Formula {
        Formula::imp(Formula::prop(VERUM_PROP), Formula::prop(VERUM_PROP))
    }

    /// `false` as `~(p -> p)`.
    pub fn bottom() -> Formula {
        Formula::neg(Formula::top())
    }

    /// Right-nested conjunction of a nonempty list.
    pub fn conj(mut parts: Vec<Formula>) -> Option<Formula> {
        let mut acc = parts.pop()?;
        while let Some(f) = parts.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    pub fn is_neg(&self) -> bool {
        matches!(self, Formula::Neg(_))
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Box(..) | Formula::Cap(..) | Formula::Ucl(..))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) => vec![],
            Formula::Neg(a) | Formula::Box(_, a) | Formula::Cap(_, a) | Formula::Ucl(_, a) => {
                vec![a]
            }
            Formula::Impl(a, b) => vec![a, b],
        }
    }

    /// Reflexive-transitive subformula set.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                stack.extend(f.children());
            }
        }
        out
    }

    /// The closure negation: strips one leading `~`, otherwise adds one.
    pub fn closure_negation(&self) -> Formula {
        match self {
            Formula::Neg(inner) => (**inner).clone(),
            other => Formula::neg(other.clone()),
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Prop(_) => 0,
            Formula::Neg(a) => a.modal_depth(),
            Formula::Impl(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box(_, a) | Formula::Cap(_, a) | Formula::Ucl(_, a) => 1 + a.modal_depth(),
        }
    }

    /// Number of connective and modality occurrences.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Prop(_) => 0,
            Formula::Impl(a, b) => 1 + a.connective_count() + b.connective_count(),
            Formula::Neg(a) | Formula::Box(_, a) | Formula::Cap(_, a) | Formula::Ucl(_, a) => {
                1 + a.connective_count()
            }
        }
    }

    pub fn size(&self) -> usize {
        self.connective_count() + self.props_count()
    }

    fn props_count(&self) -> usize {
        match self {
            Formula::Prop(_) => 1,
            _ => self.children().iter().map(|c| c.props_count()).sum(),
        }
    }

    pub fn level(&self) -> Level {
        let own = match self {
            Formula::Cap(..) => Level::Cap,
            Formula::Ucl(..) => Level::CapUcl,
            _ => Level::Basic,
        };
        self.children()
            .into_iter()
            .map(Formula::level)
            .fold(own, Level::max)
    }

    pub fn props(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Prop(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    /// Every index occurring in the formula; a box `[i]` contributes `{i}`.
    pub fn indices(&self) -> BTreeSet<Index> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Box(i, _) => Some(Index::singleton(i)),
                Formula::Cap(idx, _) | Formula::Ucl(idx, _) => Some(idx),
                _ => None,
            })
            .collect()
    }

    /// Union of all occurring indices, if any.
    pub fn index_union(&self) -> Option<Index> {
        let all: Vec<u32> = self.indices().iter().flat_map(|i| i.iter()).collect();
        Index::new(all).ok()
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    if matches!(g, Formula::Impl(..)) {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(p) => f.write_str(p),
            Formula::Neg(a) => {
                f.write_str("~")?;
                write_operand(f, a)
            }
            Formula::Impl(a, b) => {
                write_operand(f, a)?;
                write!(f, " -> {b}")
            }
            Formula::Box(i, a) => {
                write!(f, "[{i}]")?;
                write_operand(f, a)
            }
            Formula::Cap(idx, a) => {
                write!(f, "[&{idx}]")?;
                write_operand(f, a)
            }
            Formula::Ucl(idx, a) => {
                write!(f, "[+{idx}]")?;
                write_operand(f, a)
            }
        }
    }
}

/// Renders a formula in the concrete grammar; `parse(&render(f)) == f`.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::prop("p")
    }

    fn idx(v: &[u32]) -> Index {
        Index::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn index_is_canonical() {
        assert_eq!(idx(&[2, 1, 2]), idx(&[1, 2]));
        assert_eq!(Index::new(Vec::<u32>::new()), Err(EmptyIndex));
        assert_eq!(
            Formula::cap(idx(&[1, 2]), p()),
            Formula::cap(idx(&[2, 1]), p())
        );
    }

    #[test]
    fn subsets_are_ordered() {
        let subs: Vec<String> = idx(&[1, 2, 3])
            .nonempty_subsets()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(subs, ["1", "2", "3", "1 2", "1 3", "2 3", "1 2 3"]);
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&Formula::cap(idx(&[2, 1]), p())), "[&1 2]p");
        assert_eq!(render(&Formula::neg(p())), "~p");
        assert_eq!(
            render(&Formula::ucl(idx(&[1]), Formula::boxed(1, p()))),
            "[+1][1]p"
        );
        let nested = Formula::imp(Formula::imp(p(), p()), Formula::imp(p(), p()));
        assert_eq!(render(&nested), "(p -> p) -> p -> p");
        assert_eq!(render(&Formula::neg(Formula::imp(p(), p()))), "~(p -> p)");
    }

    #[test]
    fn subformula_examples() {
        assert_eq!(p().subformulas(), BTreeSet::from([p()]));
        let f = Formula::cap(idx(&[1, 2]), Formula::neg(p()));
        assert_eq!(
            f.subformulas(),
            BTreeSet::from([f.clone(), Formula::neg(p()), p()])
        );
        let q = Formula::prop("q");
        let g = Formula::imp(p(), q.clone());
        assert_eq!(g.subformulas(), BTreeSet::from([g.clone(), p(), q]));
    }

    #[test]
    fn closure_negation_examples() {
        assert_eq!(Formula::neg(p()).closure_negation(), p());
        assert_eq!(p().closure_negation(), Formula::neg(p()));
        let nn = Formula::neg(Formula::neg(p()));
        assert_eq!(nn.closure_negation(), Formula::neg(p()));
    }

    #[test]
    fn attributes() {
        let f = Formula::ucl(idx(&[1, 2]), Formula::boxed(3, p()));
        assert_eq!(f.level(), Level::CapUcl);
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.index_union(), Some(idx(&[1, 2, 3])));
        assert_eq!(Formula::boxed(1, p()).level(), Level::Basic);
        assert_eq!(Formula::cap(idx(&[1]), p()).level(), Level::Cap);
        assert_eq!(p().index_union(), None);
        assert_eq!(Formula::and(p(), p()).connective_count(), 3);
    }
}
