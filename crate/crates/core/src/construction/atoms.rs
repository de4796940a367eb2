use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::closure::{closure_with, ClosureSet, Cond6Reading, Signature};
use crate::semantics::{FrameClass, Relation};
use crate::syntax::{Formula, Index};

/// How ▷_I is read for S4 and S5.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RelationReading {
    /// Compare the ∩_{I'} sets for every nonempty `I' ⊆ I`.
    #[default]
    Repaired,
    /// Compare only the ∩_I sets.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Options {
    pub cond6: Cond6Reading,
    pub relation: RelationReading,
    /// Drop atoms that lack a witness among the remaining atoms.
    pub eliminate: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cond6: Cond6Reading::Repaired,
            relation: RelationReading::Repaired,
            eliminate: true,
        }
    }
}

/// An atom is a truth assignment to the non-negated closure members.
pub type Atom = FixedBitSet;

/// `(slot, polarity)`: the member holds in atom `a` iff `a[slot] == polarity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Literal {
    pub slot: usize,
    pub positive: bool,
}

impl Literal {
    pub fn holds(self, a: &Atom) -> bool {
        a.contains(self.slot) == self.positive
    }
}

/// A positive `∩_Iφ` or `⊎_Iφ` member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalEntry {
    pub slot: usize,
    pub index: Index,
    pub body: Literal,
}

/// Why an atom was eliminated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Elimination {
    NoCapWitness(String),
    NoUclWitness(String),
    NotSerial(u32),
}

/// Atoms of a signature with their canonical relations.
#[derive(Clone, Debug)]
pub struct AtomTable {
    sig: Signature,
    options: Options,
    closure: ClosureSet,
    positives: Vec<Formula>,
    literals: HashMap<Formula, Literal>,
    caps: Vec<ModalEntry>,
    ucls: Vec<ModalEntry>,
    subsets: Vec<Index>,
    coherent: usize,
    eliminated: Vec<(Atom, Elimination)>,
    atoms: Vec<Atom>,
    rels: Vec<Relation>,
    /// `ucl_dist[e][a]`: fewest ▷_{i} steps (i in the entry's index) from
    /// atom `a` to an atom lacking the body; `None` if unreachable.
    ucl_dist: Vec<Vec<Option<usize>>>,
}

fn literal_of(f: &Formula, slot: &HashMap<Formula, usize>) -> Literal {
    match f {
        Formula::Neg(g) => {
            let l = literal_of(g, slot);
            Literal {
                slot: l.slot,
                positive: !l.positive,
            }
        }
        _ => Literal {
            slot: slot[f],
            positive: true,
        },
    }
}

/// A constraint over slots, checked once its largest slot is assigned.
enum Rule {
    /// slot present iff literal `a` fails or literal `b` holds
    Impl { slot: usize, a: Literal, b: Literal },
    /// `a[x] ⇔ a[y]`
    Same(usize, usize),
    /// `a[x] ⇒ lit`
    Implies(usize, Literal),
}

impl Rule {
    fn ready_at(&self) -> usize {
        match self {
            Rule::Impl { slot, a, b } => (*slot).max(a.slot).max(b.slot),
            Rule::Same(x, y) => (*x).max(*y),
            Rule::Implies(x, l) => (*x).max(l.slot),
        }
    }

    fn ok(&self, a: &Atom) -> bool {
        match self {
            Rule::Impl { slot, a: x, b: y } => a.contains(*slot) == (!x.holds(a) || y.holds(a)),
            Rule::Same(x, y) => a.contains(*x) == a.contains(*y),
            Rule::Implies(x, l) => !a.contains(*x) || l.holds(a),
        }
    }
}

impl AtomTable {
    pub fn new(sig: &Signature) -> Self {
        AtomTable::with_options(sig, Options::default())
    }

    pub fn with_options(sig: &Signature, options: Options) -> Self {
        let closure = closure_with(sig, options.cond6);
        let mut positives: Vec<Formula> = closure.positives().cloned().collect();
        positives.sort_by_cached_key(|f| (f.size(), f.render()));
        let slot: HashMap<Formula, usize> = positives
            .iter()
            .enumerate()
            .map(|(k, f)| (f.clone(), k))
            .collect();
        let literals = closure
            .members()
            .iter()
            .map(|f| (f.clone(), literal_of(f, &slot)))
            .collect();
        let mut table = AtomTable {
            sig: sig.clone(),
            options,
            closure,
            positives,
            literals,
            caps: Vec::new(),
            ucls: Vec::new(),
            subsets: sig.iota().nonempty_subsets(),
            coherent: 0,
            eliminated: Vec::new(),
            atoms: Vec::new(),
            rels: Vec::new(),
            ucl_dist: Vec::new(),
        };
        for (k, f) in table.positives.iter().enumerate() {
            match f {
                Formula::Cap(idx, body) => table.caps.push(ModalEntry {
                    slot: k,
                    index: idx.clone(),
                    body: table.literals[&**body],
                }),
                Formula::Ucl(idx, body) => table.ucls.push(ModalEntry {
                    slot: k,
                    index: idx.clone(),
                    body: table.literals[&**body],
                }),
                _ => {}
            }
        }
        let candidates = table.enumerate_coherent();
        table.coherent = candidates.len();
        table.eliminate(candidates);
        table
    }

    fn rules(&self) -> Vec<Rule> {
        let lit = |f: &Formula| self.literals[f];
        let has = |f: &Formula| self.closure.contains(f);
        let reflexive = self.sig.frame().is_reflexive();
        let mut rules = Vec::new();
        for (k, f) in self.positives.iter().enumerate() {
            match f {
                Formula::Impl(a, b) => rules.push(Rule::Impl {
                    slot: k,
                    a: lit(a),
                    b: lit(b),
                }),
                Formula::Box(i, body) => {
                    let cap = Formula::cap(Index::singleton(*i), (**body).clone());
                    if has(&cap) {
                        rules.push(Rule::Same(k, lit(&cap).slot));
                    }
                }
                Formula::Cap(idx, body) => {
                    for j in &self.subsets {
                        let wider = Formula::cap(j.clone(), (**body).clone());
                        if idx.is_subset(j) && idx != j && has(&wider) {
                            rules.push(Rule::Implies(k, lit(&wider)));
                        }
                    }
                    if reflexive {
                        rules.push(Rule::Implies(k, lit(body)));
                    }
                }
                Formula::Ucl(idx, body) => {
                    for j in &self.subsets {
                        let guard = Formula::cap(j.clone(), f.clone());
                        if j.intersects(idx) && has(&guard) {
                            rules.push(Rule::Implies(k, lit(&guard)));
                        }
                    }
                    if reflexive {
                        rules.push(Rule::Implies(k, lit(body)));
                    }
                }
                _ => {}
            }
        }
        rules
    }

    /// All locally coherent assignments, in lexicographic slot order with
    /// "absent" before "present".
    fn enumerate_coherent(&self) -> Vec<Atom> {
        let n = self.positives.len();
        let mut by_slot: Vec<Vec<Rule>> = (0..n).map(|_| Vec::new()).collect();
        for r in self.rules() {
            by_slot[r.ready_at()].push(r);
        }
        let mut out = Vec::new();
        let mut cur = FixedBitSet::with_capacity(n);
        fn go(k: usize, cur: &mut Atom, by_slot: &[Vec<Rule>], out: &mut Vec<Atom>) {
            if k == by_slot.len() {
                out.push(cur.clone());
                return;
            }
            for v in [false, true] {
                cur.set(k, v);
                if by_slot[k].iter().all(|r| r.ok(cur)) {
                    go(k + 1, cur, by_slot, out);
                }
            }
            cur.set(k, false);
        }
        go(0, &mut cur, &by_slot, &mut out);
        out
    }

    /// `Φ ▷_I Ψ` for the signature's logic.
    pub fn related(&self, idx: &Index, phi: &Atom, psi: &Atom) -> bool {
        let content = |from: &Atom, to: &Atom| {
            self.caps
                .iter()
                .filter(|e| e.index == *idx)
                .all(|e| !from.contains(e.slot) || e.body.holds(to))
        };
        let caps_within = |sub: &Index, from: &Atom, to: &Atom| {
            self.caps
                .iter()
                .filter(|e| e.index == *sub)
                .all(|e| !from.contains(e.slot) || to.contains(e.slot))
        };
        let scope: Vec<Index> = match self.options.relation {
            RelationReading::Repaired => idx.nonempty_subsets(),
            RelationReading::Literal => vec![idx.clone()],
        };
        let transfer = |from: &Atom, to: &Atom| {
            self.ucls
                .iter()
                .filter(|e| e.index.intersects(idx))
                .all(|e| !from.contains(e.slot) || (to.contains(e.slot) && e.body.holds(to)))
        };
        let frame = self.sig.frame();
        let base = match frame {
            FrameClass::K | FrameClass::D | FrameClass::T => content(phi, psi),
            FrameClass::B => content(phi, psi) && content(psi, phi),
            FrameClass::S4 => scope.iter().all(|j| caps_within(j, phi, psi)),
            FrameClass::S5 => scope
                .iter()
                .all(|j| caps_within(j, phi, psi) && caps_within(j, psi, phi)),
        };
        let symmetric = matches!(frame, FrameClass::B | FrameClass::S5);
        base && transfer(phi, psi) && (!symmetric || transfer(psi, phi))
    }

    fn relation_over(&self, idx: &Index, atoms: &[Atom]) -> Relation {
        let n = atoms.len();
        let succ = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| self.related(idx, &atoms[a], &atoms[b]))
                    .collect()
            })
            .collect();
        Relation::from_successors(succ)
    }

    fn subset_pos(&self, idx: &Index) -> usize {
        self.subsets
            .iter()
            .position(|j| j == idx)
            .expect("index is a subset of iota")
    }

    /// Shortest distances, per ⊎ entry, to an atom lacking the body.
    fn distances(
        &self,
        atoms: &[Atom],
        rels: &[Relation],
        alive: &[bool],
    ) -> Vec<Vec<Option<usize>>> {
        let n = atoms.len();
        self.ucls
            .iter()
            .map(|e| {
                // backward BFS over the union of ▷_{i}, i ∈ I
                let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
                for i in e.index.iter() {
                    let r = &rels[self.subset_pos(&Index::singleton(i))];
                    for (a, b) in r.pairs() {
                        if alive[a] && alive[b] {
                            pred[b].push(a);
                        }
                    }
                }
                let mut dist = vec![None; n];
                let mut queue = VecDeque::new();
                for a in 0..n {
                    if alive[a] && !e.body.holds(&atoms[a]) {
                        dist[a] = Some(0);
                        queue.push_back(a);
                    }
                }
                while let Some(b) = queue.pop_front() {
                    let d = dist[b].expect("queued");
                    for &a in &pred[b] {
                        if dist[a].is_none() {
                            dist[a] = Some(d + 1);
                            queue.push_back(a);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    /// Steps needed below a state with tail `a` to refute the ⊎ entry `e`,
    /// given `dist` for that entry. `None` if impossible.
    fn need_for(
        &self,
        e: &ModalEntry,
        a: usize,
        atoms: &[Atom],
        rels: &[Relation],
        dist: &[Option<usize>],
        alive: &[bool],
    ) -> Option<usize> {
        if self.sig.frame().is_reflexive() && !e.body.holds(&atoms[a]) {
            return Some(0);
        }
        e.index
            .iter()
            .flat_map(|i| {
                rels[self.subset_pos(&Index::singleton(i))]
                    .successors(a)
                    .iter()
                    .copied()
            })
            .filter(|&b| alive[b])
            .filter_map(|b| dist[b])
            .min()
            .map(|d| d + 1)
    }

    fn defect(
        &self,
        a: usize,
        atoms: &[Atom],
        rels: &[Relation],
        dist: &[Vec<Option<usize>>],
        alive: &[bool],
    ) -> Option<Elimination> {
        let phi = &atoms[a];
        for e in &self.caps {
            if phi.contains(e.slot) {
                continue;
            }
            let r = &rels[self.subset_pos(&e.index)];
            if !r
                .successors(a)
                .iter()
                .any(|&b| alive[b] && !e.body.holds(&atoms[b]))
            {
                return Some(Elimination::NoCapWitness(self.positives[e.slot].render()));
            }
        }
        for (k, e) in self.ucls.iter().enumerate() {
            if !phi.contains(e.slot) && self.need_for(e, a, atoms, rels, &dist[k], alive).is_none()
            {
                return Some(Elimination::NoUclWitness(self.positives[e.slot].render()));
            }
        }
        if self.sig.frame() == FrameClass::D {
            for i in self.sig.iota().iter() {
                let r = &rels[self.subset_pos(&Index::singleton(i))];
                if !r.successors(a).iter().any(|&b| alive[b]) {
                    return Some(Elimination::NotSerial(i));
                }
            }
        }
        None
    }

    fn eliminate(&mut self, candidates: Vec<Atom>) {
        let rels: Vec<Relation> = self
            .subsets
            .iter()
            .map(|j| self.relation_over(j, &candidates))
            .collect();
        let n = candidates.len();
        let mut alive = vec![true; n];
        let mut reasons: Vec<Option<Elimination>> = vec![None; n];
        if self.options.eliminate {
            loop {
                let dist = self.distances(&candidates, &rels, &alive);
                let mut changed = false;
                for a in 0..n {
                    if !alive[a] {
                        continue;
                    }
                    if let Some(why) = self.defect(a, &candidates, &rels, &dist, &alive) {
                        alive[a] = false;
                        reasons[a] = Some(why);
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&a| alive[a]).collect();
        let mut renumber = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            renumber[old] = new;
        }
        self.rels = rels
            .iter()
            .map(|r| {
                Relation::from_successors(
                    keep.iter()
                        .map(|&a| {
                            r.successors(a)
                                .iter()
                                .filter(|&&b| alive[b])
                                .map(|&b| renumber[b])
                                .collect()
                        })
                        .collect(),
                )
            })
            .collect();
        self.eliminated = (0..n)
            .filter_map(|a| reasons[a].take().map(|r| (candidates[a].clone(), r)))
            .collect();
        self.atoms = keep.iter().map(|&a| candidates[a].clone()).collect();
        let all_alive = vec![true; self.atoms.len()];
        self.ucl_dist = self.distances(&self.atoms, &self.rels, &all_alive);
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn options(&self) -> Options {
        self.options
    }

    pub fn closure(&self) -> &ClosureSet {
        &self.closure
    }

    /// Non-negated closure members in slot order.
    pub fn positives(&self) -> &[Formula] {
        &self.positives
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Locally coherent candidates before elimination.
    pub fn coherent_count(&self) -> usize {
        self.coherent
    }

    pub fn eliminated(&self) -> &[(Atom, Elimination)] {
        &self.eliminated
    }

    pub fn cap_entries(&self) -> &[ModalEntry] {
        &self.caps
    }

    pub fn ucl_entries(&self) -> &[ModalEntry] {
        &self.ucls
    }

    /// Nonempty subsets of ι, in the order relations are stored.
    pub fn subsets(&self) -> &[Index] {
        &self.subsets
    }

    pub fn literal(&self, f: &Formula) -> Option<Literal> {
        self.literals.get(f).copied()
    }

    /// Membership of a closure formula; `None` outside the closure.
    pub fn contains(&self, atom: usize, f: &Formula) -> Option<bool> {
        self.literal(f).map(|l| l.holds(&self.atoms[atom]))
    }

    /// Members of an atom (negated ones included), sorted by rendering.
    pub fn members(&self, atom: usize) -> Vec<Formula> {
        let a = &self.atoms[atom];
        let mut out: Vec<Formula> = self
            .closure
            .members()
            .iter()
            .filter(|f| self.literals[*f].holds(a))
            .cloned()
            .collect();
        out.sort_by_cached_key(Formula::render);
        out
    }

    /// ▷_I over the surviving atoms.
    pub fn relation(&self, idx: &Index) -> &Relation {
        &self.rels[self.subset_pos(idx)]
    }

    /// Fewest ▷ steps from `atom` to an atom lacking the body of ⊎ entry `k`.
    pub fn ucl_distance(&self, k: usize, atom: usize) -> Option<usize> {
        self.ucl_dist[k][atom]
    }

    /// Depth needed below a state with this tail to refute ⊎ entry `k`
    /// (`Some(0)` when the state itself serves, in reflexive logics).
    pub fn ucl_need(&self, k: usize, atom: usize) -> Option<usize> {
        let alive = vec![true; self.atoms.len()];
        self.need_for(
            &self.ucls[k],
            atom,
            &self.atoms,
            &self.rels,
            &self.ucl_dist[k],
            &alive,
        )
    }

    /// Largest `ucl_need` over atoms lacking a ⊎ member; 0 if there is none.
    pub fn ucl_witness_depth(&self) -> usize {
        let mut w = 0;
        for (k, e) in self.ucls.iter().enumerate() {
            for a in 0..self.atoms.len() {
                if !self.atoms[a].contains(e.slot) {
                    w = w.max(self.ucl_need(k, a).expect("survivors have witnesses"));
                }
            }
        }
        w
    }

    /// Atoms containing `f`.
    pub fn atoms_with(&self, f: &Formula) -> Vec<usize> {
        match self.literal(f) {
            Some(l) => (0..self.atoms.len())
                .filter(|&a| l.holds(&self.atoms[a]))
                .collect(),
            None => Vec::new(),
        }
    }
}

/// Surviving atoms of `sig`, in their deterministic order.
pub fn enumerate_atoms(sig: &Signature) -> AtomTable {
    AtomTable::new(sig)
}

/// `▷_I` on the atoms of `table`.
pub fn canonical_relation(table: &AtomTable, idx: &Index) -> Relation {
    table.relation(idx).clone()
}
