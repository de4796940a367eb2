//! Exhaustive search over small models, used as an independent oracle.
//!
//! Partial models carry, per index, a definite and a possible successor mask
//! for every state, and a partial valuation. Formulas are evaluated to an
//! interval `lo ⊆ truth ⊆ hi` that holds in every completion, so a branch is
//! cut as soon as the root leaves `hi` and accepted once it enters `lo`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use super::{UnsatEvidence, Verdict, Witness};
use crate::proof::is_tautology;
use crate::semantics::{FrameClass, KripkeModel, Relation};
use crate::syntax::Formula;

pub const MAX_BOUND: usize = 8;
/// Preorders are enumerated by filtering all relations, which stops being
/// cheap past five states.
pub const MAX_S4_STATES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteOptions {
    pub bound: usize,
    pub node_budget: u64,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            bound: 4,
            node_budget: 20_000_000,
        }
    }
}

type Rows = [u8; MAX_BOUND];

#[derive(Clone, Debug)]
enum Node {
    Prop(usize),
    Neg(usize),
    Impl(usize, usize),
    Cap(Vec<usize>, usize),
    Ucl(Vec<usize>, usize),
}

struct Compiled {
    nodes: Vec<Node>,
    /// Subformulas that are propositional tautologies or contradictions.
    fixed: Vec<Option<bool>>,
    props: Vec<String>,
    indices: Vec<u32>,
}

fn compile(f: &Formula) -> Compiled {
    let props: Vec<String> = f.props().into_iter().collect();
    let mut indices: Vec<u32> = f
        .index_union()
        .map(|i| i.members().to_vec())
        .unwrap_or_default();
    if indices.is_empty() {
        indices.push(1);
    }
    let mut c = Compiled {
        nodes: Vec::new(),
        fixed: Vec::new(),
        props,
        indices,
    };
    let mut seen = HashMap::new();
    add(f, &mut c, &mut seen);
    c
}

fn add<'f>(f: &'f Formula, c: &mut Compiled, seen: &mut HashMap<&'f Formula, usize>) -> usize {
    if let Some(&k) = seen.get(f) {
        return k;
    }
    let pos = |i: u32, c: &Compiled| c.indices.iter().position(|&j| j == i).expect("index of f");
    let node = match f {
        Formula::Prop(p) => Node::Prop(c.props.iter().position(|q| q == p).expect("prop of f")),
        Formula::Neg(a) => Node::Neg(add(a, c, seen)),
        Formula::Impl(a, b) => {
            let a = add(a, c, seen);
            Node::Impl(a, add(b, c, seen))
        }
        Formula::Box(i, a) => Node::Cap(vec![pos(*i, c)], add(a, c, seen)),
        Formula::Cap(idx, a) => Node::Cap(idx.iter().map(|i| pos(i, c)).collect(), add(a, c, seen)),
        Formula::Ucl(idx, a) => Node::Ucl(idx.iter().map(|i| pos(i, c)).collect(), add(a, c, seen)),
    };
    let fixed = if matches!(node, Node::Prop(_)) {
        None
    } else if is_tautology(f) {
        Some(true)
    } else if is_tautology(&Formula::neg(f.clone())) {
        Some(false)
    } else {
        None
    };
    c.nodes.push(node);
    c.fixed.push(fixed);
    seen.insert(f, c.nodes.len() - 1);
    c.nodes.len() - 1
}

/// Strict transitive closure of a relation given as rows.
fn closure(n: usize, rows: &Rows) -> Rows {
    let mut r = *rows;
    for k in 0..n {
        for s in 0..n {
            if r[s] >> k & 1 == 1 {
                r[s] |= r[k];
            }
        }
    }
    r
}

fn preorders(n: usize) -> &'static [Rows] {
    static CACHE: OnceLock<Vec<Vec<Rows>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=MAX_S4_STATES)
            .map(|n| {
                let off: Vec<(usize, usize)> = (0..n)
                    .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
                    .collect();
                let mut out = Vec::new();
                for mask in 0u32..1 << off.len() {
                    let mut rows = [0u8; MAX_BOUND];
                    for (s, row) in rows.iter_mut().enumerate().take(n) {
                        *row = 1 << s;
                    }
                    for (b, &(s, t)) in off.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            rows[s] |= 1 << t;
                        }
                    }
                    if closure(n, &rows) == rows {
                        out.push(rows);
                    }
                }
                out
            })
            .collect()
    });
    &all[n]
}

fn partitions(n: usize) -> &'static [Rows] {
    static CACHE: OnceLock<Vec<Vec<Rows>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=MAX_BOUND)
            .map(|n| {
                let mut out = Vec::new();
                let mut block = vec![0usize; n];
                rgs(n, 0, 0, &mut block, &mut out);
                out
            })
            .collect()
    });
    &all[n]
}

/// Restricted growth strings, one per set partition.
fn rgs(n: usize, k: usize, max: usize, block: &mut Vec<usize>, out: &mut Vec<Rows>) {
    if k == n {
        let mut rows = [0u8; MAX_BOUND];
        for s in 0..n {
            for t in 0..n {
                if block[s] == block[t] {
                    rows[s] |= 1 << t;
                }
            }
        }
        out.push(rows);
        return;
    }
    for b in 0..=max.min(k) {
        block[k] = b;
        rgs(n, k + 1, max.max(b + 1), block, out);
    }
}

#[derive(Clone, Copy, Debug)]
enum Var {
    Val { p: usize, s: usize },
    Edge { i: usize, s: usize, t: usize },
    Sym { i: usize, s: usize, t: usize },
    Whole { i: usize },
}

struct BudgetExceeded;

struct Search<'a> {
    n: usize,
    full: u8,
    frame: FrameClass,
    c: &'a Compiled,
    structures: &'a [Rows],
    known: Vec<u8>,
    truth: Vec<u8>,
    def: Vec<Rows>,
    poss: Vec<Rows>,
    vars: Vec<Var>,
    assigned: Vec<bool>,
    visited: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(n: usize, frame: FrameClass, c: &'a Compiled, budget: u64) -> Self {
        let full = ((1u16 << n) - 1) as u8;
        let k = c.indices.len();
        let mut ident = [0u8; MAX_BOUND];
        for (s, row) in ident.iter_mut().enumerate().take(n) {
            *row = 1 << s;
        }
        let base_def = if frame.is_reflexive() {
            ident
        } else {
            [0; MAX_BOUND]
        };
        let mut all = [0u8; MAX_BOUND];
        all[..n].fill(full);
        let structures: &[Rows] = match frame {
            FrameClass::S4 => preorders(n),
            FrameClass::S5 => partitions(n),
            _ => &[],
        };
        let mut vars = Vec::new();
        if !structures.is_empty() {
            vars.extend((0..k).map(|i| Var::Whole { i }));
        }
        for s in 0..n {
            vars.extend((0..c.props.len()).map(|p| Var::Val { p, s }));
        }
        for s in 0..n {
            for i in 0..k {
                for t in 0..n {
                    match frame {
                        FrameClass::K | FrameClass::D => vars.push(Var::Edge { i, s, t }),
                        FrameClass::T if t != s => vars.push(Var::Edge { i, s, t }),
                        FrameClass::B if t > s => vars.push(Var::Sym { i, s, t }),
                        _ => {}
                    }
                }
            }
        }
        let assigned = vec![false; vars.len()];
        Search {
            n,
            full,
            frame,
            c,
            structures,
            known: vec![0; c.props.len()],
            truth: vec![0; c.props.len()],
            def: vec![base_def; k],
            poss: vec![all; k],
            vars,
            assigned,
            visited: 0,
            budget,
        }
    }

    fn domain(&self, v: Var) -> usize {
        match v {
            Var::Whole { .. } => self.structures.len(),
            _ => 2,
        }
    }

    fn apply(&mut self, v: Var, choice: usize) {
        match v {
            Var::Val { p, s } => {
                self.known[p] |= 1 << s;
                if choice == 0 {
                    self.truth[p] |= 1 << s;
                }
            }
            Var::Edge { i, s, t } => {
                if choice == 0 {
                    self.poss[i][s] &= !(1 << t);
                } else {
                    self.def[i][s] |= 1 << t;
                }
            }
            Var::Sym { i, s, t } => {
                if choice == 0 {
                    self.poss[i][s] &= !(1 << t);
                    self.poss[i][t] &= !(1 << s);
                } else {
                    self.def[i][s] |= 1 << t;
                    self.def[i][t] |= 1 << s;
                }
            }
            Var::Whole { i } => {
                self.def[i] = self.structures[choice];
                self.poss[i] = self.structures[choice];
            }
        }
    }

    fn undo(&mut self, v: Var) {
        match v {
            Var::Val { p, s } => {
                self.known[p] &= !(1 << s);
                self.truth[p] &= !(1 << s);
            }
            Var::Edge { i, s, t } => {
                self.poss[i][s] |= 1 << t;
                self.def[i][s] &= !(1 << t);
            }
            Var::Sym { i, s, t } => {
                self.poss[i][s] |= 1 << t;
                self.poss[i][t] |= 1 << s;
                self.def[i][s] &= !(1 << t);
                self.def[i][t] &= !(1 << s);
            }
            Var::Whole { i } => {
                let mut ident = [0u8; MAX_BOUND];
                let mut all = [0u8; MAX_BOUND];
                for s in 0..self.n {
                    ident[s] = 1 << s;
                    all[s] = self.full;
                }
                self.def[i] = ident;
                self.poss[i] = all;
            }
        }
    }

    fn combine(&self, ixs: &[usize], rows: &[Rows], and: bool) -> Rows {
        let mut out = [if and { self.full } else { 0 }; MAX_BOUND];
        for (s, o) in out.iter_mut().enumerate().take(self.n) {
            for &i in ixs {
                if and {
                    *o &= rows[i][s];
                } else {
                    *o |= rows[i][s];
                }
            }
        }
        out
    }

    /// `(lo, hi)` for every node.
    fn eval(&self) -> Vec<(u8, u8)> {
        let full = self.full;
        let mut out: Vec<(u8, u8)> = Vec::with_capacity(self.c.nodes.len());
        let boxed = |succ_poss: &Rows, succ_def: &Rows, (lo, hi): (u8, u8)| {
            let (mut l, mut h) = (0u8, 0u8);
            for s in 0..self.n {
                if succ_poss[s] & !lo == 0 {
                    l |= 1 << s;
                }
                if succ_def[s] & !hi == 0 {
                    h |= 1 << s;
                }
            }
            (l, h)
        };
        for (node, fixed) in self.c.nodes.iter().zip(&self.c.fixed) {
            let v = match node {
                _ if fixed.is_some() => {
                    let v = if *fixed == Some(true) { full } else { 0 };
                    (v, v)
                }
                Node::Prop(p) => {
                    let (k, t) = (self.known[*p], self.truth[*p]);
                    (k & t, (!k | t) & full)
                }
                Node::Neg(a) => {
                    let (lo, hi) = out[*a];
                    (!hi & full, !lo & full)
                }
                Node::Impl(a, b) => {
                    let ((la, ha), (lb, hb)) = (out[*a], out[*b]);
                    ((!ha | lb) & full, (!la | hb) & full)
                }
                Node::Cap(ixs, a) => boxed(
                    &self.combine(ixs, &self.poss, true),
                    &self.combine(ixs, &self.def, true),
                    out[*a],
                ),
                Node::Ucl(ixs, a) => boxed(
                    &closure(self.n, &self.combine(ixs, &self.poss, false)),
                    &closure(self.n, &self.combine(ixs, &self.def, false)),
                    out[*a],
                ),
            };
            out.push(v);
        }
        out
    }

    fn reachable(&self) -> u8 {
        let all: Vec<usize> = (0..self.c.indices.len()).collect();
        1 | closure(self.n, &self.combine(&all, &self.poss, false))[0]
    }

    /// Non-root states are interchangeable, so the states the root sees
    /// are taken to be a prefix of `1..n`.
    fn breaks_symmetry(&self) -> bool {
        let mut def = 0u8;
        let mut poss = 0u8;
        for k in 0..self.c.indices.len() {
            def |= self.def[k][0];
            poss |= self.poss[k][0];
        }
        (2..self.n).any(|t| def >> t & 1 == 1 && poss >> (t - 1) & 1 == 0)
    }

    fn relevant(&self, v: Var, reach: u8) -> bool {
        match v {
            Var::Val { s, .. } | Var::Edge { s, .. } => reach >> s & 1 == 1,
            Var::Sym { s, t, .. } => (reach >> s | reach >> t) & 1 == 1,
            Var::Whole { .. } => true,
        }
    }

    fn run(&mut self) -> Result<bool, BudgetExceeded> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(BudgetExceeded);
        }
        let (lo, hi) = *self.eval().last().expect("nonempty formula");
        if hi & 1 == 0 {
            return Ok(false);
        }
        // models with unreachable states were covered by smaller sizes
        let reach = self.reachable();
        if reach != self.full || self.breaks_symmetry() {
            return Ok(false);
        }
        if self.frame == FrameClass::D
            && self
                .poss
                .iter()
                .any(|rows| (0..self.n).any(|s| reach >> s & 1 == 1 && rows[s] == 0))
        {
            return Ok(false);
        }
        if lo & 1 == 1 {
            return Ok(true);
        }
        let Some(k) =
            (0..self.vars.len()).find(|&k| !self.assigned[k] && self.relevant(self.vars[k], reach))
        else {
            return Ok(false);
        };
        let v = self.vars[k];
        self.assigned[k] = true;
        for choice in 0..self.domain(v) {
            self.apply(v, choice);
            if self.run()? {
                return Ok(true);
            }
            self.undo(v);
        }
        self.assigned[k] = false;
        Ok(false)
    }

    /// Any completion of the current partial model. In D, unknown edges are
    /// taken and rows that are still empty get a loop.
    fn complete(&self) -> KripkeModel {
        let rel = self
            .c
            .indices
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let rows = if self.frame == FrameClass::D {
                    &self.poss[k]
                } else {
                    &self.def[k]
                };
                let succ = (0..self.n)
                    .map(|s| {
                        let row = if rows[s] == 0 && self.frame == FrameClass::D {
                            1 << s
                        } else {
                            rows[s]
                        };
                        (0..self.n).filter(|&t| row >> t & 1 == 1).collect()
                    })
                    .collect();
                (i, Relation::from_successors(succ))
            })
            .collect();
        let val: BTreeMap<String, BTreeSet<usize>> = self
            .c
            .props
            .iter()
            .enumerate()
            .map(|(p, name)| {
                let set = self.known[p] & self.truth[p];
                (
                    name.clone(),
                    (0..self.n).filter(|&s| set >> s & 1 == 1).collect(),
                )
            })
            .collect();
        KripkeModel::with_numbered_states(self.n, rel, val).expect("well-formed model")
    }
}

/// Searches models with `1..=bound` states (root `s0`) in the frame class.
pub fn brute_force_sat(f: &Formula, frame: FrameClass, bound: usize) -> Verdict {
    brute_force_sat_with(
        f,
        frame,
        BruteOptions {
            bound,
            ..BruteOptions::default()
        },
    )
}

pub fn brute_force_sat_with(f: &Formula, frame: FrameClass, opts: BruteOptions) -> Verdict {
    let bound = opts.bound;
    if bound == 0 || bound > MAX_BOUND {
        return Verdict::Unknown(format!("bound must be between 1 and {MAX_BOUND}"));
    }
    if is_tautology(&Formula::neg(f.clone())) {
        return Verdict::Unsat(UnsatEvidence::ExhaustedModels { bound });
    }
    let c = compile(f);
    let mut spent = 0;
    let top = if frame == FrameClass::S4 {
        bound.min(MAX_S4_STATES)
    } else {
        bound
    };
    for n in 1..=top {
        let mut search = Search::new(n, frame, &c, opts.node_budget - spent);
        match search.run() {
            Ok(true) => {
                return match Witness::new(f, frame, search.complete(), 0) {
                    Ok(w) => Verdict::Sat(w),
                    Err(e) => Verdict::Unknown(format!("search produced an unverified model: {e}")),
                };
            }
            Ok(false) => spent += search.visited,
            Err(BudgetExceeded) => {
                return Verdict::Unknown(format!(
                    "node budget of {} exhausted at {n} states",
                    opts.node_budget
                ))
            }
        }
    }
    if top < bound {
        return Verdict::Unknown(format!("S4 search stops at {MAX_S4_STATES} states"));
    }
    Verdict::Unsat(UnsatEvidence::ExhaustedModels { bound })
}
