use std::collections::{BTreeMap, BTreeSet};

use super::AtomTable;
use crate::closure::Signature;
use crate::semantics::{FrameClass, KripkeModel, Path, Relation};
use crate::syntax::{Formula, Index};

/// A canonical path: atom ids linked by indices.
pub type CanonicalPath = Path<usize>;

/// A depth-bounded model whose states are canonical paths.
///
/// States form a forest: each non-root state extends its parent by one
/// step. `pruned` models keep only the children that serve as witnesses.
#[derive(Clone, Debug)]
pub struct StandardModel {
    signature: Signature,
    depth: usize,
    pruned: bool,
    paths: Vec<CanonicalPath>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    model: KripkeModel,
}

/// `0`, `0:1:2`, `0:1,2:3`: atom ids separated by the step indices.
pub fn path_name(p: &CanonicalPath) -> String {
    let mut out = p.states()[0].to_string();
    for (idx, a) in p.indices().iter().zip(&p.states()[1..]) {
        let members: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(":{}:{a}", members.join(",")));
    }
    out
}

impl StandardModel {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn frame(&self) -> FrameClass {
        self.signature.frame()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    pub fn paths(&self) -> &[CanonicalPath] {
        &self.paths
    }

    pub fn parent(&self, s: usize) -> Option<usize> {
        self.parent[s]
    }

    pub fn children(&self, s: usize) -> &[usize] {
        &self.children[s]
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn num_states(&self) -> usize {
        self.paths.len()
    }

    pub fn tail(&self, s: usize) -> usize {
        *self.paths[s].tail()
    }

    /// Steps that may still be taken below `s` within the depth bound.
    pub fn remaining(&self, s: usize) -> usize {
        self.depth - self.paths[s].steps()
    }

    pub fn is_frontier(&self, s: usize) -> bool {
        self.remaining(s) == 0
    }

    /// Adds `(s, s)` to every relation at frontier states. Used to make
    /// depth-truncated D models serial.
    pub fn serial_patch(&self) -> KripkeModel {
        let n = self.num_states();
        let rel = self
            .model
            .relations()
            .iter()
            .map(|(&i, r)| {
                let mut rows: Vec<Vec<usize>> = (0..n).map(|s| r.successors(s).to_vec()).collect();
                for (s, row) in rows.iter_mut().enumerate() {
                    if self.is_frontier(s) {
                        row.push(s);
                    }
                }
                (i, Relation::from_successors(rows))
            })
            .collect();
        KripkeModel::new(
            self.model.state_names().to_vec(),
            rel,
            self.model.valuation().clone(),
        )
        .expect("same states")
    }

    /// Like [`serial_patch`](Self::serial_patch), but a frontier state with
    /// no `i`-successor is sent to the first state whose tail is
    /// `▷_i`-related to its own. Loops remain the fallback.
    pub fn fold_frontier(&self, table: &AtomTable) -> KripkeModel {
        let n = self.num_states();
        let rel = self
            .model
            .relations()
            .iter()
            .map(|(&i, r)| {
                let canon = table.relation(&Index::singleton(i));
                let rows: Vec<Vec<usize>> = (0..n)
                    .map(|s| {
                        let mut row = r.successors(s).to_vec();
                        if row.is_empty() && self.is_frontier(s) {
                            let a = self.tail(s);
                            row.push(
                                (0..n)
                                    .find(|&t| canon.contains(a, self.tail(t)))
                                    .unwrap_or(s),
                            );
                        }
                        row
                    })
                    .collect();
                (i, Relation::from_successors(rows))
            })
            .collect();
        KripkeModel::new(
            self.model.state_names().to_vec(),
            rel,
            self.model.valuation().clone(),
        )
        .expect("same states")
    }
}

/// Grows a forest from `roots`; `children_of(tail, remaining)` lists the
/// steps to add below a state.
fn grow(
    table: &AtomTable,
    depth: usize,
    roots: &[usize],
    pruned: bool,
    mut children_of: impl FnMut(usize, usize) -> Vec<(Index, usize)>,
) -> StandardModel {
    let mut paths: Vec<CanonicalPath> = roots.iter().map(|&a| Path::single(a)).collect();
    let mut parent: Vec<Option<usize>> = vec![None; paths.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); paths.len()];
    let mut s = 0;
    while s < paths.len() {
        let rem = depth - paths[s].steps();
        if rem > 0 {
            for (idx, a) in children_of(*paths[s].tail(), rem) {
                let t = paths.len();
                paths.push(paths[s].extended(idx, a));
                parent.push(Some(s));
                children.push(Vec::new());
                children[s].push(t);
            }
        }
        s += 1;
    }
    let sig = table.signature().clone();
    let model = assemble(table, &paths, &parent, &children);
    StandardModel {
        signature: sig,
        depth,
        pruned,
        paths,
        parent,
        children,
        model,
    }
}

fn step_index(p: &CanonicalPath) -> &Index {
    p.indices().last().expect("non-root")
}

/// Relations of the standard model over the given forest.
fn standard_relation(
    frame: FrameClass,
    i: u32,
    paths: &[CanonicalPath],
    parent: &[Option<usize>],
    children: &[Vec<usize>],
) -> Relation {
    let n = paths.len();
    let labelled = |t: usize| parent[t].filter(|_| step_index(&paths[t]).contains(i));
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    match frame {
        FrameClass::K | FrameClass::D | FrameClass::T | FrameClass::B => {
            for t in 0..n {
                if let Some(s) = labelled(t) {
                    rows[s].push(t);
                    if frame == FrameClass::B {
                        rows[t].push(s);
                    }
                }
            }
            if frame != FrameClass::K && frame != FrameClass::D {
                for (s, row) in rows.iter_mut().enumerate() {
                    row.push(s);
                }
            }
        }
        FrameClass::S4 => {
            // every descendant through i-labelled steps, and s itself
            for (s, row) in rows.iter_mut().enumerate() {
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    row.push(u);
                    stack.extend(
                        children[u]
                            .iter()
                            .copied()
                            .filter(|&c| labelled(c).is_some()),
                    );
                }
            }
        }
        FrameClass::S5 => {
            // components of the i-labelled steps, found from their top state
            let mut comp = vec![usize::MAX; n];
            let mut members: Vec<Vec<usize>> = Vec::new();
            for s in 0..n {
                if labelled(s).is_some() {
                    continue;
                }
                let c = members.len();
                let mut group = Vec::new();
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    comp[u] = c;
                    group.push(u);
                    stack.extend(
                        children[u]
                            .iter()
                            .copied()
                            .filter(|&v| labelled(v).is_some()),
                    );
                }
                members.push(group);
            }
            for (s, row) in rows.iter_mut().enumerate() {
                row.extend_from_slice(&members[comp[s]]);
            }
        }
    }
    Relation::from_successors(rows)
}

fn assemble(
    table: &AtomTable,
    paths: &[CanonicalPath],
    parent: &[Option<usize>],
    children: &[Vec<usize>],
) -> KripkeModel {
    let sig = table.signature();
    let rel: BTreeMap<u32, Relation> = sig
        .iota()
        .iter()
        .map(|i| {
            (
                i,
                standard_relation(sig.frame(), i, paths, parent, children),
            )
        })
        .collect();
    let mut val: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for f in table.closure().members() {
        if let Formula::Prop(p) = f {
            let set = (0..paths.len())
                .filter(|&s| table.contains(*paths[s].tail(), f) == Some(true))
                .collect();
            val.insert(p.clone(), set);
        }
    }
    KripkeModel::new(paths.iter().map(path_name).collect(), rel, val)
        .expect("consistent by construction")
}

/// All canonical paths with at most `depth` steps. Roots follow atom order;
/// children follow (index order, atom order).
pub fn build_standard_model(table: &AtomTable, depth: usize) -> StandardModel {
    let roots: Vec<usize> = (0..table.len()).collect();
    grow(table, depth, &roots, false, |tail, _| {
        let mut out = Vec::new();
        for idx in table.subsets() {
            for &b in table.relation(idx).successors(tail) {
                out.push((idx.clone(), b));
            }
        }
        out
    })
}

/// The steps a witness model adds below a state: one child per ∩ member
/// the tail lacks (unless a loop refutes it), one step along a shortest
/// refuting chain per ⊎ member it lacks, and in D one successor per index.
pub fn witness_steps(table: &AtomTable, tail: usize) -> Vec<(Index, usize)> {
    let atoms = table.atoms();
    let phi = &atoms[tail];
    let mut out: Vec<(Index, usize)> = Vec::new();
    let add = |step: (Index, usize), out: &mut Vec<(Index, usize)>| {
        if !out.contains(&step) {
            out.push(step);
        }
    };
    let reflexive = table.signature().frame().is_reflexive();
    for e in table.cap_entries() {
        // in reflexive logics the loop already refutes a body false here
        if phi.contains(e.slot) || (reflexive && !e.body.holds(phi)) {
            continue;
        }
        if let Some(&b) = table
            .relation(&e.index)
            .successors(tail)
            .iter()
            .find(|&&b| !e.body.holds(&atoms[b]))
        {
            add((e.index.clone(), b), &mut out);
        }
    }
    for (k, e) in table.ucl_entries().iter().enumerate() {
        if phi.contains(e.slot) || (reflexive && !e.body.holds(phi)) {
            continue;
        }
        let mut best: Option<(usize, Index, usize)> = None;
        for i in e.index.iter() {
            let idx = Index::singleton(i);
            for &b in table.relation(&idx).successors(tail) {
                if let Some(d) = table.ucl_distance(k, b) {
                    if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
                        best = Some((d, idx.clone(), b));
                    }
                }
            }
        }
        if let Some((_, idx, b)) = best {
            add((idx, b), &mut out);
        }
    }
    if table.signature().frame() == FrameClass::D {
        for i in table.signature().iota().iter() {
            if out.iter().any(|(idx, _)| idx.contains(i)) {
                continue;
            }
            let idx = Index::singleton(i);
            if let Some(&b) = table.relation(&idx).successors(tail).first() {
                add((idx, b), &mut out);
            }
        }
    }
    out
}

/// Prefix-closed part of the standard model below the root `⟨atom⟩` that
/// keeps only witness steps.
pub fn build_witness_model(table: &AtomTable, atom: usize, depth: usize) -> StandardModel {
    grow(table, depth, &[atom], true, |tail, _| {
        witness_steps(table, tail)
    })
}
