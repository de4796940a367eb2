#![allow(dead_code)]

use std::path::PathBuf;

use modal_core::closure::Signature;
use modal_core::proof::{AxiomSchema, ProofLine, ProofScript, Substitution};
use modal_core::syntax::{parse, Formula, Index};
use proptest::prelude::*;
use rand::Rng;

pub fn index_strategy(max: u32) -> impl Strategy<Value = Index> {
    proptest::collection::btree_set(1..=max, 1..=max as usize).prop_map(|s| Index::new(s).unwrap())
}

pub fn formula_strategy(depth: u32, max_index: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::prop);
    leaf.prop_recursive(depth, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (1..=max_index, inner.clone()).prop_map(|(i, a)| Formula::boxed(i, a)),
            (index_strategy(max_index), inner.clone()).prop_map(|(i, a)| Formula::cap(i, a)),
            (index_strategy(max_index), inner).prop_map(|(i, a)| Formula::ucl(i, a)),
        ]
    })
}

pub fn random_index<R: Rng>(rng: &mut R, max: u32) -> Index {
    loop {
        let members: Vec<u32> = (1..=max).filter(|_| rng.gen_bool(0.5)).collect();
        if let Ok(i) = Index::new(members) {
            return i;
        }
    }
}

pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, max_index: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::prop(["p", "q"][rng.gen_range(0..2)]);
    }
    let sub = |rng: &mut R| random_formula(rng, depth - 1, max_index);
    match rng.gen_range(0..5) {
        0 => Formula::neg(sub(rng)),
        1 => {
            let a = sub(rng);
            Formula::imp(a, sub(rng))
        }
        2 => {
            let i = rng.gen_range(1..=max_index);
            Formula::boxed(i, sub(rng))
        }
        3 => {
            let i = random_index(rng, max_index);
            Formula::cap(i, sub(rng))
        }
        _ => {
            let i = random_index(rng, max_index);
            Formula::ucl(i, sub(rng))
        }
    }
}

/// A random instance of the schema; side conditions are met by retrying.
pub fn random_instance<R: Rng>(rng: &mut R, schema: &AxiomSchema, max_index: u32) -> Formula {
    let (fs, singles, sets) = schema.metavariables();
    loop {
        let mut sub = Substitution::default();
        for &v in &fs {
            sub.formulas.insert(v, random_formula(rng, 2, max_index));
        }
        for &v in &singles {
            sub.singles.insert(v, rng.gen_range(1..=max_index));
        }
        for &v in &sets {
            sub.sets.insert(v, random_index(rng, max_index));
        }
        if let Some(f) = schema.instantiate(&sub) {
            return f;
        }
    }
}

/// Strict transitive closure by summing boolean matrix powers `R¹ … Rⁿ`.
pub fn matrix_power_closure(m: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = m.len();
    let mul = |a: &[Vec<bool>], b: &[Vec<bool>]| -> Vec<Vec<bool>> {
        (0..n)
            .map(|s| (0..n).map(|t| (0..n).any(|k| a[s][k] && b[k][t])).collect())
            .collect()
    };
    let mut power = m.to_vec();
    let mut sum = m.to_vec();
    for _ in 1..n {
        power = mul(&power, m);
        for s in 0..n {
            for t in 0..n {
                sum[s][t] |= power[s][t];
            }
        }
    }
    sum
}

pub fn sig(logic: &str, alpha: &str, iota: &[u32]) -> Signature {
    Signature::new(
        logic.parse().unwrap(),
        parse(alpha).unwrap(),
        Index::new(iota.iter().copied()).unwrap(),
    )
    .unwrap()
}

/// Audit corpus: every logic, modal depth at most two, at most two indices,
/// four signatures with ⊎.
pub fn audit_corpus() -> Vec<Signature> {
    [
        ("CK", "[&1 2]p", &[1, 2][..]),
        ("CK", "[+1]p", &[1]),
        ("CK", "[1]~[&1 2]p", &[1, 2]),
        ("CD", "[1]p -> [&1 2]p", &[1, 2]),
        ("CD", "[+1 2]p", &[1, 2]),
        ("CT", "[+1 2]p", &[1, 2]),
        ("CT", "[1][&1 2]p", &[1, 2]),
        ("CB", "[1]~[2]p", &[1, 2]),
        ("CB", "[+1]p", &[1]),
        ("CS4", "[1]p -> [2]p", &[1, 2]),
        ("CS4", "[&1 2]p", &[1, 2]),
        ("CS5", "[&1]p", &[1]),
        ("CS5", "[1]p", &[1, 2]),
    ]
    .into_iter()
    .map(|(l, a, i)| sig(l, a, i))
    .collect()
}

pub fn proof_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/proofs")
        .join(name)
}

pub fn load_script(name: &str) -> ProofScript {
    ProofScript::parse(&std::fs::read_to_string(proof_path(name)).unwrap()).unwrap()
}

/// The script without line `k` (1-based), renumbered. References past the
/// gap shift down; references to the removed line point at its successor,
/// which is either a different formula or not an earlier line.
pub fn delete_line(script: &ProofScript, k: usize) -> ProofScript {
    let shift = |r: usize| {
        if r > k {
            r - 1
        } else if r == k {
            k
        } else {
            r
        }
    };
    let lines = script
        .lines
        .iter()
        .filter(|l| l.number != k)
        .enumerate()
        .map(|(pos, l)| ProofLine {
            number: pos + 1,
            formula: l.formula.clone(),
            justification: l.justification.map_references(shift),
        })
        .collect();
    ProofScript {
        goal: script.goal.clone(),
        lines,
    }
}

pub fn rename(f: &Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::Prop(p) if p == from => Formula::prop(to),
        Formula::Prop(_) => f.clone(),
        Formula::Neg(a) => Formula::neg(rename(a, from, to)),
        Formula::Impl(a, b) => Formula::imp(rename(a, from, to), rename(b, from, to)),
        Formula::Box(i, a) => Formula::boxed(*i, rename(a, from, to)),
        Formula::Cap(i, a) => Formula::cap(i.clone(), rename(a, from, to)),
        Formula::Ucl(i, a) => Formula::ucl(i.clone(), rename(a, from, to)),
    }
}

/// Every single-formula mutation: negate the line, or rename `p` to `q`.
pub fn mutations(script: &ProofScript) -> Vec<(String, ProofScript)> {
    let mut out = Vec::new();
    for (k, line) in script.lines.iter().enumerate() {
        for (what, f) in [
            ("negate", Formula::neg(line.formula.clone())),
            ("rename", rename(&line.formula, "p", "q")),
        ] {
            if f == line.formula {
                continue;
            }
            let mut s = script.clone();
            s.lines[k].formula = f;
            out.push((format!("{what} line {}", k + 1), s));
        }
    }
    out
}
