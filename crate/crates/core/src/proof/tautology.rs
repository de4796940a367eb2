use std::collections::BTreeMap;

use crate::syntax::Formula;

/// Propositions and outermost modal subformulas, the atoms of a PC reading.
pub fn pc_atoms(f: &Formula) -> Vec<&Formula> {
    fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
        match f {
            Formula::Neg(a) => go(a, out),
            Formula::Impl(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}

fn eval(f: &Formula, slot: &BTreeMap<&Formula, usize>, row: u64) -> bool {
    match f {
        Formula::Neg(a) => !eval(a, slot, row),
        Formula::Impl(a, b) => !eval(a, slot, row) || eval(b, slot, row),
        _ => row >> slot[f] & 1 == 1,
    }
}

/// Truth-table check with modal subformulas treated as opaque atoms.
///
/// Panics above 30 atoms; proof lines are nowhere near that.
pub fn is_tautology(f: &Formula) -> bool {
    let atoms = pc_atoms(f);
    assert!(atoms.len() <= 30, "too many atoms for a truth table");
    let slot: BTreeMap<&Formula, usize> = atoms.iter().enumerate().map(|(k, a)| (*a, k)).collect();
    (0..1u64 << atoms.len()).all(|row| eval(f, &slot, row))
}
