use super::{brute_force_sat, UnsatEvidence, Validity, Verdict, Witness};
use crate::closure::Signature;
use crate::construction::{build_witness_model, horizon, AtomTable};
use crate::semantics::FrameClass;
use crate::syntax::Formula;

/// Depth used when the caller does not fix one: the horizon of `f` if it is
/// finite, otherwise one more than its modal depth.
pub fn auto_depth(table: &AtomTable, f: &Formula) -> usize {
    horizon(f, table.signature().frame(), table.ucl_witness_depth()).unwrap_or(f.modal_depth() + 1)
}

/// Satisfiability through the atom construction over the closure of `f`.
///
/// UNSAT when no surviving atom contains `f`. Otherwise a witness model is
/// grown below each such atom and checked directly; the first one that
/// satisfies `f` at its root (and is in the frame class) is returned.
pub fn closure_sat(f: &Formula, frame: FrameClass, depth: Option<usize>) -> Verdict {
    let sig = Signature::with_default_iota(frame, f.clone());
    let table = AtomTable::new(&sig);
    let roots = table.atoms_with(f);
    if roots.is_empty() {
        return Verdict::Unsat(UnsatEvidence::NoAtomContains);
    }
    let depth = depth.unwrap_or_else(|| auto_depth(&table, f));
    let mut last = None;
    for &root in &roots {
        let m = build_witness_model(&table, root, depth);
        let km = if frame == FrameClass::D {
            m.fold_frontier(&table)
        } else {
            m.model().clone()
        };
        match Witness::new(f, frame, km, 0) {
            Ok(w) => return Verdict::Sat(w),
            Err(e) => last = Some(e),
        }
    }
    Verdict::Unknown(format!(
        "{} candidate atom(s), none confirmed at depth {depth}; last: {}",
        roots.len(),
        last.expect("at least one root")
    ))
}

/// Valid when both engines rule out `¬f`, invalid when either finds a
/// checked model of `¬f`.
pub fn decide_valid(
    f: &Formula,
    frame: FrameClass,
    depth: Option<usize>,
    bound: usize,
) -> Validity {
    let neg = Formula::neg(f.clone());
    let oracle = brute_force_sat(&neg, frame, bound);
    if let Verdict::Sat(w) = oracle {
        return Validity::Invalid(w);
    }
    let closure = closure_sat(&neg, frame, depth);
    match (closure, oracle) {
        (Verdict::Sat(w), _) => Validity::Invalid(w),
        (Verdict::Unsat(_), Verdict::Unsat(UnsatEvidence::ExhaustedModels { .. })) => {
            Validity::Valid
        }
        (closure, oracle) => Validity::Unknown { closure, oracle },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn closure_verdicts() {
        assert!(closure_sat(&f("p"), FrameClass::K, None).is_sat());
        assert_eq!(
            closure_sat(&f("p & ~p"), FrameClass::K, None),
            Verdict::Unsat(UnsatEvidence::NoAtomContains)
        );
        assert!(closure_sat(&f("[&1 2]p & ~[1]p"), FrameClass::K, None).is_sat());
        assert!(closure_sat(&f("[1]p & ~[&1 2]p"), FrameClass::K, None).is_unsat());
        assert!(closure_sat(&f("[&1]p & ~p"), FrameClass::T, None).is_unsat());
        assert!(closure_sat(&f("[&1 2]~p & [&1 2]p"), FrameClass::D, None).is_sat());
        assert!(closure_sat(&f("~[+1]p & [1]p & [1][+1]p"), FrameClass::K, None).is_unsat());
        assert!(closure_sat(&f("~[+1 2]p & [1]p & [2]p"), FrameClass::T, None).is_sat());
    }

    #[test]
    fn validity() {
        let both = [FrameClass::T, FrameClass::S4];
        for frame in both {
            assert_eq!(
                decide_valid(&f("[&1]p -> p"), frame, None, 3),
                Validity::Valid
            );
        }
        assert_eq!(
            decide_valid(&f("p -> p"), FrameClass::K, None, 4),
            Validity::Valid
        );
        assert!(matches!(
            decide_valid(&f("[&1 2]p -> ~[&1 2]~p"), FrameClass::D, None, 4),
            Validity::Invalid(_)
        ));
        assert_eq!(
            decide_valid(&f("[1]p -> ~[1]~p"), FrameClass::D, None, 4),
            Validity::Valid
        );
        assert!(matches!(
            decide_valid(&f("[1]p -> p"), FrameClass::K, None, 4),
            Validity::Invalid(_)
        ));
    }
}
