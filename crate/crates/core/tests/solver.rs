mod common;

use common::{random_formula, random_instance};
use modal_core::proof::{assemble_system, AxiomSchema, SystemId};
use modal_core::semantics::{frame_check, satisfies, FrameClass};
use modal_core::solver::{
    brute_force_sat, closure_sat, compare_engines, decide_valid, Validity, Verdict, Witness,
};
use modal_core::syntax::{parse, Formula};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_witness(f: &Formula, w: &Witness) {
    let m = w.model();
    let indices: Vec<u32> = m.indices().into_iter().collect();
    assert!(
        satisfies(m, w.state(), f).unwrap(),
        "{f} false at its witness"
    );
    assert!(
        frame_check(m, w.frame(), &indices).unwrap(),
        "{f}: witness outside {}",
        w.frame()
    );
}

#[test]
fn witnesses_hold_up_and_engines_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for frame in FrameClass::ALL {
        for _ in 0..25 {
            let f = random_formula(&mut rng, 3, 2);
            let closure = closure_sat(&f, frame, None);
            let oracle = brute_force_sat(&f, frame, 3);
            for v in [&closure, &oracle] {
                if let Verdict::Sat(w) = v {
                    check_witness(&f, w);
                }
            }
            // a small oracle bound can only miss models, never invent them
            assert!(!(closure.is_unsat() && oracle.is_sat()), "{frame}: {f}");
        }
    }
}

#[test]
fn axioms_are_never_refuted() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for id in SystemId::all() {
        for &name in &assemble_system(id).axioms {
            let f = random_instance(&mut rng, &AxiomSchema::get(name), 2);
            let v = decide_valid(&f, id.frame, None, 2);
            assert!(
                !matches!(v, Validity::Invalid(_)),
                "{id}: {name} instance {f}"
            );
        }
    }
}

#[test]
fn countermodels_refute() {
    let f = parse("[&1 2]p -> ~[&1 2]~p").unwrap();
    match decide_valid(&f, FrameClass::D, None, 2) {
        Validity::Invalid(w) => {
            assert!(!satisfies(w.model(), w.state(), &f).unwrap());
            assert!(frame_check(w.model(), FrameClass::D, &[1, 2]).unwrap());
        }
        other => panic!("expected a countermodel, got {}", other.label()),
    }
    assert_eq!(decide_valid(&f, FrameClass::T, None, 3), Validity::Valid);
}

#[test]
fn small_hand_corpus_agrees_everywhere() {
    let formulas: Vec<Formula> = [
        "[1]p -> [&1 2]p",
        "[+1 2]p -> [1]p",
        "[+1]p -> [+1][+1]p",
        "~[+1 2]~p",
        "[&1 2]~[1]~p",
        "[1]~[2]p",
    ]
    .iter()
    .map(|s| parse(s).unwrap())
    .collect();
    for frame in FrameClass::ALL {
        let report = compare_engines(&formulas, frame, 3);
        assert!(
            report.disagreements.is_empty(),
            "{frame}: {:?}",
            report.disagreements
        );
    }
}
