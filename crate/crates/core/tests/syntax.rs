mod common;

use common::{formula_strategy, index_strategy};
use modal_core::syntax::{parse, Formula, Index};
use proptest::prelude::*;

proptest! {
    #[test]
    fn render_round_trips(f in formula_strategy(6, 3)) {
        prop_assert_eq!(parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn exactly_one_of_the_pair_is_negated(f in formula_strategy(4, 3)) {
        // closure members never start with a double negation
        prop_assume!(!matches!(&f, Formula::Neg(inner) if inner.is_neg()));
        let g = f.closure_negation();
        prop_assert!(f.is_neg() != g.is_neg());
        prop_assert_eq!(g.closure_negation(), f);
    }

    #[test]
    fn index_order_is_irrelevant(idx in index_strategy(4)) {
        let mut rev: Vec<u32> = idx.members().to_vec();
        rev.reverse();
        let p = Formula::prop("p");
        prop_assert_eq!(
            Formula::cap(Index::new(rev).unwrap(), p.clone()),
            Formula::cap(idx, p)
        );
    }
}

#[test]
fn parses_listed_examples() {
    assert_eq!(parse("[&2 1]p").unwrap().render(), "[&1 2]p");
    assert_eq!(parse("[&2 1]p").unwrap(), parse("[&1 2]p").unwrap());
}
