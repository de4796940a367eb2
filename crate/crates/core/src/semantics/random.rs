use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::{FrameClass, KripkeModel, Relation};

/// A random relation on `n` states completed into the frame class: loops
/// for reflexivity, symmetric and transitive closure as required, a random
/// successor for empty rows in D. S5 relations come from random partitions.
pub fn random_relation<R: Rng>(rng: &mut R, frame: FrameClass, n: usize, density: f64) -> Relation {
    if frame == FrameClass::S5 {
        let block: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        return Relation::from_pairs(
            n,
            (0..n)
                .flat_map(|s| (0..n).map(move |t| (s, t)))
                .filter(|&(s, t)| block[s] == block[t]),
        );
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if rng.gen_bool(density) {
                pairs.push((s, t));
            }
        }
    }
    if frame.is_reflexive() {
        pairs.extend((0..n).map(|s| (s, s)));
    }
    if frame == FrameClass::B {
        let back: Vec<_> = pairs.iter().map(|&(s, t)| (t, s)).collect();
        pairs.extend(back);
    }
    if frame == FrameClass::D {
        for s in 0..n {
            if !pairs.iter().any(|&(a, _)| a == s) {
                pairs.push((s, rng.gen_range(0..n)));
            }
        }
    }
    let r = Relation::from_pairs(n, pairs);
    if frame == FrameClass::S4 {
        r.transitive_closure().union(&Relation::identity(n))
    } else {
        r
    }
}

/// A model with `n` states (`s0`, …) whose relations for `indices` lie in
/// the frame class and whose valuation is uniform over `props`.
pub fn random_model<R: Rng>(
    rng: &mut R,
    frame: FrameClass,
    n: usize,
    indices: &[u32],
    props: &[&str],
    density: f64,
) -> KripkeModel {
    let rel: BTreeMap<u32, Relation> = indices
        .iter()
        .map(|&i| (i, random_relation(rng, frame, n, density)))
        .collect();
    let val: BTreeMap<String, BTreeSet<usize>> = props
        .iter()
        .map(|p| {
            (
                p.to_string(),
                (0..n).filter(|_| rng.gen_bool(0.5)).collect(),
            )
        })
        .collect();
    KripkeModel::with_numbered_states(n, rel, val).expect("well-formed model")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::frame_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_are_in_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for frame in FrameClass::ALL {
            for n in 1..=5 {
                for _ in 0..20 {
                    let m = random_model(&mut rng, frame, n, &[1, 2, 3], &["p"], 0.3);
                    assert!(frame_check(&m, frame, &[1, 2, 3]).unwrap(), "{frame:?}");
                }
            }
        }
    }
}
