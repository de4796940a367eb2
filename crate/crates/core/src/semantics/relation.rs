use fixedbitset::FixedBitSet;

/// A binary relation on states `0..n`, stored as sorted successor lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Relation {
    succ: Vec<Vec<usize>>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation {
            succ: vec![Vec::new(); n],
        }
    }

    pub fn identity(n: usize) -> Relation {
        Relation {
            succ: (0..n).map(|s| vec![s]).collect(),
        }
    }

    /// Panics if a pair mentions a state `>= n`.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Relation {
        let mut succ = vec![Vec::new(); n];
        for (s, t) in pairs {
            assert!(s < n && t < n, "pair ({s},{t}) out of range for {n} states");
            succ[s].push(t);
        }
        for row in &mut succ {
            row.sort_unstable();
            row.dedup();
        }
        Relation { succ }
    }

    pub fn from_successors(mut succ: Vec<Vec<usize>>) -> Relation {
        for row in &mut succ {
            row.sort_unstable();
            row.dedup();
        }
        Relation { succ }
    }

    pub fn num_states(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.succ
            .get(s)
            .map(|row| row.binary_search(&t).is_ok())
            .unwrap_or(false)
    }

    pub fn num_pairs(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |&t| (s, t)))
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let succ = self
            .succ
            .iter()
            .zip(&other.succ)
            .map(|(a, b)| intersect_sorted(a, b))
            .collect();
        Relation { succ }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let succ = self
            .succ
            .iter()
            .zip(&other.succ)
            .map(|(a, b)| {
                let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        Relation { succ }
    }

    pub fn inverse(&self) -> Relation {
        let mut pred = vec![Vec::new(); self.succ.len()];
        for (s, t) in self.pairs() {
            pred[t].push(s);
        }
        Relation { succ: pred }
    }

    pub fn to_bit_matrix(&self) -> Vec<FixedBitSet> {
        let n = self.succ.len();
        self.succ
            .iter()
            .map(|row| {
                let mut bits = FixedBitSet::with_capacity(n);
                for &t in row {
                    bits.insert(t);
                }
                bits
            })
            .collect()
    }

    pub fn from_bit_matrix(rows: &[FixedBitSet]) -> Relation {
        Relation {
            succ: rows.iter().map(|r| r.ones().collect()).collect(),
        }
    }

    /// Transitive (not reflexive) closure, by Warshall's algorithm on the
    /// bit-matrix view.
    pub fn transitive_closure(&self) -> Relation {
        let mut rows = self.to_bit_matrix();
        let n = rows.len();
        for k in 0..n {
            let row_k = rows[k].clone();
            for row in rows.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Relation::from_bit_matrix(&rows)
    }
}

pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
