use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type SparseVector = BTreeMap<usize, BigRational>;

/// Incrementally built row echelon basis of a subspace of `Q^N`, sparse rows.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    // pivot column -> row with leading entry 1 at that column
    rows: BTreeMap<usize, SparseVector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: SparseVector) -> SparseVector {
        v.retain(|_, x| !x.is_zero());
        let mut cursor = 0;
        loop {
            let next = v
                .range(cursor..)
                .map(|(&k, _)| k)
                .find(|k| self.rows.contains_key(k));
            let Some(k) = next else { break };
            let c = v.remove(&k).expect("key present");
            for (&j, x) in self.rows[&k].range(k + 1..) {
                let e = v.entry(j).or_insert_with(BigRational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(&j);
                }
            }
            cursor = k + 1;
        }
        v
    }

    /// Adds `v` to the spanning set; returns whether the rank went up.
    pub fn insert(&mut self, v: SparseVector) -> bool {
        let mut r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for x in r.values_mut() {
                *x *= &inv;
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn contains(&self, v: SparseVector) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVector> {
        self.rows.values()
    }
}
