use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::subset::IndexSet;

/// Square-free monomial in the degree-one generators `x_k^j` of `H*(G^r)`.
///
/// Generator `x_k^j` (lattice coordinate `k`, torus coordinate `j`, both from 0) has index
/// `k * a + j`, so the canonical order is `k` major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExteriorMonomial(u64);

impl ExteriorMonomial {
    pub const ONE: ExteriorMonomial = ExteriorMonomial(0);

    pub fn from_generators<I: IntoIterator<Item = usize>>(gens: I) -> Self {
        ExteriorMonomial(IndexSet::from_indices(gens).bits())
    }

    pub fn generator(g: usize) -> Self {
        ExteriorMonomial(1 << g)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn as_set(self) -> IndexSet {
        IndexSet::from_bits(self.0)
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn generators(self) -> impl Iterator<Item = usize> {
        self.as_set().iter()
    }

    /// `x_S x_T = sign x_{S ∪ T}`, or `None` when they share a generator.
    pub fn wedge(self, other: Self) -> Option<(i32, Self)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: usize = self
            .generators()
            .map(|s| other.as_set().count_below(s))
            .sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, ExteriorMonomial(self.0 | other.0)))
    }

    /// All monomials of the given degree in the generators of `pool`.
    pub fn all_of_degree(pool: IndexSet, degree: usize) -> Vec<ExteriorMonomial> {
        pool.subsets_of_size(degree)
            .into_iter()
            .map(|s| ExteriorMonomial(s.bits()))
            .collect()
    }
}

impl fmt::Debug for ExteriorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}", self.as_set())
    }
}

/// Element of the exterior algebra over the rationals.
pub type ExteriorElement = BTreeMap<ExteriorMonomial, BigRational>;

pub(crate) fn add_term(e: &mut ExteriorElement, m: ExteriorMonomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = e.entry(m).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        e.remove(&m);
    }
}

/// `e * (sum_g form[g] x_g)`.
pub(crate) fn mul_linear(e: &ExteriorElement, form: &[(usize, BigRational)]) -> ExteriorElement {
    let mut out = ExteriorElement::new();
    for (m, c) in e {
        for (g, x) in form {
            if let Some((sign, prod)) = m.wedge(ExteriorMonomial::generator(*g)) {
                let v = c * x;
                add_term(&mut out, prod, if sign > 0 { v } else { -v });
            }
        }
    }
    out
}
