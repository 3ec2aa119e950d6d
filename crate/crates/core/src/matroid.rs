//! Arithmetic oriented matroid of a character matrix, and the sign calculus on it.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    det_sign, integer_kernel_basis, lattice_coordinates, saturation_basis, smith_normal_form,
    IntegerMatrix,
};
use crate::subset::{IndexSet, MAX_GROUND};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedCircuit {
    pub positive: IndexSet,
    pub negative: IndexSet,
    /// Primitive relation `sum n_i chi_i = 0`, indexed by the whole ground set.
    pub relation: Vec<BigInt>,
}

impl SignedCircuit {
    pub fn support(&self) -> IndexSet {
        self.positive.union(self.negative)
    }

    /// The opposite circuit `(C-, C+)`.
    pub fn negated(&self) -> SignedCircuit {
        SignedCircuit {
            positive: self.negative,
            negative: self.positive,
            relation: self.relation.iter().map(|x| -x).collect(),
        }
    }

    /// Whether this is the orientation with the first element of the support in `C+`.
    pub fn is_canonical(&self) -> bool {
        self.support()
            .min()
            .is_some_and(|i| self.positive.contains(i))
    }
}

#[derive(Clone, Debug)]
struct SubsetData {
    rank: usize,
    multiplicity: BigInt,
}

pub struct ArithmeticOrientedMatroid {
    chars: IntegerMatrix,
    table: RwLock<HashMap<IndexSet, SubsetData>>,
    spans: RwLock<HashMap<IndexSet, Arc<IntegerMatrix>>>,
}

impl Clone for ArithmeticOrientedMatroid {
    fn clone(&self) -> Self {
        Self::from_checked(self.chars.clone())
    }
}

impl std::fmt::Debug for ArithmeticOrientedMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArithmeticOrientedMatroid")
            .field("chars", &self.chars)
            .finish()
    }
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).is_one()
}

impl ArithmeticOrientedMatroid {
    /// Columns of `chars` are the characters, in ground-set order.
    pub fn new(chars: IntegerMatrix) -> Result<Self> {
        if chars.cols() > MAX_GROUND {
            return Err(Error::Dimension(format!(
                "at most {MAX_GROUND} subvarieties are supported, got {}",
                chars.cols()
            )));
        }
        if let Some(index) = (0..chars.cols()).find(|&j| !is_primitive(&chars.column(j))) {
            return Err(Error::NonPrimitive { index });
        }
        Ok(Self::from_checked(chars))
    }

    fn from_checked(chars: IntegerMatrix) -> Self {
        Self {
            chars,
            table: RwLock::new(HashMap::new()),
            spans: RwLock::new(HashMap::new()),
        }
    }

    pub fn characters(&self) -> &IntegerMatrix {
        &self.chars
    }

    pub fn character(&self, i: usize) -> Vec<BigInt> {
        self.chars.column(i)
    }

    pub fn lattice_rank(&self) -> usize {
        self.chars.rows()
    }

    pub fn len(&self) -> usize {
        self.chars.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ground_set(&self) -> IndexSet {
        IndexSet::full(self.len())
    }

    pub fn columns_of(&self, a: IndexSet) -> IntegerMatrix {
        self.chars.select_columns(&a.to_vec())
    }

    fn check(&self, a: IndexSet) -> Result<()> {
        match a.max() {
            Some(i) if i >= self.len() => Err(Error::BadIndex {
                index: i,
                size: self.len(),
            }),
            _ => Ok(()),
        }
    }

    fn data(&self, a: IndexSet) -> SubsetData {
        if let Some(d) = self.table.read().expect("poisoned").get(&a) {
            return d.clone();
        }
        let snf = smith_normal_form(&self.columns_of(a));
        let d = SubsetData {
            rank: snf.rank(),
            multiplicity: snf.torsion(),
        };
        self.table.write().expect("poisoned").insert(a, d.clone());
        d
    }

    pub fn rank(&self, a: IndexSet) -> usize {
        self.data(a).rank
    }

    pub fn full_rank(&self) -> usize {
        self.rank(self.ground_set())
    }

    pub fn multiplicity(&self, a: IndexSet) -> BigInt {
        self.data(a).multiplicity
    }

    pub fn nullity(&self, a: IndexSet) -> usize {
        a.len() - self.rank(a)
    }

    pub fn is_independent(&self, a: IndexSet) -> bool {
        self.rank(a) == a.len()
    }

    pub fn is_unimodular(&self, a: IndexSet) -> bool {
        self.multiplicity(a).is_one()
    }

    /// HNF basis (columns) of the saturation of the span of the characters in `a`.
    pub fn span_basis(&self, a: IndexSet) -> Arc<IntegerMatrix> {
        if let Some(s) = self.spans.read().expect("poisoned").get(&a) {
            return s.clone();
        }
        let s = Arc::new(saturation_basis(self.lattice_rank(), &self.columns_of(a)));
        self.spans.write().expect("poisoned").insert(a, s.clone());
        s
    }

    /// Whether `a` is a circuit: nullity one and every proper subset independent.
    pub fn is_circuit(&self, a: IndexSet) -> bool {
        !a.is_empty() && self.nullity(a) == 1 && a.iter().all(|i| self.is_independent(a.without(i)))
    }

    /// All signed circuits in canonical orientation, by size then lexicographically.
    pub fn circuits(&self) -> Vec<SignedCircuit> {
        let rank = self.full_rank();
        self.ground_set()
            .subsets()
            .into_iter()
            .filter(|c| c.len() <= rank + 1 && self.is_circuit(*c))
            .map(|c| self.circuit_on(c))
            .collect()
    }

    fn circuit_on(&self, support: IndexSet) -> SignedCircuit {
        let kernel = integer_kernel_basis(&self.columns_of(support));
        debug_assert_eq!(kernel.cols(), 1);
        let mut relation = vec![BigInt::zero(); self.len()];
        for (p, i) in support.iter().enumerate() {
            relation[i] = kernel[(p, 0)].clone();
        }
        let first = support.min().expect("circuits are non-empty");
        if relation[first].is_negative() {
            for x in relation.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let positive = support
            .iter()
            .filter(|&i| relation[i].is_positive())
            .collect();
        let negative = support
            .iter()
            .filter(|&i| relation[i].is_negative())
            .collect();
        SignedCircuit {
            positive,
            negative,
            relation,
        }
    }

    /// The unique circuit inside a set of nullity one.
    pub fn unique_circuit(&self, a: IndexSet) -> Result<SignedCircuit> {
        self.check(a)?;
        let nullity = self.nullity(a);
        if nullity != 1 {
            return Err(Error::Nullity { nullity });
        }
        let kernel = integer_kernel_basis(&self.columns_of(a));
        let support = a
            .iter()
            .enumerate()
            .filter(|&(p, _)| !kernel[(p, 0)].is_zero())
            .map(|(_, i)| i)
            .collect();
        Ok(self.circuit_on(support))
    }

    pub fn circuit(&self, support: IndexSet) -> Result<SignedCircuit> {
        self.check(support)?;
        if !self.is_circuit(support) {
            return Err(Error::NotCircuit);
        }
        Ok(self.circuit_on(support))
    }

    /// Sign of the determinant of the columns of `b` written in the saturated basis of `span`.
    fn relative_sign(&self, b: IndexSet, span: IndexSet) -> Result<i32> {
        let basis = self.span_basis(span);
        let coords: Vec<Vec<BigInt>> = b
            .iter()
            .map(|i| {
                lattice_coordinates(&basis, &self.character(i))
                    .ok_or_else(|| Error::Inconsistent("column outside its saturated span".into()))
            })
            .collect::<Result<_>>()?;
        det_sign(&IntegerMatrix::from_columns(basis.cols(), &coords))
    }

    /// Chirotope value of a basis `b` of the matroid.
    pub fn basis_sign(&self, b: IndexSet) -> Result<i32> {
        self.check(b)?;
        if !self.is_independent(b) || b.len() != self.full_rank() {
            return Err(Error::NotBasis);
        }
        self.relative_sign(b, self.ground_set())
    }

    /// `c_i` for `i` in the support of `c`, listed in ground-set order.
    pub fn circuit_signs(&self, c: &SignedCircuit) -> Result<Vec<(usize, i32)>> {
        let support = c.support();
        self.check(support)?;
        if !self.is_circuit(support) {
            return Err(Error::NotCircuit);
        }
        let flip = if c.is_canonical() { 1 } else { -1 };
        support
            .iter()
            .map(|i| Ok((i, flip * self.relative_sign(support.without(i), support)?)))
            .collect()
    }

    /// All sets of nullity one accepted by `filter`, each with its circuit.
    pub fn nullity_one_sets(
        &self,
        filter: Option<&dyn Fn(IndexSet) -> bool>,
    ) -> Vec<(IndexSet, SignedCircuit)> {
        let rank = self.full_rank();
        self.ground_set()
            .subsets()
            .into_iter()
            .filter(|x| x.len() <= rank + 1 && self.nullity(*x) == 1)
            .filter(|x| filter.is_none_or(|f| f(*x)))
            .map(|x| (x, self.unique_circuit(x).expect("nullity checked")))
            .collect()
    }

    /// Degree of the covering that makes the preimage of `x` unimodular.
    pub fn separating_cover_degree(&self, x: IndexSet, a: usize) -> Result<BigInt> {
        let c = self.unique_circuit(x)?.support();
        let n = self.rank(c) as u32;
        let r = self.lattice_rank() as u32;
        let a = a as u32;
        let mut deg = Pow::pow(self.multiplicity(c), a);
        deg *= Pow::pow(self.multiplicity(x), a * r.saturating_sub(1));
        for i in c.iter() {
            deg *= Pow::pow(self.multiplicity(c.without(i)), a * n.saturating_sub(1));
        }
        Ok(deg)
    }
}

/// Sign of the shuffle taking the sorted `a ⊔ b` to `a` followed by `b`.
pub fn shuffle_sign(a: IndexSet, b: IndexSet) -> Result<i32> {
    if !a.is_disjoint(b) {
        return Err(Error::Overlap);
    }
    let inversions: usize = a.iter().map(|x| b.count_below(x)).sum();
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

pub mod axioms {
    //! Exhaustive checks of the matroid, arithmetic and oriented axioms.

    use super::*;

    pub fn rank_axioms(m: &ArithmeticOrientedMatroid) -> std::result::Result<(), String> {
        let all = m.ground_set().subsets();
        for &a in &all {
            if m.rank(a) > a.len() {
                return Err(format!("R1 fails at {a:?}"));
            }
            for i in m.ground_set().difference(a).iter() {
                let up = m.rank(a.with(i));
                if up < m.rank(a) || up > m.rank(a) + 1 {
                    return Err(format!("R2 fails at {a:?} + {i}"));
                }
            }
            for &b in &all {
                if m.rank(a.union(b)) + m.rank(a.intersection(b)) > m.rank(a) + m.rank(b) {
                    return Err(format!("R3 fails at {a:?}, {b:?}"));
                }
            }
        }
        Ok(())
    }

    /// (AM1) and (AM2).
    pub fn divisibility_axioms(m: &ArithmeticOrientedMatroid) -> std::result::Result<(), String> {
        for a in m.ground_set().subsets() {
            for i in m.ground_set().difference(a).iter() {
                let (ma, mb) = (m.multiplicity(a), m.multiplicity(a.with(i)));
                if m.rank(a.with(i)) == m.rank(a) {
                    if !ma.is_multiple_of(&mb) {
                        return Err(format!("AM1 fails at {a:?} + {i}"));
                    }
                } else if !mb.is_multiple_of(&ma) {
                    return Err(format!("AM2 fails at {a:?} + {i}"));
                }
            }
        }
        Ok(())
    }

    /// (AM3) over every decomposition `B = A ⊔ F ⊔ T` satisfying its hypothesis.
    /// Returns the number of decompositions checked.
    pub fn molecule_axiom(m: &ArithmeticOrientedMatroid) -> std::result::Result<usize, String> {
        let mut checked = 0;
        for b in m.ground_set().subsets() {
            for a in b.subsets() {
                let rest = b.difference(a);
                for f in rest.subsets() {
                    let t = rest.difference(f);
                    let hypothesis = rest
                        .subsets()
                        .into_iter()
                        .all(|s| m.rank(a.union(s)) == m.rank(a) + s.intersection(f).len());
                    if !hypothesis {
                        continue;
                    }
                    checked += 1;
                    let lhs = m.multiplicity(a) * m.multiplicity(b);
                    let rhs = m.multiplicity(a.union(f)) * m.multiplicity(a.union(t));
                    if lhs != rhs {
                        return Err(format!("AM3 fails at A={a:?} F={f:?} T={t:?}"));
                    }
                }
            }
        }
        Ok(checked)
    }

    /// (C0)-(C3) on the canonical circuits together with their opposites.
    pub fn circuit_axioms(m: &ArithmeticOrientedMatroid) -> std::result::Result<(), String> {
        let mut all = Vec::new();
        for c in m.circuits() {
            all.push(c.negated());
            all.push(c);
        }
        let key = |c: &SignedCircuit| (c.positive, c.negative);
        let keys: std::collections::HashSet<_> = all.iter().map(key).collect();
        for c in &all {
            if c.support().is_empty() {
                return Err("C0 fails".into());
            }
            if !keys.contains(&(c.negative, c.positive)) {
                return Err(format!("C1 fails at {:?}", key(c)));
            }
            let primitive = c.relation.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !primitive.is_one() {
                return Err(format!("relation of {:?} is not primitive", key(c)));
            }
            for d in &all {
                let (cs, ds) = (c.support(), d.support());
                if cs.is_subset(ds)
                    && key(c) != key(d)
                    && (c.positive, c.negative) != (d.negative, d.positive)
                {
                    return Err(format!("C2 fails at {:?} {:?}", key(c), key(d)));
                }
                if (c.positive, c.negative) == (d.negative, d.positive) {
                    continue;
                }
                for i in c.positive.intersection(d.negative).iter() {
                    let pos = c.positive.union(d.positive).without(i);
                    let neg = c.negative.union(d.negative).without(i);
                    let found = all
                        .iter()
                        .any(|b| b.positive.is_subset(pos) && b.negative.is_subset(neg));
                    if !found {
                        return Err(format!("C3 fails at {:?} {:?} on {i}", key(c), key(d)));
                    }
                }
            }
        }
        Ok(())
    }
}
