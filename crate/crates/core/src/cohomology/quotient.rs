use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exterior::{mul_linear, ExteriorElement, ExteriorMonomial};
use super::relations::{CircuitOptions, CircuitRelation};
use super::ring::{CohomologyRing, RingBasisSymbol, RingElement};
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseVector};
use crate::subset::IndexSet;

/// Per-degree Betti numbers `b_0, b_1, …` with trailing zeros removed.
pub type BettiTable = Vec<usize>;

/// Substitution `x_g ↦ linear form` that eliminates the pivot generators of
/// `span{ψ_i^j : i ∈ A}`; every `ω_{W,A} x_S` reduces modulo the prod1 ideal to a
/// combination of monomials in the free generators.
#[derive(Clone, Debug)]
struct Reduction {
    free: IndexSet,
    images: Vec<Vec<(usize, BigRational)>>,
}

impl Reduction {
    fn new(ring: &CohomologyRing, set: IndexSet) -> Self {
        let r = ring.rank();
        let a = ring.a();
        let rows: Vec<Vec<BigRational>> = set
            .iter()
            .map(|i| {
                ring.arr
                    .subvariety(i)
                    .chi
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect()
            })
            .collect();
        let (rref, pivots) = rref(rows, r);
        let pivot_set = IndexSet::from_indices(pivots.iter().copied());
        let mut images = vec![Vec::new(); r * a];
        let mut free = IndexSet::EMPTY;
        for k in 0..r {
            for j in 0..a {
                let g = k * a + j;
                if let Some(row) = pivots.iter().position(|&p| p == k) {
                    images[g] = (0..r)
                        .filter(|c| !pivot_set.contains(*c) && !rref[row][*c].is_zero())
                        .map(|c| (c * a + j, -rref[row][c].clone()))
                        .collect();
                } else {
                    free = free.with(g);
                    images[g] = vec![(g, BigRational::one())];
                }
            }
        }
        Self { free, images }
    }

    fn reduce(&self, mono: ExteriorMonomial) -> ExteriorElement {
        let mut e = ExteriorElement::new();
        e.insert(ExteriorMonomial::ONE, BigRational::one());
        for g in mono.generators() {
            e = mul_linear(&e, &self.images[g]);
            if e.is_empty() {
                break;
            }
        }
        e
    }
}

fn rref(mut rows: Vec<Vec<BigRational>>, width: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..width {
        let Some(p) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next][col].recip();
        for x in rows[next].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != next && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    (rows, pivots)
}

/// The presented ring `R / I`, with `I` split as the prod1 ideal `J` (handled by a normal
/// form) plus the circuit relations times quotient symbols.
pub struct Quotient<'r, 'a> {
    ring: &'r CohomologyRing<'a>,
    relations: Vec<CircuitRelation>,
    reductions: HashMap<IndexSet, Reduction>,
    top: usize,
    bases: Vec<Vec<RingBasisSymbol>>,
    index: Vec<HashMap<RingBasisSymbol, usize>>,
    spans: Vec<Echelon>,
}

impl<'r, 'a> Quotient<'r, 'a> {
    /// Builds every degree up to `top` (the ring's cutoff when `None`).
    pub fn new(
        ring: &'r CohomologyRing<'a>,
        opts: &CircuitOptions,
        top: Option<usize>,
    ) -> Result<Self> {
        let top = top.unwrap_or_else(|| ring.degree_cutoff());
        let relations = ring.circuit_relations(opts)?;
        let mut reductions = HashMap::new();
        for &(_, set) in ring.omega_generators() {
            reductions
                .entry(set)
                .or_insert_with(|| Reduction::new(ring, set));
        }
        let d = ring.d();
        let mut bases = vec![Vec::new(); top + 1];
        for &(layer, set) in ring.omega_generators() {
            let base = set.len() * d;
            for (k, basis) in bases.iter_mut().enumerate().skip(base) {
                for mono in ExteriorMonomial::all_of_degree(reductions[&set].free, k - base) {
                    basis.push(RingBasisSymbol { layer, set, mono });
                }
            }
        }
        let index = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, s)| (*s, i)).collect())
            .collect();
        let mut q = Self {
            ring,
            relations,
            reductions,
            top,
            bases,
            index,
            spans: Vec::new(),
        };
        q.spans = (0..=top).map(|k| q.build_span(k)).collect::<Result<_>>()?;
        Ok(q)
    }

    fn build_span(&self, k: usize) -> Result<Echelon> {
        let d = self.ring.d();
        let mut echelon = Echelon::new();
        for rel in &self.relations {
            let Some(e) = rel.element.degree(d) else {
                continue;
            };
            if e > k {
                continue;
            }
            for s in &self.bases[k - e] {
                let prod = self
                    .ring
                    .multiply(&rel.element, &RingElement::from_symbol(*s));
                echelon.insert(self.reduce_in_degree(&prod, k)?);
            }
        }
        Ok(echelon)
    }

    pub fn ring(&self) -> &'r CohomologyRing<'a> {
        self.ring
    }

    pub fn top_degree(&self) -> usize {
        self.top
    }

    pub fn relations(&self) -> &[CircuitRelation] {
        &self.relations
    }

    /// Symbols spanning `(R/J)_k`.
    pub fn quotient_basis(&self, k: usize) -> &[RingBasisSymbol] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn quotient_dimension(&self, k: usize) -> usize {
        self.quotient_basis(k).len()
    }

    /// The circuit part of `I_k`, reduced modulo `J`.
    pub fn reduced_span(&self, k: usize) -> Option<&Echelon> {
        self.spans.get(k)
    }

    pub fn relation_rank(&self, k: usize) -> usize {
        self.spans.get(k).map_or(0, Echelon::rank)
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.top {
            return Err(Error::Dimension(format!(
                "degree {k} is above the computed range 0..={}",
                self.top
            )));
        }
        Ok(())
    }

    fn reduce_in_degree(&self, e: &RingElement, k: usize) -> Result<SparseVector> {
        self.check_degree(k)?;
        let d = self.ring.d();
        let mut acc: HashMap<RingBasisSymbol, BigRational> = HashMap::new();
        for (s, c) in e.terms() {
            if s.degree(d) != k {
                return Err(Error::Dimension(format!("term {s:?} is not of degree {k}")));
            }
            let red = &self.reductions[&s.set];
            for (m, x) in red.reduce(s.mono) {
                let sym = RingBasisSymbol {
                    layer: s.layer,
                    set: s.set,
                    mono: m,
                };
                *acc.entry(sym).or_insert_with(BigRational::zero) += c * x;
            }
        }
        let mut v = SparseVector::new();
        for (sym, x) in acc {
            if !x.is_zero() {
                v.insert(self.index[k][&sym], x);
            }
        }
        Ok(v)
    }

    /// Coordinates of `e` modulo `J` in the quotient basis of degree `k`.
    pub fn normal_form(&self, e: &RingElement, k: usize) -> Result<SparseVector> {
        self.reduce_in_degree(e, k)
    }

    /// Whether the homogeneous element `e` of degree `k` lies in the relation ideal.
    pub fn contains(&self, e: &RingElement, k: usize) -> Result<bool> {
        Ok(self.spans[k].contains(self.reduce_in_degree(e, k)?))
    }

    /// `true` iff `e` vanishes in the presented ring; the degree is read from `e`.
    pub fn vanishes(&self, e: &RingElement) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        let k = e
            .degree(self.ring.d())
            .ok_or_else(|| Error::Dimension("inhomogeneous element".into()))?;
        self.contains(e, k)
    }

    pub fn element_of(&self, k: usize, v: &SparseVector) -> RingElement {
        let mut e = RingElement::zero();
        for (i, c) in v {
            e.add_term(self.bases[k][*i], c.clone());
        }
        e
    }

    pub fn betti_numbers(&self) -> BettiTable {
        let mut betti: Vec<usize> = (0..=self.top)
            .map(|k| self.quotient_dimension(k) - self.relation_rank(k))
            .collect();
        while betti.len() > 1 && betti.last() == Some(&0) {
            betti.pop();
        }
        betti
    }

    /// Multiplies every reduced span vector by every ring generator and checks that the
    /// product stays in the span. Returns the number of products checked.
    pub fn check_stability(&self) -> std::result::Result<usize, String> {
        let ring = self.ring;
        let d = ring.d();
        let mut generators: Vec<(usize, RingElement)> = Vec::new();
        for &(layer, set) in ring.omega_generators() {
            if !set.is_empty() {
                let w = ring.omega(layer, set).map_err(|e| e.to_string())?;
                generators.push((set.len() * d, w));
            }
        }
        for k in 0..ring.rank() {
            for j in 0..ring.a() {
                generators.push((1, ring.x(k, j).map_err(|e| e.to_string())?));
            }
        }
        let mut checked = 0;
        for k in 0..=self.top {
            for row in self.spans[k].rows() {
                let e = self.element_of(k, row);
                for (g_deg, g) in &generators {
                    let target = k + g_deg;
                    if target > self.top {
                        continue;
                    }
                    let prod = ring.multiply(&e, g);
                    let v = self
                        .reduce_in_degree(&prod, target)
                        .map_err(|e| e.to_string())?;
                    if !self.spans[target].contains(v) {
                        return Err(format!(
                            "a degree-{k} relation times a degree-{g_deg} generator leaves the span"
                        ));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }

    /// Whether two presentations have the same relation span in every degree.
    pub fn same_span(&self, other: &Quotient) -> bool {
        self.top == other.top
            && (0..=self.top).all(|k| {
                self.spans[k].rank() == other.spans[k].rank()
                    && other.spans[k]
                        .rows()
                        .all(|r| self.spans[k].contains(r.clone()))
            })
    }
}

/// Row-reduced spanning set of `I_k` in the coordinates of the full free basis.
pub struct RelationSpan {
    pub symbols: Vec<RingBasisSymbol>,
    pub echelon: Echelon,
    index: HashMap<RingBasisSymbol, usize>,
}

impl RelationSpan {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dimension(&self) -> usize {
        self.symbols.len()
    }

    fn coordinates(&self, e: &RingElement) -> Option<SparseVector> {
        let mut v = SparseVector::new();
        for (s, c) in e.terms() {
            v.insert(*self.index.get(s)?, c.clone());
        }
        Some(v)
    }

    pub fn contains(&self, e: &RingElement) -> bool {
        self.coordinates(e)
            .is_some_and(|v| self.echelon.contains(v))
    }
}

impl CohomologyRing<'_> {
    /// `I_k` built literally: prod1 generators times exterior monomials, plus every circuit
    /// relation times every free basis symbol of complementary degree.
    pub fn relation_span(&self, k: usize, opts: &CircuitOptions) -> Result<RelationSpan> {
        let symbols = self.free_basis(k);
        let index: HashMap<_, _> = symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut span = RelationSpan {
            symbols,
            echelon: Echelon::new(),
            index,
        };
        let push = |span: &mut RelationSpan, e: &RingElement| -> Result<()> {
            let v = span
                .coordinates(e)
                .ok_or_else(|| Error::Inconsistent("relation outside the free basis".into()))?;
            span.echelon.insert(v);
            Ok(())
        };
        for e in self.prod1_span_generators(k)? {
            push(&mut span, &e)?;
        }
        let d = self.d();
        for rel in self.circuit_relations(opts)? {
            let Some(e) = rel.element.degree(d) else {
                continue;
            };
            if e > k {
                continue;
            }
            for s in self.free_basis(k - e) {
                let prod = self.multiply(&rel.element, &RingElement::from_symbol(s));
                if !prod.is_zero() {
                    push(&mut span, &prod)?;
                }
            }
        }
        Ok(span)
    }

    pub fn betti_numbers(&self, max_degree: Option<usize>) -> Result<BettiTable> {
        let top = max_degree.map_or(self.degree_cutoff(), |m| m.min(self.degree_cutoff()));
        Ok(Quotient::new(self, &CircuitOptions::default(), Some(top))?.betti_numbers())
    }
}
