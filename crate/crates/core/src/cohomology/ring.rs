use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exterior::ExteriorMonomial;
use crate::arrangement::{AbelianArrangement, LayerId, LayerPoset};
use crate::error::{Error, Result};
use crate::matroid::shuffle_sign;
use crate::subset::IndexSet;

/// `ω_{W,A} x_S`, a basis element of the free module `R`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingBasisSymbol {
    pub layer: LayerId,
    pub set: IndexSet,
    pub mono: ExteriorMonomial,
}

impl RingBasisSymbol {
    pub fn degree(&self, d: usize) -> usize {
        self.set.len() * d + self.mono.degree()
    }
}

impl fmt::Debug for RingBasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w[{}:{:?}]{:?}", self.layer, self.set, self.mono)
    }
}

/// Finite rational combination of basis symbols.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RingElement {
    terms: BTreeMap<RingBasisSymbol, BigRational>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_symbol(s: RingBasisSymbol) -> Self {
        let mut e = Self::zero();
        e.add_term(s, BigRational::one());
        e
    }

    pub fn terms(&self) -> &BTreeMap<RingBasisSymbol, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &RingBasisSymbol) -> BigRational {
        self.terms.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, s: RingBasisSymbol, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(s, x)| (*s, x * c)).collect(),
        }
    }

    /// The common degree of all terms, `None` for zero or inhomogeneous elements.
    pub fn degree(&self, d: usize) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|s| s.degree(d));
        let first = degrees.next()?;
        degrees.all(|k| k == first).then_some(first)
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(*s, c.clone());
        }
        out
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(*s, -c);
        }
        out
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){s:?}")?;
        }
        Ok(())
    }
}

type OmegaKey = (LayerId, IndexSet, LayerId, IndexSet);
/// Sign and summed layers of a product of two ω symbols; `None` when it vanishes.
type OmegaProduct = Option<(i32, Vec<LayerId>)>;

/// The free module `R` with its product, attached to one arrangement.
pub struct CohomologyRing<'a> {
    pub(super) arr: &'a AbelianArrangement,
    pub(super) poset: &'a LayerPoset,
    pub(super) generators: Vec<(LayerId, IndexSet)>,
    omega_cache: RwLock<HashMap<OmegaKey, OmegaProduct>>,
}

impl<'a> CohomologyRing<'a> {
    pub fn new(arr: &'a AbelianArrangement) -> Result<Self> {
        if arr.b() == 0 || arr.d() == 0 {
            return Err(Error::Parameters {
                a: arr.a(),
                b: arr.b(),
                reason: "the presented ring needs b >= 1 and a + b >= 2".into(),
            });
        }
        if arr.rank() * arr.a() > 64 {
            return Err(Error::Dimension("more than 64 exterior generators".into()));
        }
        let poset = arr.layer_poset();
        let m = arr.matroid();
        let mut generators = Vec::new();
        for set in arr.ground_set().subsets() {
            if !m.is_independent(set) {
                continue;
            }
            for w in poset.components_over(set, set.len()) {
                generators.push((w, set));
            }
        }
        Ok(Self {
            arr,
            poset,
            generators,
            omega_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn arrangement(&self) -> &'a AbelianArrangement {
        self.arr
    }

    pub fn a(&self) -> usize {
        self.arr.a()
    }

    pub fn d(&self) -> usize {
        self.arr.d()
    }

    pub fn rank(&self) -> usize {
        self.arr.rank()
    }

    pub fn exterior_generator_count(&self) -> usize {
        self.rank() * self.a()
    }

    /// All pairs `(W, A)` with `A` independent and `W` a component over `A`.
    pub fn omega_generators(&self) -> &[(LayerId, IndexSet)] {
        &self.generators
    }

    pub fn symbol(
        &self,
        layer: LayerId,
        set: IndexSet,
        mono: ExteriorMonomial,
    ) -> Result<RingBasisSymbol> {
        if layer >= self.poset.len() {
            return Err(Error::UnknownLayer);
        }
        if !self.arr.matroid().is_independent(set) {
            return Err(Error::Dependent);
        }
        let l = self.poset.layer(layer);
        if l.rank != set.len() || !set.is_subset(l.support) {
            return Err(Error::Dimension(format!(
                "layer {layer} is not a component over {set:?}"
            )));
        }
        if mono
            .as_set()
            .max()
            .is_some_and(|g| g >= self.exterior_generator_count())
        {
            return Err(Error::BadIndex {
                index: mono.as_set().max().unwrap_or(0),
                size: self.exterior_generator_count(),
            });
        }
        Ok(RingBasisSymbol { layer, set, mono })
    }

    pub fn one(&self) -> RingElement {
        RingElement::from_symbol(RingBasisSymbol {
            layer: self.poset.bottom(),
            set: IndexSet::EMPTY,
            mono: ExteriorMonomial::ONE,
        })
    }

    pub fn omega(&self, layer: LayerId, set: IndexSet) -> Result<RingElement> {
        Ok(RingElement::from_symbol(self.symbol(
            layer,
            set,
            ExteriorMonomial::ONE,
        )?))
    }

    /// `ω_i`, the class of the (connected) subvariety `i`.
    pub fn omega_of(&self, i: usize) -> Result<RingElement> {
        let set = IndexSet::singleton(i);
        let layer = self
            .poset
            .components_over(set, 1)
            .next()
            .ok_or(Error::BadIndex {
                index: i,
                size: self.arr.len(),
            })?;
        self.omega(layer, set)
    }

    /// `x_k^j` (both indices from 0).
    pub fn x(&self, k: usize, j: usize) -> Result<RingElement> {
        if k >= self.rank() || j >= self.a() {
            return Err(Error::BadIndex {
                index: k * self.a() + j,
                size: self.exterior_generator_count(),
            });
        }
        Ok(RingElement::from_symbol(RingBasisSymbol {
            layer: self.poset.bottom(),
            set: IndexSet::EMPTY,
            mono: ExteriorMonomial::generator(k * self.a() + j),
        }))
    }

    /// `ω_{W,A} ω_{W',A'}` as a sign and the layers `L` of the sum.
    pub(super) fn omega_product(
        &self,
        w: LayerId,
        a: IndexSet,
        w2: LayerId,
        a2: IndexSet,
    ) -> OmegaProduct {
        if a.is_empty() {
            return Some((1, vec![w2]));
        }
        if a2.is_empty() {
            return Some((1, vec![w]));
        }
        let key = (w, a, w2, a2);
        if let Some(hit) = self.omega_cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let value = self.omega_product_uncached(w, a, w2, a2);
        self.omega_cache
            .write()
            .expect("cache lock")
            .insert(key, value.clone());
        value
    }

    fn omega_product_uncached(
        &self,
        w: LayerId,
        a: IndexSet,
        w2: LayerId,
        a2: IndexSet,
    ) -> OmegaProduct {
        if !a.is_disjoint(a2) {
            return None;
        }
        let union = a.union(a2);
        if !self.arr.matroid().is_independent(union) {
            return None;
        }
        let sign = shuffle_sign(a, a2).expect("disjoint");
        let sign = if self.d().is_multiple_of(2) { 1 } else { sign };
        let layers: Vec<LayerId> = self
            .poset
            .components_over(union, union.len())
            .filter(|&l| self.poset.le(w, l) && self.poset.le(w2, l))
            .collect();
        Some((sign, layers))
    }

    pub(super) fn symbol_product(
        &self,
        s: &RingBasisSymbol,
        t: &RingBasisSymbol,
    ) -> Option<(i32, Vec<RingBasisSymbol>)> {
        let (ext_sign, mono) = s.mono.wedge(t.mono)?;
        let (omega_sign, layers) = self.omega_product(s.layer, s.set, t.layer, t.set)?;
        // x_S moves past ω_{W',A'}
        let koszul = if (s.mono.degree() * t.set.len() * self.d()).is_multiple_of(2) {
            1
        } else {
            -1
        };
        let set = s.set.union(t.set);
        let symbols = layers
            .into_iter()
            .map(|layer| RingBasisSymbol { layer, set, mono })
            .collect();
        Some((ext_sign * omega_sign * koszul, symbols))
    }

    pub fn multiply(&self, u: &RingElement, v: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (s, x) in u.terms() {
            for (t, y) in v.terms() {
                if let Some((sign, symbols)) = self.symbol_product(s, t) {
                    let c = if sign > 0 { x * y } else { -(x * y) };
                    for sym in symbols {
                        out.add_term(sym, c.clone());
                    }
                }
            }
        }
        out
    }

    pub fn product<'e, I: IntoIterator<Item = &'e RingElement>>(&self, factors: I) -> RingElement {
        factors
            .into_iter()
            .fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    /// `ψ_i^j = Σ_k (χ_i)_k x_k^j`, with `j` from 0.
    pub fn psi_class(&self, i: usize, j: usize) -> Result<RingElement> {
        if i >= self.arr.len() {
            return Err(Error::BadIndex {
                index: i,
                size: self.arr.len(),
            });
        }
        if j >= self.a() {
            return Err(Error::BadIndex {
                index: j,
                size: self.a(),
            });
        }
        let chi = &self.arr.subvariety(i).chi;
        let mut out = RingElement::zero();
        for (k, c) in chi.iter().enumerate() {
            out.add_term(
                RingBasisSymbol {
                    layer: self.poset.bottom(),
                    set: IndexSet::EMPTY,
                    mono: ExteriorMonomial::generator(k * self.a() + j),
                },
                BigRational::from_integer(c.clone()),
            );
        }
        Ok(out)
    }

    /// `ψ_i = ψ_i^1 ⋯ ψ_i^a`; the unit when `a = 0`.
    pub fn psi(&self, i: usize) -> Result<RingElement> {
        let factors = (0..self.a())
            .map(|j| self.psi_class(i, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.product(&factors))
    }

    /// `ψ_B`, factors in ground-set order.
    pub fn psi_set(&self, b: IndexSet) -> Result<RingElement> {
        let factors = b.iter().map(|i| self.psi(i)).collect::<Result<Vec<_>>>()?;
        Ok(self.product(&factors))
    }

    /// `η_{W,A,B} = (-1)^{d ℓ(A,B)} ω_{W,A} ψ_B`.
    pub fn eta(&self, w: LayerId, a: IndexSet, b: IndexSet) -> Result<RingElement> {
        let sign = shuffle_sign(a, b)?;
        let omega = self.omega(w, a)?;
        let e = self.multiply(&omega, &self.psi_set(b)?);
        Ok(if sign < 0 && self.d() % 2 == 1 {
            -&e
        } else {
            e
        })
    }

    /// `Σ_{D ⊆ A} (-1)^{|D|} 2^{|A∖D|} m(A∖D)/m(A) η_{W(A∖D), A∖D, B∪D}`.
    pub fn eta_bar(&self, w: LayerId, a: IndexSet, b: IndexSet) -> Result<RingElement> {
        if !a.is_disjoint(b) {
            return Err(Error::Overlap);
        }
        let m = self.arr.matroid();
        let ma = m.multiplicity(a);
        let mut out = RingElement::zero();
        for dset in a.subsets() {
            let rest = a.difference(dset);
            let layer = self.arr.layer_above(w, rest)?;
            let mut coeff = BigRational::new(
                m.multiplicity(rest) * BigInt::from(2).pow(rest.len() as u32),
                ma.clone(),
            );
            if dset.len() % 2 == 1 {
                coeff = -coeff;
            }
            out = &out + &self.eta(layer, rest, b.union(dset))?.scale(&coeff);
        }
        Ok(out)
    }

    /// Basis symbols of `R` in degree `k`.
    pub fn free_basis(&self, k: usize) -> Vec<RingBasisSymbol> {
        let all = IndexSet::full(self.exterior_generator_count());
        let d = self.d();
        let mut out = Vec::new();
        for &(layer, set) in &self.generators {
            let base = set.len() * d;
            if base > k {
                continue;
            }
            for mono in ExteriorMonomial::all_of_degree(all, k - base) {
                out.push(RingBasisSymbol { layer, set, mono });
            }
        }
        out
    }

    /// Highest degree that can carry cohomology, `r(a+b) - 1`.
    pub fn degree_cutoff(&self) -> usize {
        (self.rank() * (self.a() + self.arr.b())).saturating_sub(1)
    }
}
