use num_bigint::BigInt;
use num_rational::BigRational;

use super::exterior::ExteriorMonomial;
use super::ring::{CohomologyRing, RingBasisSymbol, RingElement};
use crate::arrangement::LayerId;
use crate::error::{Error, Result};
use crate::matroid::{shuffle_sign, SignedCircuit};
use crate::subset::IndexSet;

/// Which element of `K` plays `i_K` in the b = 1 circuit relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IkChoice {
    #[default]
    Min,
    Max,
    /// The element at this position of `K` (ascending), taken mod `|K|`.
    Nth(usize),
}

impl IkChoice {
    fn pick(self, k: IndexSet) -> usize {
        let v = k.to_vec();
        match self {
            IkChoice::Min => v[0],
            IkChoice::Max => v[v.len() - 1],
            IkChoice::Nth(n) => v[n % v.len()],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitOptions {
    pub ik: IkChoice,
    pub reverse_all: bool,
    /// Nullity-one sets whose circuit is used with the opposite orientation.
    pub reversed: Vec<IndexSet>,
}

impl CircuitOptions {
    fn reverses(&self, x: IndexSet) -> bool {
        self.reverse_all != self.reversed.contains(&x)
    }
}

/// A circuit relation together with the data it was built from.
#[derive(Clone, Debug)]
pub struct CircuitRelation {
    pub set: IndexSet,
    pub layer: LayerId,
    pub element: RingElement,
}

impl CohomologyRing<'_> {
    /// Spanning set of `ω_{W,A} · ker(H*(G^r) → H*(W))` as generators of the ideal:
    /// `ω_{W,A} ψ_i^j` for `i ∈ A` and every torus coordinate `j`.
    pub fn relation_prod1(&self, w: LayerId, a: IndexSet) -> Result<Vec<RingElement>> {
        let omega = self.omega(w, a)?;
        let mut out = Vec::new();
        for i in a.iter() {
            for j in 0..self.a() {
                out.push(self.multiply(&omega, &self.psi_class(i, j)?));
            }
        }
        Ok(out)
    }

    /// Every `relation_prod1` generator multiplied by every exterior monomial, restricted
    /// to degree `k`.
    pub fn prod1_span_generators(&self, k: usize) -> Result<Vec<RingElement>> {
        let all = IndexSet::full(self.exterior_generator_count());
        let d = self.d();
        let mut out = Vec::new();
        for &(w, a) in self.omega_generators() {
            let base = a.len() * d + 1;
            if a.is_empty() || base > k {
                continue;
            }
            let gens = self.relation_prod1(w, a)?;
            for mono in ExteriorMonomial::all_of_degree(all, k - base) {
                let x = RingElement::from_symbol(RingBasisSymbol {
                    layer: self.poset.bottom(),
                    set: IndexSet::EMPTY,
                    mono,
                });
                for g in &gens {
                    let e = self.multiply(g, &x);
                    if !e.is_zero() {
                        out.push(e);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The circuit relation of the central nullity-one set `x` at the component `y`.
    pub fn relation_circuit(
        &self,
        x: IndexSet,
        y: LayerId,
        opts: &CircuitOptions,
    ) -> Result<RingElement> {
        let m = self.arr.matroid();
        if m.nullity(x) != 1 || !self.arr.is_central(x) {
            return Err(Error::Nullity {
                nullity: m.nullity(x),
            });
        }
        if y >= self.poset.len() {
            return Err(Error::UnknownLayer);
        }
        let layer = self.poset.layer(y);
        if !x.is_subset(layer.support) || layer.rank != m.rank(x) {
            return Err(Error::Dimension(format!(
                "layer {y} is not a component over {x:?}"
            )));
        }
        let mut circuit = m.unique_circuit(x)?;
        if opts.reverses(x) {
            circuit = circuit.negated();
        }
        if self.arr.b() == 1 {
            self.circuit_relation_toric(x, y, &circuit, opts.ik)
        } else {
            self.circuit_relation_affine(x, y, &circuit)
        }
    }

    /// Each term is `ω_{C∖K} ψ_B ω_F` (`B = K ∖ i_K`, `F = X ∖ C`) rewritten on the symbol
    /// `ω_{W,X∖K} ψ_B`; for `F = ∅` this is `η_{W,C∖K,B}`.
    fn circuit_relation_toric(
        &self,
        x: IndexSet,
        y: LayerId,
        circuit: &SignedCircuit,
        ik: IkChoice,
    ) -> Result<RingElement> {
        let m = self.arr.matroid();
        let a = self.a();
        let d = self.d();
        let support = circuit.support();
        let f = x.difference(support);
        let signs = m.circuit_signs(circuit)?;
        let c = |i: usize| signs.iter().find(|(j, _)| *j == i).expect("in circuit").1;
        let side = |part: IndexSet| -> Result<RingElement> {
            let mut sum = RingElement::zero();
            for k in part.subsets().into_iter().filter(|k| !k.is_empty()) {
                let i_k = ik.pick(k);
                let b = k.without(i_k);
                let rest = x.difference(k);
                let w = self.arr.layer_above(y, rest)?;
                let mut coeff = BigRational::new(
                    m.multiplicity(rest).pow(a as u32),
                    m.multiplicity(x.without(i_k)).pow(a as u32),
                );
                let mut odd = k.len() % 2 == 1;
                if d % 2 == 1 {
                    let core = support.difference(k);
                    odd ^= c(i_k) < 0;
                    odd ^= shuffle_sign(core, b)? < 0;
                    odd ^= shuffle_sign(core, f)? < 0;
                }
                odd ^= (a * d * b.len() * f.len()) % 2 == 1;
                if odd {
                    coeff = -coeff;
                }
                let term = self.multiply(&self.omega(w, rest)?, &self.psi_set(b)?);
                sum = &sum + &term.scale(&coeff);
            }
            Ok(sum)
        };
        Ok(&side(circuit.negative)? - &side(circuit.positive)?)
    }

    /// `Σ_{i∈C} ± ω_{Y,X∖i}`, signs from `∂ω_C · ω_F` when `d` is odd and from the
    /// orientation when `d` is even.
    fn circuit_relation_affine(
        &self,
        x: IndexSet,
        y: LayerId,
        circuit: &SignedCircuit,
    ) -> Result<RingElement> {
        let support = circuit.support();
        let f = x.difference(support);
        let mut out = RingElement::zero();
        for i in support.iter() {
            let negative = if self.d() % 2 == 1 {
                (support.count_below(i) % 2 == 1) != (shuffle_sign(support.without(i), f)? < 0)
            } else {
                circuit.positive.contains(i)
            };
            let sign = if negative { -1 } else { 1 };
            let term = self.omega(y, x.without(i))?;
            out = &out + &term.scale(&BigRational::from_integer(BigInt::from(sign)));
        }
        Ok(out)
    }

    /// Central nullity-one sets paired with each component of their intersection.
    pub fn circuit_sites(&self) -> Vec<(IndexSet, LayerId)> {
        let central = |s: IndexSet| self.arr.is_central(s);
        let mut out = Vec::new();
        for (x, _) in self.arr.matroid().nullity_one_sets(Some(&central)) {
            let rank = self.arr.matroid().rank(x);
            for y in self.poset.components_over(x, rank) {
                out.push((x, y));
            }
        }
        out
    }

    pub fn circuit_relations(&self, opts: &CircuitOptions) -> Result<Vec<CircuitRelation>> {
        self.circuit_sites()
            .into_iter()
            .map(|(set, layer)| {
                Ok(CircuitRelation {
                    set,
                    layer,
                    element: self.relation_circuit(set, layer, opts)?,
                })
            })
            .collect()
    }
}

/// `true` when `u = ±v`.
pub fn equal_up_to_sign(u: &RingElement, v: &RingElement) -> bool {
    u == v || u == &-v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::tests::{cu, ncnu, set};
    use crate::exactlin::rational::rat;

    fn omega2(ring: &CohomologyRing, i: usize, j: usize) -> RingElement {
        ring.multiply(&ring.omega_of(i).unwrap(), &ring.omega_of(j).unwrap())
    }

    #[test]
    fn prod1_single() {
        let arr = cu(1, 1);
        let ring = CohomologyRing::new(&arr).unwrap();
        let w0 = ring.poset.components_over(set(&[0]), 1).next().unwrap();
        let rels = ring.relation_prod1(w0, set(&[0])).unwrap();
        assert_eq!(rels.len(), 1);
        let expected = ring.multiply(&ring.omega_of(0).unwrap(), &ring.psi_class(0, 0).unwrap());
        assert_eq!(rels[0], expected);
        assert!(ring
            .relation_prod1(ring.poset.bottom(), IndexSet::EMPTY)
            .unwrap()
            .is_empty());
        let top = ring.poset.of_rank(2)[0];
        assert_eq!(ring.relation_prod1(top, set(&[0, 1])).unwrap().len(), 2);
    }

    /// ω1ω2 + ω2ω3 − ω1ω3 − ω3ψ1 at d = 1.
    fn cu_circuit_relation(ring: &CohomologyRing) -> RingElement {
        let w3psi1 = ring.multiply(&ring.omega_of(2).unwrap(), &ring.psi(0).unwrap());
        &(&(&omega2(ring, 0, 1) + &omega2(ring, 1, 2)) - &omega2(ring, 0, 2)) - &w3psi1
    }

    #[test]
    fn cu_relation_matches_hand_computation() {
        let arr = cu(1, 1);
        let ring = CohomologyRing::new(&arr).unwrap();
        let top = ring.poset.of_rank(2)[0];
        let x = set(&[0, 1, 2]);
        let max = CircuitOptions {
            ik: IkChoice::Max,
            ..Default::default()
        };
        let rel = ring.relation_circuit(x, top, &max).unwrap();
        assert!(equal_up_to_sign(&rel, &cu_circuit_relation(&ring)));
        // the default choice differs by ω3ψ3, a prod1 relation
        let rel_min = ring
            .relation_circuit(x, top, &CircuitOptions::default())
            .unwrap();
        let w3psi3 = ring.multiply(&ring.omega_of(2).unwrap(), &ring.psi(2).unwrap());
        let diff = &rel_min + &cu_circuit_relation(&ring);
        assert!(equal_up_to_sign(&diff, &w3psi3));
    }

    #[test]
    fn reversed_orientation_negates() {
        let arr = cu(2, 1);
        let ring = CohomologyRing::new(&arr).unwrap();
        let top = ring.poset.of_rank(2)[0];
        let x = set(&[0, 1, 2]);
        let rel = ring
            .relation_circuit(x, top, &CircuitOptions::default())
            .unwrap();
        let rev = CircuitOptions {
            reverse_all: true,
            ..Default::default()
        };
        let flipped = ring.relation_circuit(x, top, &rev).unwrap();
        assert_eq!(flipped, -&rel);
    }

    #[test]
    fn ncnu_relation_coefficients() {
        let arr = ncnu(1, 1);
        let ring = CohomologyRing::new(&arr).unwrap();
        let x = set(&[0, 1, 2]);
        let sites: Vec<_> = ring
            .circuit_sites()
            .into_iter()
            .filter(|s| s.0 == x)
            .collect();
        assert_eq!(sites.len(), 1);
        let rel = ring
            .relation_circuit(x, sites[0].1, &CircuitOptions::default())
            .unwrap();
        let w = sites[0].1;
        let w12 =
            RingElement::from_symbol(ring.symbol(w, set(&[0, 1]), ExteriorMonomial::ONE).unwrap());
        let w23 =
            RingElement::from_symbol(ring.symbol(w, set(&[1, 2]), ExteriorMonomial::ONE).unwrap());
        let w13 =
            RingElement::from_symbol(ring.symbol(w, set(&[0, 2]), ExteriorMonomial::ONE).unwrap());
        let w3psi2 = ring.multiply(&ring.omega_of(2).unwrap(), &ring.psi(1).unwrap());
        // ω12 − (−1)^d ω23 − ω13 + 2^{−a} ω3ψ2 at d = 1
        let expected = &(&(&w12 + &w23) - &w13) + &w3psi2.scale(&rat(1, 2));
        assert!(equal_up_to_sign(&rel, &expected), "{rel:?}");
    }

    #[test]
    fn orlik_solomon_at_zero_two() {
        let arr = cu(0, 2);
        let ring = CohomologyRing::new(&arr).unwrap();
        let top = ring.poset.of_rank(2)[0];
        let rel = ring
            .relation_circuit(set(&[0, 1, 2]), top, &CircuitOptions::default())
            .unwrap();
        let os = &(&omega2(&ring, 1, 2) - &omega2(&ring, 0, 2)) + &omega2(&ring, 0, 1);
        assert_eq!(rel, os);
        assert!(ring
            .relation_circuit(set(&[0, 1]), top, &CircuitOptions::default())
            .is_err());
    }
}
