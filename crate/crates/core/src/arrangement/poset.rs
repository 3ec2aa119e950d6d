use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AbelianArrangement, SamplePoint};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::subset::IndexSet;

pub type LayerId = usize;

/// A connected component of an intersection of subvarieties.
#[derive(Clone, Debug)]
pub struct Layer {
    /// Every `i` with the layer inside `H_i`.
    pub support: IndexSet,
    pub rank: usize,
    pub point: SamplePoint,
    /// Values of the saturated characters of the support; identifies the component.
    pub key: Vec<BigRational>,
}

impl PartialEq for Layer {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.key == other.key
    }
}

impl Eq for Layer {}

#[derive(Clone, Debug)]
pub struct LayerPoset {
    layers: Vec<Layer>,
    by_rank: Vec<Vec<LayerId>>,
    index: HashMap<(IndexSet, Vec<BigRational>), LayerId>,
    // le[x][y]: layer x contains layer y
    le: Vec<Vec<bool>>,
    mobius: Vec<BigInt>,
}

impl LayerPoset {
    pub(super) fn build(arr: &AbelianArrangement) -> Self {
        let m = arr.matroid();
        let mut found: Vec<Layer> = Vec::new();
        let mut index = HashMap::new();
        for set in arr.ground_set().subsets() {
            if !m.is_independent(set) {
                continue;
            }
            for layer in arr.intersection_components(set) {
                let k = (layer.support, layer.key.clone());
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                    e.insert(found.len());
                    found.push(layer);
                }
            }
        }
        // stable sort by rank keeps discovery order within a rank
        let mut order: Vec<LayerId> = (0..found.len()).collect();
        order.sort_by_key(|&i| found[i].rank);
        let layers: Vec<Layer> = order.iter().map(|&i| found[i].clone()).collect();
        let index: HashMap<_, _> = layers
            .iter()
            .enumerate()
            .map(|(i, l)| ((l.support, l.key.clone()), i))
            .collect();

        let top = layers.iter().map(|l| l.rank).max().unwrap_or(0);
        let mut by_rank = vec![Vec::new(); top + 1];
        for (i, l) in layers.iter().enumerate() {
            by_rank[l.rank].push(i);
        }

        let n = layers.len();
        let mut le = vec![vec![false; n]; n];
        for x in 0..n {
            for y in 0..n {
                le[x][y] = contains(arr, &layers[x], &layers[y]);
            }
        }

        let mut mobius = vec![BigInt::zero(); n];
        for y in 0..n {
            mobius[y] = if layers[y].rank == 0 {
                BigInt::one()
            } else {
                -(0..n)
                    .filter(|&x| x != y && le[x][y])
                    .map(|x| mobius[x].clone())
                    .sum::<BigInt>()
            };
        }

        Self {
            layers,
            by_rank,
            index,
            le,
            mobius,
        }
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, id: LayerId) -> &Layer {
        &self.layers[id]
    }

    /// The ambient layer `G^r`.
    pub fn bottom(&self) -> LayerId {
        0
    }

    pub fn of_rank(&self, k: usize) -> &[LayerId] {
        self.by_rank.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn max_rank(&self) -> usize {
        self.by_rank.len() - 1
    }

    pub fn id_of(&self, layer: &Layer) -> Option<LayerId> {
        self.index.get(&(layer.support, layer.key.clone())).copied()
    }

    /// Reverse inclusion: `x <= y` iff layer `x` contains layer `y`.
    pub fn le(&self, x: LayerId, y: LayerId) -> bool {
        self.le[x][y]
    }

    /// `mu(bottom, id)`.
    pub fn mobius(&self, id: LayerId) -> &BigInt {
        &self.mobius[id]
    }

    /// Layers of the given rank whose support contains `set`. For an independent `set` of that
    /// size these are the components of the intersection over `set`.
    pub fn components_over(
        &self,
        set: IndexSet,
        rank: usize,
    ) -> impl Iterator<Item = LayerId> + '_ {
        self.of_rank(rank)
            .iter()
            .copied()
            .filter(move |&l| set.is_subset(self.layers[l].support))
    }

    pub fn characteristic_polynomial(&self, lattice_rank: usize) -> IntPoly {
        self.layers
            .iter()
            .zip(&self.mobius)
            .fold(IntPoly::zero(), |acc, (l, mu)| {
                &acc + &IntPoly::monomial(mu.clone(), lattice_rank - l.rank)
            })
    }
}

fn contains(arr: &AbelianArrangement, x: &Layer, y: &Layer) -> bool {
    x.support.is_subset(y.support) && arr.component_key(x.support, &y.point) == x.key
}

impl AbelianArrangement {
    /// The component of the intersection over `set` containing layer `y`.
    pub fn layer_above(&self, y: LayerId, set: IndexSet) -> Result<LayerId> {
        let poset = self.layer_poset();
        let layer = poset.layer(y);
        if !set.is_subset(layer.support) {
            return Err(Error::Dimension(format!(
                "{set:?} is not contained in the support {:?}",
                layer.support
            )));
        }
        let above = self.layer_through(set, layer.point.clone());
        poset.id_of(&above).ok_or(Error::UnknownLayer)
    }

    pub fn characteristic_polynomial(&self) -> IntPoly {
        self.layer_poset().characteristic_polynomial(self.rank())
    }

    /// `P(t) = (-t^d)^r chi(-(1+t)^a / t^d)`, checked to have constant term 1 and
    /// non-negative coefficients.
    pub fn poincare_polynomial(&self) -> Result<IntPoly> {
        let d = self.d();
        if self.b() == 0 || d == 0 {
            return Err(Error::Parameters {
                a: self.a(),
                b: self.b(),
                reason: "the Poincare polynomial needs b >= 1 and a + b >= 2".into(),
            });
        }
        let r = self.rank();
        let chi = self.characteristic_polynomial();
        let base = IntPoly::one_plus_t().pow(self.a());
        let mut p = IntPoly::zero();
        for (k, c) in chi.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if (r + k).is_multiple_of(2) {
                c.clone()
            } else {
                -c
            };
            p = &p + &base.pow(k).shift(d * (r - k)).scale(&sign);
        }
        if !p.coeff(0).is_one() || p.coeffs().iter().any(|c| c < &BigInt::zero()) {
            return Err(Error::Inconsistent(format!(
                "Poincare polynomial {p} is not a valid Betti generating function"
            )));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{centered, cu, ncnu, ncu, set};
    use super::*;

    #[test]
    fn cu_poset() {
        let arr = cu(1, 1);
        let poset = arr.layer_poset();
        assert_eq!(poset.len(), 5);
        assert_eq!(poset.of_rank(1).len(), 3);
        let top = poset.of_rank(2)[0];
        assert_eq!(poset.mobius(top), &BigInt::from(2));
        assert_eq!(
            arr.characteristic_polynomial(),
            IntPoly::from_i64(&[2, -3, 1])
        );
        assert_eq!(
            arr.poincare_polynomial().unwrap(),
            IntPoly::from_i64(&[1, 5, 6])
        );
    }

    #[test]
    fn empty_arrangement() {
        let arr = centered(3, 1, 1, &[]);
        assert_eq!(arr.layer_poset().len(), 1);
        assert_eq!(arr.layer_poset().mobius(0), &BigInt::one());
        assert_eq!(
            arr.characteristic_polynomial(),
            IntPoly::monomial(BigInt::one(), 3)
        );
        assert_eq!(
            arr.poincare_polynomial().unwrap(),
            IntPoly::one_plus_t().pow(3)
        );
    }

    #[test]
    fn ncu_polynomials() {
        assert_eq!(
            ncu(1, 1).characteristic_polynomial(),
            IntPoly::from_i64(&[6, -5, 1])
        );
        assert_eq!(
            ncu(1, 1).poincare_polynomial().unwrap(),
            IntPoly::from_i64(&[1, 7, 12])
        );
        assert_eq!(
            ncu(0, 2).poincare_polynomial().unwrap(),
            IntPoly::from_i64(&[1, 5, 6])
        );
    }

    #[test]
    fn ncnu_polynomials() {
        let arr = ncnu(1, 1);
        assert_eq!(
            arr.characteristic_polynomial(),
            IntPoly::from_i64(&[-6, 7, -4, 1])
        );
        assert_eq!(
            arr.poincare_polynomial().unwrap(),
            IntPoly::from_i64(&[1, 7, 18, 18])
        );
        let poset = arr.layer_poset();
        let full = set(&[0, 1, 2, 3]);
        let above: Vec<_> = poset
            .of_rank(3)
            .iter()
            .filter(|&&l| poset.layer(l).support == full)
            .collect();
        assert_eq!(above.len(), 2);
        let arr2 = ncnu(2, 1);
        let poset2 = arr2.layer_poset();
        assert_eq!(
            poset2
                .of_rank(3)
                .iter()
                .filter(|&&l| poset2.layer(l).support == full)
                .count(),
            4
        );
    }

    #[test]
    fn layer_above_cases() {
        let arr = ncnu(1, 1);
        let poset = arr.layer_poset();
        let y = poset.of_rank(3)[0];
        assert_eq!(arr.layer_above(y, poset.layer(y).support).unwrap(), y);
        assert_eq!(arr.layer_above(y, IndexSet::EMPTY).unwrap(), poset.bottom());
        let z = arr.layer_above(y, set(&[2, 3])).unwrap();
        assert_eq!(poset.layer(z).support, set(&[2, 3]));
        assert_eq!(arr.intersection_components(set(&[2, 3])).len(), 1);
        assert!(arr.layer_above(poset.bottom(), set(&[0])).is_err());
    }

    #[test]
    fn poincare_rejects_degenerate_parameters() {
        assert!(cu(0, 1).poincare_polynomial().is_err());
        assert!(cu(2, 0).poincare_polynomial().is_err());
    }

    #[test]
    fn charpoly_is_monic_of_degree_rank() {
        for arr in [cu(1, 1), ncu(2, 1), ncnu(1, 2)] {
            let chi = arr.characteristic_polynomial();
            assert_eq!(chi.degree(), Some(arr.rank()));
            assert!(chi.coeff(arr.rank()).is_one());
        }
    }
}
