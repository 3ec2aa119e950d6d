//! Abelian arrangements in `G^r` with `G = R^b x (S^1)^a`.

mod ops;
mod poset;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlin::rational::frac;
use crate::exactlin::{integer_kernel_basis, smith_normal_form, IntegerMatrix};
use crate::matroid::ArithmeticOrientedMatroid;
use crate::subset::IndexSet;

pub use poset::{Layer, LayerId, LayerPoset};

/// `H = chi^{-1}(g)` with `g = (u, v)`, `u` the real part and `v` the torus part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subvariety {
    pub chi: Vec<BigInt>,
    pub u: Vec<BigRational>,
    pub v: Vec<BigRational>,
    pub label: String,
}

impl Subvariety {
    /// A subvariety through the identity.
    pub fn central(chi: Vec<BigInt>, a: usize, b: usize, label: impl Into<String>) -> Self {
        Self {
            chi,
            u: vec![BigRational::zero(); b],
            v: vec![BigRational::zero(); a],
            label: label.into(),
        }
    }

    fn same_set_as(&self, other: &Subvariety) -> bool {
        let neg = |x: &[BigRational]| x.iter().map(|q| -q).collect::<Vec<_>>();
        let neg_mod = |x: &[BigRational]| x.iter().map(|q| frac(&-q)).collect::<Vec<_>>();
        let neg_chi: Vec<BigInt> = other.chi.iter().map(|x| -x).collect();
        (self.chi == other.chi && self.u == other.u && self.v == other.v)
            || (self.chi == neg_chi && self.u == neg(&other.u) && self.v == neg_mod(&other.v))
    }
}

/// A point of `G^r`: `real[beta]` and `torus[alpha]` are vectors in `Q^r`, torus entries in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SamplePoint {
    pub real: Vec<Vec<BigRational>>,
    pub torus: Vec<Vec<BigRational>>,
}

impl SamplePoint {
    pub fn identity(rank: usize, a: usize, b: usize) -> Self {
        Self {
            real: vec![vec![BigRational::zero(); rank]; b],
            torus: vec![vec![BigRational::zero(); rank]; a],
        }
    }
}

fn pair(chi: &[BigInt], x: &[BigRational]) -> BigRational {
    chi.iter()
        .zip(x)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, q)| q * BigRational::from_integer(c.clone()))
        .sum()
}

#[derive(Clone, Debug)]
pub struct AbelianArrangement {
    rank: usize,
    a: usize,
    b: usize,
    subvarieties: Vec<Subvariety>,
    matroid: ArithmeticOrientedMatroid,
    poset: OnceLock<LayerPoset>,
}

impl AbelianArrangement {
    /// Validates the data: lengths, primitive characters, no repeated subvariety.
    /// Torus translations are reduced into `[0, 1)`.
    pub fn new(rank: usize, a: usize, b: usize, mut subvarieties: Vec<Subvariety>) -> Result<Self> {
        for (i, h) in subvarieties.iter_mut().enumerate() {
            if h.chi.len() != rank || h.u.len() != b || h.v.len() != a {
                return Err(Error::Dimension(format!(
                    "subvariety {i}: expected chi of length {rank}, u of length {b}, v of length {a}"
                )));
            }
            for q in h.v.iter_mut() {
                *q = frac(q);
            }
        }
        let columns: Vec<Vec<BigInt>> = subvarieties.iter().map(|h| h.chi.clone()).collect();
        let matroid = ArithmeticOrientedMatroid::new(IntegerMatrix::from_columns(rank, &columns))?;
        for (second, h) in subvarieties.iter().enumerate() {
            if let Some(first) = subvarieties[..second].iter().position(|k| k.same_set_as(h)) {
                return Err(Error::Duplicate { first, second });
            }
        }
        Ok(Self {
            rank,
            a,
            b,
            subvarieties,
            matroid,
            poset: OnceLock::new(),
        })
    }

    /// Same subvarieties, other parameters; translation coordinates are truncated or zero-padded.
    pub fn with_parameters(&self, a: usize, b: usize) -> Result<Self> {
        let resize = |x: &[BigRational], n: usize| {
            let mut x = x.to_vec();
            x.resize(n, BigRational::zero());
            x
        };
        let subs = self
            .subvarieties
            .iter()
            .map(|h| Subvariety {
                chi: h.chi.clone(),
                u: resize(&h.u, b),
                v: resize(&h.v, a),
                label: h.label.clone(),
            })
            .collect();
        Self::new(self.rank, a, b, subs)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// `d = a + b - 1`, the degree of the classes `omega_i`.
    pub fn d(&self) -> usize {
        (self.a + self.b).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.subvarieties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subvarieties.is_empty()
    }

    pub fn subvarieties(&self) -> &[Subvariety] {
        &self.subvarieties
    }

    pub fn subvariety(&self, i: usize) -> &Subvariety {
        &self.subvarieties[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.subvarieties[i].label
    }

    pub fn matroid(&self) -> &ArithmeticOrientedMatroid {
        &self.matroid
    }

    pub fn ground_set(&self) -> IndexSet {
        IndexSet::full(self.len())
    }

    pub fn is_centered(&self) -> bool {
        self.subvarieties
            .iter()
            .all(|h| h.u.iter().chain(&h.v).all(Zero::is_zero))
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

    /// Whether the subvarieties indexed by `set` have a common point.
    pub fn is_central(&self, set: IndexSet) -> bool {
        if self.matroid.is_independent(set) {
            return true;
        }
        let elems = set.to_vec();
        let kernel = integer_kernel_basis(&self.matroid.columns_of(set));
        (0..kernel.cols()).all(|c| {
            let n: Vec<BigInt> = kernel.column(c);
            let combine = |get: &dyn Fn(&Subvariety) -> &BigRational| -> BigRational {
                elems
                    .iter()
                    .zip(&n)
                    .map(|(&i, k)| {
                        get(&self.subvarieties[i]) * BigRational::from_integer(k.clone())
                    })
                    .sum()
            };
            (0..self.b).all(|beta| combine(&|h| &h.u[beta]).is_zero())
                && (0..self.a).all(|alpha| combine(&|h| &h.v[alpha]).is_integer())
        })
    }

    /// Whether `p` lies on `H_i`.
    pub fn lies_on(&self, p: &SamplePoint, i: usize) -> bool {
        let h = &self.subvarieties[i];
        (0..self.b).all(|beta| pair(&h.chi, &p.real[beta]) == h.u[beta])
            && (0..self.a).all(|alpha| frac(&pair(&h.chi, &p.torus[alpha])) == h.v[alpha])
    }

    /// All `i` with `p` on `H_i` and `chi_i` in the rational span of `set`.
    pub fn support_closure(&self, set: IndexSet, p: &SamplePoint) -> IndexSet {
        let rank = self.matroid.rank(set);
        self.ground_set()
            .iter()
            .filter(|&i| {
                set.contains(i) || (self.matroid.rank(set.with(i)) == rank && self.lies_on(p, i))
            })
            .collect()
    }

    /// Values at `p` of the saturated characters of `set`; equal keys mean same component.
    pub fn component_key(&self, set: IndexSet, p: &SamplePoint) -> Vec<BigRational> {
        let basis = self.matroid.span_basis(set);
        let mut key = Vec::new();
        for s in basis.columns() {
            for beta in 0..self.b {
                key.push(pair(&s, &p.real[beta]));
            }
            for alpha in 0..self.a {
                key.push(frac(&pair(&s, &p.torus[alpha])));
            }
        }
        key
    }

    /// Whether `p` and `q`, both on every `H_i` with `i` in `set`, lie in one component of the intersection.
    pub fn same_component(&self, p: &SamplePoint, q: &SamplePoint, set: IndexSet) -> Result<bool> {
        self.check(set)?;
        if !set.iter().all(|i| self.lies_on(p, i) && self.lies_on(q, i)) {
            return Err(Error::PointNotOnIntersection);
        }
        Ok(self.component_key(set, p) == self.component_key(set, q))
    }

    /// One sample point per connected component of the intersection over `set`.
    pub fn component_points(&self, set: IndexSet) -> Vec<SamplePoint> {
        if !self.is_central(set) {
            return Vec::new();
        }
        let elems = set.to_vec();
        let snf = smith_normal_form(&self.matroid.columns_of(set));
        let k = snf.rank();
        let u_t = snf.left.transpose();
        let v_t = snf.right.transpose();
        let project = |w: &dyn Fn(&Subvariety) -> BigRational| -> Vec<BigRational> {
            // V^T w restricted to the first k coordinates
            (0..k)
                .map(|l| {
                    elems
                        .iter()
                        .enumerate()
                        .map(|(p, &i)| {
                            w(&self.subvarieties[i])
                                * BigRational::from_integer(v_t[(l, p)].clone())
                        })
                        .sum()
                })
                .collect()
        };
        let lift = |z: &[BigRational]| -> Vec<BigRational> {
            (0..self.rank)
                .map(|row| {
                    (0..k)
                        .map(|l| &z[l] * BigRational::from_integer(u_t[(row, l)].clone()))
                        .sum()
                })
                .collect()
        };
        let diag: Vec<BigRational> = snf
            .diagonal
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();

        let real: Vec<Vec<BigRational>> = (0..self.b)
            .map(|beta| {
                let w = project(&|h| h.u[beta].clone());
                let z: Vec<BigRational> = w.iter().zip(&diag).map(|(x, d)| x / d).collect();
                lift(&z)
            })
            .collect();

        // every torus coordinate picks a coset representative independently
        let per_coordinate: Vec<Vec<Vec<BigRational>>> = (0..self.a)
            .map(|alpha| {
                let w = project(&|h| h.v[alpha].clone());
                let mut choices = vec![Vec::<BigRational>::new()];
                for l in 0..k {
                    let d = &snf.diagonal[l];
                    let mut next = Vec::new();
                    for c in &choices {
                        let mut t = BigInt::zero();
                        while &t < d {
                            let mut c = c.clone();
                            c.push((&w[l] + BigRational::from_integer(t.clone())) / &diag[l]);
                            next.push(c);
                            t += 1;
                        }
                    }
                    choices = next;
                }
                choices
                    .iter()
                    .map(|z| lift(z).iter().map(frac).collect())
                    .collect()
            })
            .collect();

        let mut points = vec![SamplePoint {
            real,
            torus: Vec::new(),
        }];
        for options in per_coordinate {
            let mut next = Vec::new();
            for p in &points {
                for y in &options {
                    let mut p = p.clone();
                    p.torus.push(y.clone());
                    next.push(p);
                }
            }
            points = next;
        }
        debug_assert!(points
            .iter()
            .all(|p| set.iter().all(|i| self.lies_on(p, i))));
        points
    }

    /// Layers that are connected components of the intersection over `set`.
    pub fn intersection_components(&self, set: IndexSet) -> Vec<Layer> {
        self.component_points(set)
            .into_iter()
            .map(|p| self.layer_through(set, p))
            .collect()
    }

    /// The component of the intersection over `set` through `p`.
    pub(crate) fn layer_through(&self, set: IndexSet, point: SamplePoint) -> Layer {
        let support = self.support_closure(set, &point);
        let key = self.component_key(support, &point);
        Layer {
            support,
            rank: self.matroid.rank(support),
            point,
            key,
        }
    }

    pub fn layer_poset(&self) -> &LayerPoset {
        self.poset.get_or_init(|| LayerPoset::build(self))
    }
}
