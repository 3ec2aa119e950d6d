use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AbelianArrangement, Subvariety};
use crate::error::{Error, Result};
use crate::exactlin::rational::frac;
use crate::exactlin::{smith_normal_form, IntegerMatrix};

impl AbelianArrangement {
    /// The arrangement without `H_i`.
    pub fn deletion(&self, i: usize) -> Result<AbelianArrangement> {
        if i >= self.len() {
            return Err(Error::BadIndex {
                index: i,
                size: self.len(),
            });
        }
        let mut subs = self.subvarieties().to_vec();
        subs.remove(i);
        AbelianArrangement::new(self.rank(), self.a(), self.b(), subs)
    }

    /// The arrangement induced on `H_i`, of rank `r - 1`: one subvariety per connected
    /// component of each non-empty `H_j ∩ H_i`, duplicates removed keeping the first.
    pub fn restriction(&self, i: usize) -> Result<AbelianArrangement> {
        if i >= self.len() {
            return Err(Error::BadIndex {
                index: i,
                size: self.len(),
            });
        }
        let r = self.rank();
        let (a, b) = (self.a(), self.b());
        let hi = self.subvariety(i);
        // unimodular U with U chi_i = e_1, so H_i = {x'_1 = g_i} in the new coordinates
        let snf = smith_normal_form(&IntegerMatrix::from_columns(
            r,
            std::slice::from_ref(&hi.chi),
        ));
        let mut u = snf.left;
        if snf.right[(0, 0)].is_negative() {
            u.negate_row(0);
        }
        debug_assert_eq!(u.mul_vec(&hi.chi)[0], BigInt::one());

        let mut subs: Vec<Subvariety> = Vec::new();
        for (j, hj) in self.subvarieties().iter().enumerate() {
            if j == i {
                continue;
            }
            let image = u.mul_vec(&hj.chi);
            let c = BigRational::from_integer(image[0].clone());
            let mut psi: Vec<BigInt> = image[1..].to_vec();
            let g = psi.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g.is_zero() {
                continue;
            }
            let gq = BigRational::from_integer(g.clone());
            for x in psi.iter_mut() {
                *x /= &g;
            }
            let flip = psi
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative());
            let orient = |q: BigRational| if flip { -q } else { q };
            if flip {
                for x in psi.iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            let real: Vec<BigRational> = (0..b)
                .map(|beta| orient((&hj.u[beta] - &c * &hi.u[beta]) / &gq))
                .collect();
            // each torus coordinate splits into g cosets
            let mut torus: Vec<Vec<BigRational>> = vec![Vec::new()];
            for alpha in 0..a {
                let base = &hj.v[alpha] - &c * &hi.v[alpha];
                let mut next = Vec::new();
                for prefix in &torus {
                    let mut t = BigInt::zero();
                    while t < g {
                        let value = orient((&base + BigRational::from_integer(t.clone())) / &gq);
                        let mut p = prefix.clone();
                        p.push(frac(&value));
                        next.push(p);
                        t += 1;
                    }
                }
                torus = next;
            }
            let split = torus.len() > 1;
            for (n, v) in torus.into_iter().enumerate() {
                let label = if split {
                    format!("{}#{}", hj.label, n + 1)
                } else {
                    hj.label.clone()
                };
                let h = Subvariety {
                    chi: psi.clone(),
                    u: real.clone(),
                    v,
                    label,
                };
                if !subs.iter().any(|k| k.same_set_as(&h)) {
                    subs.push(h);
                }
            }
        }
        AbelianArrangement::new(r - 1, a, b, subs)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{centered, cu, ncnu, ncu};
    use crate::poly::IntPoly;

    fn check_deletion_restriction(arr: &super::AbelianArrangement) {
        let p = arr.poincare_polynomial().unwrap();
        for i in 0..arr.len() {
            let del = arr.deletion(i).unwrap().poincare_polynomial().unwrap();
            let res = arr.restriction(i).unwrap().poincare_polynomial().unwrap();
            assert_eq!(p, &del + &res.shift(arr.d()), "element {i}");
        }
    }

    #[test]
    fn cu_restriction_is_one_point() {
        // H_2 and H_3 both meet H_1 only at the identity
        let res = cu(1, 1).restriction(0).unwrap();
        assert_eq!(res.rank(), 1);
        assert_eq!(res.len(), 1);
        assert_eq!(res.label(0), "2");
    }

    #[test]
    fn shifted_restriction_keeps_distinct_points() {
        let res = ncu(1, 1).restriction(0).unwrap();
        assert_eq!(res.len(), 2);
    }

    #[test]
    fn deletion_keeps_translations() {
        let arr = ncu(1, 1);
        let del = arr.deletion(4).unwrap();
        assert_eq!(del.len(), 4);
        assert_eq!(del.subvarieties(), &arr.subvarieties()[..4]);
        let single = centered(1, 1, 1, &[&[1]]);
        assert!(single.deletion(0).unwrap().is_empty());
        assert!(single.deletion(1).is_err());
    }

    #[test]
    fn restriction_splits_components() {
        // restricting NCNU to H_3 = {2x1 + x2 = 0}: H_4 meets it in a rank-1 arrangement
        let res = ncnu(1, 1).restriction(2).unwrap();
        assert_eq!(res.rank(), 2);
        let res2 = ncnu(2, 1).restriction(3).unwrap();
        assert!(res2.len() >= res.len());
    }

    #[test]
    fn deletion_restriction_on_examples() {
        for (a, b) in [(1, 1), (0, 2), (2, 1), (1, 2)] {
            check_deletion_restriction(&cu(a, b));
            check_deletion_restriction(&ncu(a, b));
            check_deletion_restriction(&ncnu(a, b));
        }
    }

    #[test]
    fn empty_restriction() {
        let arr = centered(2, 1, 1, &[&[1, 0]]);
        let res = arr.restriction(0).unwrap();
        assert!(res.is_empty());
        assert_eq!(res.poincare_polynomial().unwrap(), IntPoly::one_plus_t());
    }
}
