//! The presented cohomology ring of the complement: a free module over `H*(G^r)` on the
//! classes `ω_{W,A}`, its product, the relation families and graded ranks over `Q`.

mod crosscheck;
mod exterior;
mod quotient;
mod relations;
mod ring;

pub use crosscheck::{
    arnold_relation_check, averaged_class_relation, averaged_relation, braid_arrangement,
    braid_arrangement_full, braid_pairs, cddmp_check, configuration_poincare,
    omega_circuit_failures, ArnoldReport, CddmpReport,
};
pub use exterior::{ExteriorElement, ExteriorMonomial};
pub use quotient::{BettiTable, Quotient, RelationSpan};
pub use relations::{equal_up_to_sign, CircuitOptions, CircuitRelation, IkChoice};
pub use ring::{CohomologyRing, RingBasisSymbol, RingElement};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::tests::{cu, ncnu, ncu};
    use crate::arrangement::AbelianArrangement;

    fn poincare(arr: &AbelianArrangement) -> Vec<usize> {
        arr.poincare_polynomial()
            .unwrap()
            .coeffs()
            .iter()
            .map(|c| usize::try_from(c).unwrap())
            .collect()
    }

    fn betti(arr: &AbelianArrangement) -> Vec<usize> {
        CohomologyRing::new(arr)
            .unwrap()
            .betti_numbers(None)
            .unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(betti(&cu(1, 1)), vec![1, 5, 6]);
        assert_eq!(betti(&cu(0, 2)), vec![1, 3, 2]);
        assert_eq!(betti(&ncu(1, 1)), vec![1, 7, 12]);
        assert_eq!(betti(&ncu(0, 2)), vec![1, 5, 6]);
        assert_eq!(betti(&ncnu(1, 1)), vec![1, 7, 18, 18]);
    }

    #[test]
    fn betti_matches_poincare() {
        for (a, b) in [(1, 1), (0, 2), (1, 2), (2, 1)] {
            for arr in [cu(a, b), ncu(a, b), ncnu(a, b)] {
                assert_eq!(betti(&arr), poincare(&arr), "(a,b) = ({a},{b})");
            }
        }
    }

    #[test]
    fn literal_span_agrees() {
        for arr in [cu(1, 1), ncu(1, 1), cu(2, 1), ncu(0, 2)] {
            let ring = CohomologyRing::new(&arr).unwrap();
            let opts = CircuitOptions::default();
            let q = Quotient::new(&ring, &opts, None).unwrap();
            let b = q.betti_numbers();
            for k in 0..=ring.degree_cutoff() {
                let span = ring.relation_span(k, &opts).unwrap();
                let literal = span.dimension() - span.rank();
                assert_eq!(literal, b.get(k).copied().unwrap_or(0), "degree {k}");
            }
        }
        let arr = cu(1, 1);
        let ring = CohomologyRing::new(&arr).unwrap();
        let span = ring.relation_span(2, &CircuitOptions::default()).unwrap();
        assert_eq!((span.dimension(), span.rank()), (10, 4));
        assert_eq!(
            ring.relation_span(0, &CircuitOptions::default())
                .unwrap()
                .rank(),
            0
        );
    }

    #[test]
    fn stability_and_choice_invariance() {
        for arr in [cu(1, 1), ncnu(1, 1), ncu(2, 1)] {
            let ring = CohomologyRing::new(&arr).unwrap();
            let base = Quotient::new(&ring, &CircuitOptions::default(), None).unwrap();
            assert!(base.check_stability().unwrap() > 0);
            for opts in [
                CircuitOptions {
                    ik: IkChoice::Max,
                    ..Default::default()
                },
                CircuitOptions {
                    ik: IkChoice::Nth(1),
                    ..Default::default()
                },
                CircuitOptions {
                    reverse_all: true,
                    ..Default::default()
                },
            ] {
                let other = Quotient::new(&ring, &opts, None).unwrap();
                assert!(base.same_span(&other), "{opts:?}");
            }
            assert!(omega_circuit_failures(&base).unwrap().is_empty());
        }
    }

    #[test]
    fn deletion_restriction_on_betti() {
        for (a, b) in [(1, 1), (0, 2)] {
            for arr in [cu(a, b), ncu(a, b), ncnu(a, b)] {
                let d = arr.d();
                let full = betti(&arr);
                for i in 0..arr.len() {
                    let del = betti(&arr.deletion(i).unwrap());
                    let res = betti(&arr.restriction(i).unwrap());
                    for (k, &bk) in full.iter().enumerate() {
                        let lhs = del.get(k).copied().unwrap_or(0);
                        let rhs = if k >= d {
                            res.get(k - d).copied().unwrap_or(0)
                        } else {
                            0
                        };
                        assert_eq!(bk, lhs + rhs, "element {i}, degree {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn braid_four() {
        let arr = braid_arrangement(4, 1, 1).unwrap();
        assert_eq!(betti(&arr), vec![1, 9, 26, 24]);
        let report = arnold_relation_check(4, 0, 2).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    mod props {
        use super::*;
        use crate::arrangement::Subvariety;
        use crate::exactlin::rational::rat;
        use crate::matroid::is_primitive;
        use num_bigint::BigInt;
        use proptest::prelude::*;

        fn arrangement(a: usize, b: usize) -> impl Strategy<Value = AbelianArrangement> {
            (1usize..=3, 1usize..=5).prop_flat_map(move |(r, n)| {
                proptest::collection::vec(
                    (
                        proptest::collection::vec(-2i64..=2, r),
                        0usize..3,
                        0usize..3,
                    ),
                    n,
                )
                .prop_filter_map("invalid arrangement", move |items| {
                    let shifts = [rat(0, 1), rat(1, 2), rat(1, 3)];
                    let subs = items
                        .iter()
                        .enumerate()
                        .map(|(i, (chi, su, sv))| {
                            let chi: Vec<BigInt> = chi.iter().map(|&x| BigInt::from(x)).collect();
                            is_primitive(&chi).then(|| Subvariety {
                                chi,
                                u: vec![shifts[*su].clone(); b],
                                v: vec![shifts[*sv].clone(); a],
                                label: (i + 1).to_string(),
                            })
                        })
                        .collect::<Option<Vec<_>>>()?;
                    AbelianArrangement::new(r, a, b, subs).ok()
                })
            })
        }

        fn symbols(ring: &CohomologyRing) -> Vec<RingBasisSymbol> {
            (0..=ring.degree_cutoff() + 1)
                .flat_map(|k| ring.free_basis(k))
                .collect()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn betti_equals_poincare_toric(arr in arrangement(1, 1)) {
                prop_assert_eq!(betti(&arr), poincare(&arr));
            }

            #[test]
            fn betti_equals_poincare_affine(arr in arrangement(0, 2)) {
                prop_assert_eq!(betti(&arr), poincare(&arr));
            }

            #[test]
            fn betti_equals_poincare_mixed(arr in arrangement(1, 2)) {
                prop_assert_eq!(betti(&arr), poincare(&arr));
            }

            #[test]
            fn graded_commutative(arr in arrangement(1, 1), i in 0usize..400, j in 0usize..400) {
                let ring = CohomologyRing::new(&arr).unwrap();
                let all = symbols(&ring);
                let (s, t) = (all[i % all.len()], all[j % all.len()]);
                let d = ring.d();
                let u = RingElement::from_symbol(s);
                let v = RingElement::from_symbol(t);
                let uv = ring.multiply(&u, &v);
                let vu = ring.multiply(&v, &u);
                if s.degree(d) * t.degree(d) % 2 == 0 {
                    prop_assert_eq!(uv, vu);
                } else {
                    prop_assert_eq!(uv, -&vu);
                }
            }
        }

        #[test]
        fn associative_on_small_examples() {
            for arr in [cu(1, 1), ncu(1, 1), ncnu(1, 1), cu(0, 2)] {
                let ring = CohomologyRing::new(&arr).unwrap();
                let all: Vec<RingElement> = symbols(&ring)
                    .into_iter()
                    .filter(|s| s.mono.degree() <= 1)
                    .map(RingElement::from_symbol)
                    .collect();
                for x in &all {
                    for y in &all {
                        let xy = ring.multiply(x, y);
                        for z in &all {
                            let left = ring.multiply(&xy, z);
                            let right = ring.multiply(x, &ring.multiply(y, z));
                            assert_eq!(left, right, "{x:?} {y:?} {z:?}");
                        }
                    }
                }
            }
        }
    }
}
