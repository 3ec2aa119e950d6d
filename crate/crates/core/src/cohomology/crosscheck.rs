use num_bigint::BigInt;
use num_rational::BigRational;

use super::quotient::{BettiTable, Quotient};
use super::relations::CircuitOptions;
use super::ring::{CohomologyRing, RingElement};
use crate::arrangement::{AbelianArrangement, LayerId, Subvariety};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::matroid::shuffle_sign;
use crate::poly::IntPoly;
use crate::subset::IndexSet;

fn pair_label(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("{}{}", i + 1, j + 1)
    } else {
        format!("{}-{}", i + 1, j + 1)
    }
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order: the ground set of the braid arrangement.
pub fn braid_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// The diagonals `x_i = x_j` of `G^n` written in the rank `n-1` lattice of differences:
/// `χ_i - χ_j = ε_i + … + ε_{j-1}`.
pub fn braid_arrangement(n: usize, a: usize, b: usize) -> Result<AbelianArrangement> {
    if n < 2 {
        return Err(Error::Dimension("braid arrangement needs n >= 2".into()));
    }
    let subs = braid_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let chi = (0..n - 1)
                .map(|k| BigInt::from(i64::from(i <= k && k < j)))
                .collect();
            Subvariety::central(chi, a, b, pair_label(n, i, j))
        })
        .collect();
    AbelianArrangement::new(n - 1, a, b, subs)
}

/// The same diagonals in the full rank `n` lattice, characters `e_i - e_j`.
pub fn braid_arrangement_full(n: usize, a: usize, b: usize) -> Result<AbelianArrangement> {
    if n < 2 {
        return Err(Error::Dimension("braid arrangement needs n >= 2".into()));
    }
    let subs = braid_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let chi = (0..n)
                .map(|k| BigInt::from(i64::from(k == i) - i64::from(k == j)))
                .collect();
            Subvariety::central(chi, a, b, pair_label(n, i, j))
        })
        .collect();
    AbelianArrangement::new(n, a, b, subs)
}

/// `Π_{k=1}^{n-1} ((1+t)^a + k t^d)`.
pub fn configuration_poincare(n: usize, a: usize, b: usize) -> IntPoly {
    let d = (a + b).saturating_sub(1);
    (1..n).fold(IntPoly::one(), |acc, k| {
        let factor = &IntPoly::one_plus_t().pow(a) + &IntPoly::monomial(BigInt::from(k), d);
        &acc * &factor
    })
}

fn coefficients(p: &IntPoly) -> Vec<usize> {
    p.coeffs()
        .iter()
        .map(|c| usize::try_from(c).expect("non-negative coefficient"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ArnoldReport {
    pub betti: BettiTable,
    pub checks: Vec<Check>,
}

impl ArnoldReport {
    pub fn passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// Three-term relations and triple-product vanishing on the braid arrangement.
pub fn arnold_relation_check(n: usize, a: usize, b: usize) -> Result<ArnoldReport> {
    if n < 3 {
        return Err(Error::Dimension(
            "the three-term relation needs n >= 3".into(),
        ));
    }
    let arr = braid_arrangement(n, a, b)?;
    let ring = CohomologyRing::new(&arr)?;
    let quotient = Quotient::new(&ring, &CircuitOptions::default(), None)?;
    let pairs = braid_pairs(n);
    let idx = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).expect("pair");
    let d = ring.d();
    let sign_d = if d % 2 == 0 { -1 } else { 1 };
    let sign_a = if a.is_multiple_of(2) { 1 } else { -1 };

    let mut three_term = Vec::new();
    let mut displayed_left = Vec::new();
    let mut triple = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ij, ik, jk) = (idx(i, j), idx(i, k), idx(j, k));
                let w_ij = ring.omega_of(ij)?;
                let w_ik = ring.omega_of(ik)?;
                let w_jk = ring.omega_of(jk)?;
                let base = &ring.multiply(&w_ij, &w_jk) - &ring.multiply(&w_ij, &w_ik);
                let jk_ik = ring.multiply(&w_jk, &w_ik);
                // ω_ij ω_jk − ω_ij ω_ik − (−1)^d ω_jk ω_ik + [b=1] (−1)^a ω_ik ψ_ij
                let mut e = &base + &jk_ik.scale(&rat_sign(sign_d));
                let mut left = &base + &jk_ik;
                if b == 1 {
                    let right = ring.multiply(&w_ik, &ring.psi(ij)?);
                    e = &e + &right.scale(&rat_sign(sign_a));
                    left = &left - &ring.multiply(&ring.psi(ij)?, &w_ik);
                }
                let label = format!("{}{}{}", i + 1, j + 1, k + 1);
                if !quotient.vanishes(&e)? {
                    three_term.push(label.clone());
                }
                if !quotient.vanishes(&left)? {
                    displayed_left.push(label.clone());
                }
                let prod = ring.product([&w_ij, &w_jk, &w_ik]);
                if !quotient.vanishes(&prod)? {
                    triple.push(label);
                }
            }
        }
    }
    let betti = quotient.betti_numbers();
    let expected = coefficients(&configuration_poincare(n, a, b));
    let note = if displayed_left.is_empty() {
        "the left-product reading also vanishes".to_string()
    } else {
        format!(
            "with ψ_ij ω_ik read as a left product it fails for {}",
            displayed_left.join(",")
        )
    };
    let checks = vec![
        Check::new(
            "three-term relation in the ideal",
            three_term.is_empty(),
            if three_term.is_empty() {
                note
            } else {
                format!("fails for {}", three_term.join(","))
            },
        ),
        Check::new(
            "triple product vanishes",
            triple.is_empty(),
            triple.join(","),
        ),
        Check::new(
            "Betti numbers match the product formula",
            betti == expected,
            format!("betti {betti:?}, formula {expected:?}"),
        ),
    ];
    Ok(ArnoldReport { betti, checks })
}

fn rat_sign(s: i32) -> BigRational {
    BigRational::from_integer(BigInt::from(s))
}

/// The averaged combination of circuit relations over the subsets `Z = X ∖ F`, `F ⊆ X ∖ C`:
/// `Σ_F (-1)^{|F|} 2^{|X∖F| + ℓ(F, X∖F)} m(X∖F)/m(X) ψ_F r(W(X∖F), X∖F)`, with `ℓ` the parity
/// of the shuffle.
pub fn averaged_relation(ring: &CohomologyRing, x: IndexSet, y: LayerId) -> Result<RingElement> {
    let arr = ring.arrangement();
    let m = arr.matroid();
    let c = m.unique_circuit(x)?.support();
    let opts = CircuitOptions::default();
    let mut out = RingElement::zero();
    for f in x.difference(c).subsets() {
        let z = x.difference(f);
        let w = arr.layer_above(y, z)?;
        let ell = u32::from(shuffle_sign(f, z)? < 0);
        let mut coeff = BigRational::new(
            m.multiplicity(z) * BigInt::from(2).pow(z.len() as u32 + ell),
            m.multiplicity(x),
        );
        if f.len() % 2 == 1 {
            coeff = -coeff;
        }
        let rel = ring.relation_circuit(z, w, &opts)?;
        out = &out + &ring.multiply(&ring.psi_set(f)?, &rel).scale(&coeff);
    }
    Ok(out)
}

/// `Σ_{i∈C} Σ_{B ⊆ C∖i, |B| even} (-1)^{|A_{<i}| + |B ∩ C⁻|} m(A)/m(X∖i) η̄_{W(A),A,B}` with
/// `A = X ∖ (B ∪ i)`: the relation in averaged classes.
pub fn averaged_class_relation(
    ring: &CohomologyRing,
    x: IndexSet,
    y: LayerId,
) -> Result<RingElement> {
    let arr = ring.arrangement();
    let m = arr.matroid();
    let circuit = m.unique_circuit(x)?;
    let c = circuit.support();
    let mut out = RingElement::zero();
    for i in c.iter() {
        for b in c.without(i).subsets() {
            if b.len() % 2 == 1 {
                continue;
            }
            let a = x.difference(b.with(i));
            let w = arr.layer_above(y, a)?;
            let mut coeff = BigRational::new(m.multiplicity(a), m.multiplicity(x.without(i)));
            if (a.count_below(i) + b.intersection(circuit.negative).len()) % 2 == 1 {
                coeff = -coeff;
            }
            out = &out + &ring.eta_bar(w, a, b)?.scale(&coeff);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CddmpReport {
    pub set: IndexSet,
    pub layer: LayerId,
    /// The averaged combination of circuit relations lies in the ideal.
    pub combination_member: bool,
    /// The relation in averaged classes lies in the ideal.
    pub averaged_member: bool,
}

/// Runs both averaged-relation memberships for one central nullity-one set.
pub fn cddmp_check(quotient: &Quotient, x: IndexSet, y: LayerId) -> Result<CddmpReport> {
    let ring = quotient.ring();
    let arr = ring.arrangement();
    if (arr.a(), arr.b()) != (1, 1) {
        return Err(Error::Parameters {
            a: arr.a(),
            b: arr.b(),
            reason: "the averaged relations are defined for (a,b) = (1,1)".into(),
        });
    }
    if arr.matroid().nullity(x) != 1 || !arr.is_central(x) {
        return Err(Error::Nullity {
            nullity: arr.matroid().nullity(x),
        });
    }
    let combination = averaged_relation(ring, x, y)?;
    let averaged = averaged_class_relation(ring, x, y)?;
    Ok(CddmpReport {
        set: x,
        layer: y,
        combination_member: quotient.vanishes(&combination)?,
        averaged_member: quotient.vanishes(&averaged)?,
    })
}

/// `ω_C` for every unimodular circuit `C`, central or not; returns the circuits where the
/// product does not vanish in the quotient.
pub fn omega_circuit_failures(quotient: &Quotient) -> Result<Vec<IndexSet>> {
    let ring = quotient.ring();
    let m = ring.arrangement().matroid();
    let mut failures = Vec::new();
    for circuit in m.circuits() {
        let c = circuit.support();
        if !m.is_unimodular(c) {
            continue;
        }
        let factors = c
            .iter()
            .map(|i| ring.omega_of(i))
            .collect::<Result<Vec<_>>>()?;
        let prod = ring.product(&factors);
        let k = c.len() * ring.d();
        if k <= quotient.top_degree() && !quotient.vanishes(&prod)? {
            failures.push(c);
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::tests::{cu, ncnu, ncu};

    #[test]
    fn braid_shapes() {
        assert_eq!(braid_arrangement(2, 1, 1).unwrap().len(), 1);
        let b3 = braid_arrangement(3, 1, 1).unwrap();
        assert_eq!(b3.rank(), 2);
        assert_eq!(b3.matroid().circuits().len(), 1);
        let b4 = braid_arrangement(4, 1, 1).unwrap();
        assert_eq!(b4.len(), 6);
        let circuits = b4.matroid().circuits();
        assert_eq!(
            circuits.iter().filter(|c| c.support().len() == 3).count(),
            4
        );
        // the three 4-cycles of K4
        assert_eq!(circuits.len(), 7);
        assert_eq!(b4.label(0), "12");
        assert!(braid_arrangement(1, 1, 1).is_err());
    }

    #[test]
    fn product_formula() {
        assert_eq!(
            coefficients(&configuration_poincare(4, 1, 1)),
            vec![1, 9, 26, 24]
        );
        assert_eq!(
            coefficients(&configuration_poincare(3, 0, 2)),
            vec![1, 3, 2]
        );
    }

    #[test]
    fn full_rank_braid_adds_a_free_factor() {
        for (a, b) in [(1, 1), (0, 2), (2, 1)] {
            let ess = braid_arrangement(4, a, b)
                .unwrap()
                .poincare_polynomial()
                .unwrap();
            let full = braid_arrangement_full(4, a, b)
                .unwrap()
                .poincare_polynomial()
                .unwrap();
            assert_eq!(full, &ess * &IntPoly::one_plus_t().pow(a));
            assert_eq!(ess, configuration_poincare(4, a, b));
        }
    }

    #[test]
    fn arnold_small() {
        for (a, b, expected) in [(1, 1, vec![1, 5, 6]), (0, 2, vec![1, 3, 2])] {
            let report = arnold_relation_check(3, a, b).unwrap();
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.betti, expected);
        }
    }

    #[test]
    fn averaged_relations_hold() {
        for arr in [cu(1, 1), ncu(1, 1), ncnu(1, 1)] {
            let ring = CohomologyRing::new(&arr).unwrap();
            let q = Quotient::new(&ring, &CircuitOptions::default(), None).unwrap();
            for (x, y) in ring.circuit_sites() {
                let r = cddmp_check(&q, x, y).unwrap();
                assert!(r.combination_member, "{r:?}");
                assert!(r.averaged_member, "{r:?}");
            }
        }
        let arr = cu(2, 1);
        let ring = CohomologyRing::new(&arr).unwrap();
        let q = Quotient::new(&ring, &CircuitOptions::default(), None).unwrap();
        assert!(cddmp_check(&q, IndexSet::full(3), ring.poset.of_rank(2)[0]).is_err());
    }
}
