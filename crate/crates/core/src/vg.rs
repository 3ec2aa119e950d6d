//! Chambers of a central real arrangement and the Varchenko-Gel'fand identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arrangement::AbelianArrangement;
use crate::check::Check;
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseVector};
use crate::subset::IndexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    /// `+1` or `-1` per hyperplane.
    pub signs: Vec<i8>,
    /// A point with `signs[i] * chi_i(witness) >= 1` for all `i`.
    pub witness: Vec<BigRational>,
}

/// A function on the chambers, in chamber order.
pub type ChamberFunction = Vec<i64>;

// sum_k coeffs[k] x_k >= bound
#[derive(Clone, Debug, PartialEq, Eq)]
struct Inequality {
    coeffs: Vec<BigRational>,
    bound: BigRational,
}

impl Inequality {
    fn normalized(mut self, var: usize) -> Self {
        let scale = self.coeffs[var].abs();
        if !scale.is_zero() && !scale.is_one() {
            for c in self.coeffs.iter_mut() {
                *c /= &scale;
            }
            self.bound /= &scale;
        }
        self
    }
}

/// Fourier–Motzkin: a solution of the system, or `None` if infeasible.
fn solve(system: Vec<Inequality>, vars: usize) -> Option<Vec<BigRational>> {
    let mut stages = vec![system];
    for var in (0..vars).rev() {
        let current = stages.last().expect("non-empty");
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in current {
            let c = &ineq.coeffs[var];
            if c.is_positive() {
                lower.push(ineq.clone().normalized(var));
            } else if c.is_negative() {
                upper.push(ineq.clone().normalized(var));
            } else {
                rest.push(ineq.clone());
            }
        }
        // x_var >= lo-part and -x_var >= up-part combine to drop x_var
        for lo in &lower {
            for up in &upper {
                let combined = Inequality {
                    coeffs: lo
                        .coeffs
                        .iter()
                        .zip(&up.coeffs)
                        .map(|(a, b)| a + b)
                        .collect(),
                    bound: &lo.bound + &up.bound,
                };
                if !rest.contains(&combined) {
                    rest.push(combined);
                }
            }
        }
        stages.push(rest);
    }
    let last = stages.last().expect("non-empty");
    if last.iter().any(|ineq| ineq.bound.is_positive()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); vars];
    // stages[vars - 1 - var] involves only x_0..=x_var, and x_0..x_var are already fixed
    for var in 0..vars {
        let stage = &stages[vars - 1 - var];
        let (mut lo, mut hi): (Option<BigRational>, Option<BigRational>) = (None, None);
        for ineq in stage {
            let c = &ineq.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let known: BigRational = (0..var).map(|k| &ineq.coeffs[k] * &x[k]).sum();
            let value = (&ineq.bound - known) / c;
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| &value > l) {
                    lo = Some(value);
                }
            } else if hi.as_ref().is_none_or(|h| &value < h) {
                hi = Some(value);
            }
        }
        x[var] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / BigRational::from_integer(BigInt::from(2)),
            (Some(l), None) => l + BigRational::one(),
            (None, Some(h)) => h - BigRational::one(),
            (None, None) => BigRational::zero(),
        };
    }
    Some(x)
}

fn check_real_central(arr: &AbelianArrangement) -> Result<()> {
    if arr.a() != 0 || arr.b() != 1 {
        return Err(Error::Parameters {
            a: arr.a(),
            b: arr.b(),
            reason: "chambers need a real arrangement, (a, b) = (0, 1)".into(),
        });
    }
    if !arr.is_centered() {
        return Err(Error::NotCentral);
    }
    Ok(())
}

/// All chambers, in lexicographic order of sign vectors with `+` before `-`.
pub fn enumerate_chambers(arr: &AbelianArrangement) -> Result<Vec<Chamber>> {
    check_real_central(arr)?;
    let r = arr.rank();
    let rows: Vec<Vec<BigRational>> = arr
        .subvarieties()
        .iter()
        .map(|h| {
            h.chi
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<i8>, Vec<BigRational>)> =
        vec![(Vec::new(), vec![BigRational::zero(); r])];
    while let Some((signs, witness)) = stack.pop() {
        if signs.len() == rows.len() {
            out.push(Chamber { signs, witness });
            continue;
        }
        // push '-' first so '+' is explored first
        for s in [-1i8, 1] {
            let mut next = signs.clone();
            next.push(s);
            let system = next
                .iter()
                .zip(&rows)
                .map(|(&s, row)| Inequality {
                    coeffs: row
                        .iter()
                        .map(|c| if s > 0 { c.clone() } else { -c })
                        .collect(),
                    bound: BigRational::one(),
                })
                .collect();
            if let Some(x) = solve(system, r) {
                stack.push((next, x));
            }
        }
    }
    Ok(out)
}

/// Indicator of the chambers on the `+` side of every `I+` and the `-` side of every `I-`.
pub fn heaviside_monomial(
    chambers: &[Chamber],
    plus: IndexSet,
    minus: IndexSet,
) -> Result<ChamberFunction> {
    if !plus.is_disjoint(minus) {
        return Err(Error::Overlap);
    }
    Ok(chambers
        .iter()
        .map(|c| {
            let ok = plus.iter().all(|i| c.signs[i] > 0) && minus.iter().all(|i| c.signs[i] < 0);
            i64::from(ok)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct VgReport {
    pub chambers: Vec<Chamber>,
    pub span_dimension: usize,
    pub zaslavsky: BigInt,
    pub checks: Vec<Check>,
}

impl VgReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn first_nonzero(f: &[i64]) -> Option<usize> {
    f.iter().position(|&x| x != 0)
}

fn product(chambers: &[Chamber], plus: IndexSet) -> ChamberFunction {
    heaviside_monomial(chambers, plus, IndexSet::EMPTY).expect("disjoint")
}

/// Evaluates the Varchenko-Gel'fand relations, including the signed circuit sums,
/// as chamber functions.
pub fn verify_vg_presentation(arr: &AbelianArrangement) -> Result<VgReport> {
    let chambers = enumerate_chambers(arr)?;
    let n = arr.len();
    let mut checks = Vec::new();
    let one = |i: usize| IndexSet::singleton(i);
    let zero_check = |name: String, f: &[i64]| match first_nonzero(f) {
        None => Check::new(name, true, "vanishes on every chamber"),
        Some(c) => Check::new(
            name,
            false,
            format!("non-zero on chamber {:?}", chambers[c].signs),
        ),
    };

    let mut complement = Vec::new();
    let mut orthogonal = Vec::new();
    for i in 0..n {
        let wp = heaviside_monomial(&chambers, one(i), IndexSet::EMPTY)?;
        let wm = heaviside_monomial(&chambers, IndexSet::EMPTY, one(i))?;
        complement.extend(wp.iter().zip(&wm).map(|(p, m)| p + m - 1));
        orthogonal.extend(wp.iter().zip(&wm).map(|(p, m)| p * m));
    }
    checks.push(zero_check("w- = 1 - w+".into(), &complement));
    checks.push(zero_check("w+ w- = 0".into(), &orthogonal));

    let circuits = arr.matroid().circuits();
    let mut circuit_products = Vec::new();
    let mut circuit_sums = Vec::new();
    for c in &circuits {
        for oriented in [c.clone(), c.negated()] {
            circuit_products.extend(heaviside_monomial(
                &chambers,
                oriented.positive,
                oriented.negative,
            )?);
        }
        let support = c.support();
        let mut f = vec![0i64; chambers.len()];
        for (part, sign) in [(c.negative, 1i64), (c.positive, -1i64)] {
            for k in part.subsets().into_iter().filter(|k| !k.is_empty()) {
                let parity = if k.len() % 2 == 0 { 1 } else { -1 };
                for (x, w) in f.iter_mut().zip(product(&chambers, support.difference(k))) {
                    *x += sign * parity * w;
                }
            }
        }
        circuit_sums.extend(f);
    }
    checks.push(zero_check(
        "circuit products vanish".into(),
        &circuit_products,
    ));
    checks.push(zero_check(
        "signed circuit sums vanish".into(),
        &circuit_sums,
    ));

    let mut span = Echelon::new();
    for s in arr.ground_set().subsets() {
        let v: SparseVector = product(&chambers, s)
            .into_iter()
            .enumerate()
            .filter(|&(_, x)| x != 0)
            .map(|(k, x)| (k, BigRational::from_integer(BigInt::from(x))))
            .collect();
        span.insert(v);
        if span.rank() == chambers.len() {
            break;
        }
    }
    let span_dimension = span.rank();
    checks.push(Check::new(
        "monomials span all chamber functions",
        span_dimension == chambers.len(),
        format!(
            "span dimension {span_dimension}, {} chambers",
            chambers.len()
        ),
    ));

    let chi = arr.characteristic_polynomial();
    let mut zaslavsky = chi.eval(&BigInt::from(-1));
    if arr.rank() % 2 == 1 {
        zaslavsky = -zaslavsky;
    }
    checks.push(Check::new(
        "chamber count = (-1)^r chi(-1)",
        BigInt::from(chambers.len()) == zaslavsky,
        format!("{} chambers, (-1)^r chi(-1) = {zaslavsky}", chambers.len()),
    ));

    let strict = chambers.iter().all(|c| {
        c.signs.iter().enumerate().all(|(i, &s)| {
            let v = arr
                .subvariety(i)
                .chi
                .iter()
                .zip(&c.witness)
                .map(|(a, x)| x * BigRational::from_integer(a.clone()))
                .sum::<BigRational>();
            if s > 0 {
                v.is_positive()
            } else {
                v.is_negative()
            }
        })
    });
    checks.push(Check::new("witnesses lie in their chambers", strict, ""));

    Ok(VgReport {
        chambers,
        span_dimension,
        zaslavsky,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Subvariety;

    fn real(rank: usize, cols: &[&[i64]]) -> AbelianArrangement {
        let subs = cols
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Subvariety::central(
                    c.iter().map(|&x| BigInt::from(x)).collect(),
                    0,
                    1,
                    i.to_string(),
                )
            })
            .collect();
        AbelianArrangement::new(rank, 0, 1, subs).unwrap()
    }

    #[test]
    fn chamber_counts() {
        assert_eq!(enumerate_chambers(&real(1, &[&[1]])).unwrap().len(), 2);
        assert_eq!(
            enumerate_chambers(&real(2, &[&[1, 0], &[0, 1], &[1, 1]]))
                .unwrap()
                .len(),
            6
        );
        assert_eq!(enumerate_chambers(&real(3, &[])).unwrap().len(), 1);
    }

    #[test]
    fn cu_monomial_and_report() {
        let arr = real(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let chambers = enumerate_chambers(&arr).unwrap();
        let f = heaviside_monomial(
            &chambers,
            IndexSet::from_indices([0, 1]),
            IndexSet::singleton(2),
        )
        .unwrap();
        assert!(f.iter().all(|&x| x == 0));
        let one = heaviside_monomial(&chambers, IndexSet::EMPTY, IndexSet::EMPTY).unwrap();
        assert!(one.iter().all(|&x| x == 1));
        assert!(
            heaviside_monomial(&chambers, IndexSet::singleton(0), IndexSet::singleton(0)).is_err()
        );
        let report = verify_vg_presentation(&arr).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
        assert_eq!(report.span_dimension, 6);
    }

    #[test]
    fn boolean_spans_full_space() {
        let arr = real(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let report = verify_vg_presentation(&arr).unwrap();
        assert!(report.passed());
        assert_eq!(report.span_dimension, 8);
    }

    #[test]
    fn rejects_toric_or_shifted() {
        let toric = real(1, &[&[1]]).with_parameters(1, 1).unwrap();
        assert!(enumerate_chambers(&toric).is_err());
        let mut h = Subvariety::central(vec![BigInt::one()], 0, 1, "h");
        h.u[0] = BigRational::one();
        let shifted = AbelianArrangement::new(1, 0, 1, vec![h]).unwrap();
        assert_eq!(enumerate_chambers(&shifted).unwrap_err(), Error::NotCentral);
    }

    #[test]
    fn infeasible_system_detected() {
        let row = |a: i64, b: i64| Inequality {
            coeffs: vec![BigRational::from_integer(a.into())],
            bound: BigRational::from_integer(b.into()),
        };
        assert!(solve(vec![row(1, 1), row(-1, 1)], 1).is_none());
        assert_eq!(
            solve(vec![row(1, 1), row(-1, -3)], 1),
            Some(vec![BigRational::from_integer(2.into())])
        );
    }
}
