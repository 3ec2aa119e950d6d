//! Built-in example arrangements, addressed as `NAME` or `NAME:PARAM`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arrangement::{AbelianArrangement, Subvariety};
use crate::cohomology::braid_arrangement;
use crate::error::{Error, Result};

pub const NAMES: [&str; 5] = ["cu", "ncu", "ncnu", "braid:N", "boolean:N"];

fn column(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn central(rank: usize, a: usize, b: usize, cols: &[&[i64]]) -> Result<AbelianArrangement> {
    let subs = cols
        .iter()
        .enumerate()
        .map(|(i, c)| Subvariety::central(column(c), a, b, (i + 1).to_string()))
        .collect();
    AbelianArrangement::new(rank, a, b, subs)
}

/// Three lines through the identity of `G^2`: characters `(1,0), (0,1), (1,1)`.
pub fn cu(a: usize, b: usize) -> Result<AbelianArrangement> {
    central(2, a, b, &[&[1, 0], &[0, 1], &[1, 1]])
}

/// `cu` plus translates of the second and third subvariety through `-e`.
pub fn ncu(a: usize, b: usize) -> Result<AbelianArrangement> {
    let shifted = |chi: &[i64], label: &str| Subvariety {
        chi: column(chi),
        u: vec![BigRational::from_integer(BigInt::from(-1)); b],
        v: vec![BigRational::new(1.into(), 2.into()); a],
        label: label.into(),
    };
    let subs = vec![
        Subvariety::central(column(&[1, 0]), a, b, "1"),
        Subvariety::central(column(&[0, 1]), a, b, "2"),
        shifted(&[0, 1], "2'"),
        Subvariety::central(column(&[1, 1]), a, b, "3"),
        shifted(&[1, 1], "3'"),
    ];
    AbelianArrangement::new(2, a, b, subs)
}

/// Rank 3, characters `(1,0,0), (0,1,0), (2,1,0), (1,0,2)`: a circuit of multiplicity 2.
pub fn ncnu(a: usize, b: usize) -> Result<AbelianArrangement> {
    central(3, a, b, &[&[1, 0, 0], &[0, 1, 0], &[2, 1, 0], &[1, 0, 2]])
}

/// The coordinate subgroups of `G^n`.
pub fn boolean(n: usize, a: usize, b: usize) -> Result<AbelianArrangement> {
    if n == 0 {
        return Err(Error::Dimension("boolean arrangement needs n >= 1".into()));
    }
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|k| i64::from(k == i)).collect())
        .collect();
    let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
    central(n, a, b, &refs)
}

/// Looks up `cu`, `ncu`, `ncnu`, `braid:N` or `boolean:N`.
pub fn builtin(name: &str, a: usize, b: usize) -> Result<AbelianArrangement> {
    let (base, param) = match name.split_once(':') {
        Some((base, p)) => {
            let n = p
                .parse::<usize>()
                .map_err(|_| Error::UnknownExample(format!("bad parameter in {name:?}")))?;
            (base, Some(n))
        }
        None => (name, None),
    };
    match (base, param) {
        ("cu", None) => cu(a, b),
        ("ncu", None) => ncu(a, b),
        ("ncnu", None) => ncnu(a, b),
        ("braid", Some(n)) => braid_arrangement(n, a, b),
        ("boolean", Some(n)) => boolean(n, a, b),
        _ => Err(Error::UnknownExample(format!(
            "{name:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(builtin("cu", 1, 1).unwrap().len(), 3);
        assert_eq!(builtin("ncu", 1, 1).unwrap().len(), 5);
        assert_eq!(builtin("braid:4", 1, 1).unwrap().len(), 6);
        assert_eq!(builtin("boolean:3", 0, 1).unwrap().rank(), 3);
        assert!(builtin("braid", 1, 1).is_err());
        assert!(builtin("cu:2", 1, 1).is_err());
        assert!(builtin("nope", 1, 1).is_err());
    }

    #[test]
    fn braid_three_is_cu() {
        let braid = builtin("braid:3", 1, 1).unwrap();
        let cu = cu(1, 1).unwrap();
        assert_eq!(
            braid.characteristic_polynomial(),
            cu.characteristic_polynomial()
        );
    }
}
