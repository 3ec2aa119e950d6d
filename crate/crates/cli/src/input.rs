//! The JSON arrangement document.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use arrcoh::exactlin::rational::{format_rational, parse_rational};
use arrcoh::{AbelianArrangement, Subvariety};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub rank: usize,
    pub a: usize,
    pub b: usize,
    pub hypersurfaces: Vec<HypersurfaceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceEntry {
    pub chi: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub u: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn rationals(
    entries: &[String],
    expected: usize,
    index: usize,
    field: &str,
) -> Result<Vec<num_rational::BigRational>, CliError> {
    if entries.is_empty() {
        return Ok(vec![
            num_rational::BigRational::from_integer(0.into());
            expected
        ]);
    }
    if entries.len() != expected {
        return Err(CliError::Input(format!(
            "hypersurface {index}: {field} has {} entries, expected {expected}",
            entries.len()
        )));
    }
    entries
        .iter()
        .map(|s| {
            parse_rational(s)
                .map_err(|e| CliError::Input(format!("hypersurface {index}: {field}: {e}")))
        })
        .collect()
}

impl InputDocument {
    pub fn to_arrangement(&self) -> Result<AbelianArrangement, CliError> {
        let mut subs = Vec::with_capacity(self.hypersurfaces.len());
        for (i, h) in self.hypersurfaces.iter().enumerate() {
            if h.chi.len() != self.rank {
                return Err(CliError::Input(format!(
                    "hypersurface {i}: chi has {} entries but rank is {}",
                    h.chi.len(),
                    self.rank
                )));
            }
            subs.push(Subvariety {
                chi: h.chi.iter().map(|&x| BigInt::from(x)).collect(),
                u: rationals(&h.u, self.b, i, "u")?,
                v: rationals(&h.v, self.a, i, "v")?,
                label: h.label.clone().unwrap_or_else(|| (i + 1).to_string()),
            });
        }
        Ok(AbelianArrangement::new(self.rank, self.a, self.b, subs)?)
    }

    pub fn from_arrangement(arr: &AbelianArrangement) -> Result<Self, CliError> {
        let hypersurfaces = arr
            .subvarieties()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let chi = s
                    .chi
                    .iter()
                    .map(|x| {
                        i64::try_from(x)
                            .map_err(|_| CliError::Input(format!("character entry {x} too large")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let nonzero = |q: &[num_rational::BigRational]| {
                    if q.iter()
                        .all(|x| x == &num_rational::BigRational::from_integer(0.into()))
                    {
                        Vec::new()
                    } else {
                        q.iter().map(format_rational).collect()
                    }
                };
                let default_label = (i + 1).to_string();
                Ok(HypersurfaceEntry {
                    chi,
                    u: nonzero(&s.u),
                    v: nonzero(&s.v),
                    label: (s.label != default_label).then(|| s.label.clone()),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Self {
            rank: arr.rank(),
            a: arr.a(),
            b: arr.b(),
            hypersurfaces,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// SHA-256 of the compact canonical form.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("serializable");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

pub fn parse_document(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed document: {e}")))
}

/// Parses and validates a document; translations come back normalized.
pub fn parse_input(text: &str) -> Result<AbelianArrangement, CliError> {
    parse_document(text)?.to_arrangement()
}

pub fn serialize(arr: &AbelianArrangement) -> Result<String, CliError> {
    Ok(InputDocument::from_arrangement(arr)?.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_reduction() {
        let arr = parse_input(
            r#"{"rank":2,"a":1,"b":1,"hypersurfaces":[
                {"chi":[1,0]},
                {"chi":[0,1],"u":["-1"],"v":["3/2"]}]}"#,
        )
        .unwrap();
        assert_eq!(arr.len(), 2);
        let doc = InputDocument::from_arrangement(&arr).unwrap();
        assert_eq!(doc.hypersurfaces[1].v, vec!["1/2".to_string()]);
        assert!(doc.hypersurfaces[0].u.is_empty());
    }

    #[test]
    fn errors() {
        let bad = |t: &str| parse_input(t).unwrap_err().to_string();
        assert!(bad(r#"{"rank":2,"a":1,"b":1,"hypersurfaces":[{"chi":[2,0]}]}"#).contains('0'));
        assert!(bad(r#"{"rank":2,"a":1,"b":1,"hypersurfaces":[{"chi":[1]}]}"#).contains("rank"));
        assert!(
            bad(r#"{"rank":1,"a":1,"b":1,"hypersurfaces":[{"chi":[1],"v":["x/2"]}]}"#)
                .contains("v")
        );
        assert!(bad("{").contains("malformed"));
    }
}
