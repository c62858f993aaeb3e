//! JSON file formats. Integers that may exceed 64 bits travel as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relations::{CycleConfiguration, RelationsError};
use crate::zlinalg::{IntegerMatrix, LinalgError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error("entry {value:?} at row {row}, column {col} is not a decimal integer")]
    BadInteger {
        row: usize,
        col: usize,
        value: String,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Relations(#[from] RelationsError),
}

pub mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| {
                x.parse()
                    .map_err(|_| D::Error::custom(format!("not an integer: {x:?}")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&IntegerMatrix> for MatrixJson {
    fn from(m: &IntegerMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| m.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for IntegerMatrix {
    type Error = FormatError;

    fn try_from(j: &MatrixJson) -> Result<Self, FormatError> {
        if j.entries.len() != j.rows {
            return Err(LinalgError::Shape {
                rows: j.rows,
                cols: j.cols,
                len: j.entries.iter().map(Vec::len).sum(),
            }
            .into());
        }
        let mut flat = Vec::with_capacity(j.rows * j.cols);
        for (r, row) in j.entries.iter().enumerate() {
            if row.len() != j.cols {
                return Err(LinalgError::RaggedRow {
                    row: r,
                    expected: j.cols,
                    found: row.len(),
                }
                .into());
            }
            for (c, x) in row.iter().enumerate() {
                let v: BigInt = x.trim().parse().map_err(|_| FormatError::BadInteger {
                    row: r,
                    col: c,
                    value: x.clone(),
                })?;
                flat.push(v);
            }
        }
        Ok(IntegerMatrix::new(j.rows, j.cols, flat)?)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    /// Modelling assumptions a reader should know about.
    #[serde(default)]
    pub assumptions: Vec<String>,
}

/// On-disk cycle configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationFile {
    pub schema_version: u32,
    pub labels: Vec<String>,
    pub classes: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<MatrixJson>,
    pub disjoint: Vec<Vec<usize>>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl ConfigurationFile {
    pub fn from_config(config: &CycleConfiguration, provenance: Provenance) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            labels: config.labels().to_vec(),
            classes: config.classes().into(),
            pairing: config.pairing().map(Into::into),
            disjoint: config.adjacency().to_vec(),
            provenance,
        }
    }

    pub fn to_config(&self) -> Result<CycleConfiguration, FormatError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FormatError::SchemaVersion {
                found: self.schema_version,
            });
        }
        let classes = IntegerMatrix::try_from(&self.classes)?;
        let pairing = self
            .pairing
            .as_ref()
            .map(IntegerMatrix::try_from)
            .transpose()?;
        Ok(CycleConfiguration::new(
            self.labels.clone(),
            classes,
            pairing,
            self.disjoint.clone(),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_with_big_entries() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = IntegerMatrix::new(1, 2, vec![big.clone(), -big]).unwrap();
        let j = MatrixJson::from(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(IntegerMatrix::try_from(&back).unwrap(), m);
    }

    #[test]
    fn bad_entry_is_located() {
        let j = MatrixJson {
            rows: 1,
            cols: 2,
            entries: vec![vec!["1".into(), "x".into()]],
        };
        let err = IntegerMatrix::try_from(&j).unwrap_err();
        assert!(err.to_string().contains("row 0, column 1"));
    }
}
