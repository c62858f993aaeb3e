//! Built-in configurations other than the quintic: disjoint null-homologous
//! spheres in a product P¹×S, and the one-sphere Hard Lefschetz scenario.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::Provenance;
use crate::relations::{CycleConfiguration, RelationsError};
use crate::surgery::{
    apply_transition, obstruction_flags, ObstructionFlags, SixManifoldTopology, SurgeryError,
    Transition,
};
use crate::zlinalg::IntegerMatrix;

pub const PRESET_NAMES: [&str; 2] = ["product", "hard-lefschetz"];

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("unknown preset {0:?}; known presets: product, hard-lefschetz")]
    UnknownPreset(String),
    #[error("unknown ambient {0:?}; expected p1xp2 or p1xk3")]
    UnknownAmbient(String),
    #[error("need at least one sphere")]
    NoSpheres,
    #[error(transparent)]
    Relations(#[from] RelationsError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    P1xP2,
    P1xK3,
}

impl Ambient {
    pub fn topology(self) -> SixManifoldTopology {
        let (b2, euler) = match self {
            Ambient::P1xP2 => (2, 6),
            Ambient::P1xK3 => (23, 48),
        };
        SixManifoldTopology {
            b2,
            b3: 0,
            b4: b2,
            euler,
            simply_connected: true,
            c1_zero: false,
            has_null_homologous_surgered_sphere: false,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::P1xP2 => "p1xp2",
            Ambient::P1xK3 => "p1xk3",
        })
    }
}

impl FromStr for Ambient {
    type Err = PresetError;
    fn from_str(s: &str) -> Result<Self, PresetError> {
        match s.to_ascii_lowercase().as_str() {
            "p1xp2" => Ok(Ambient::P1xP2),
            "p1xk3" => Ok(Ambient::P1xK3),
            _ => Err(PresetError::UnknownAmbient(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetDescriptor {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
}

impl PresetDescriptor {
    pub fn new(name: &str, parameters: &[(&str, String)]) -> Result<Self, PresetError> {
        if !PRESET_NAMES.contains(&name) {
            return Err(PresetError::UnknownPreset(name.to_string()));
        }
        Ok(Self {
            name: name.to_string(),
            parameters: parameters
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        })
    }
}

pub const PRODUCT_CITATION: &str =
    "Lagrangian spheres in P1 x S built from a circle in the P1 factor and a \
     Lagrangian 2-sphere in S bound a 4-chain, so any number of disjoint copies is null-homologous";
pub const HARD_LEFSCHETZ_CITATION: &str =
    "Hard Lefschetz obstruction: a surgered null-homologous sphere \
     yields a curve class C with C = 0 under the Lefschetz map H4 -> H2 given by cup with [omega], \
     while the area of C is positive, so the result carries no Kahler form in that class";

/// m disjoint spheres with zero homology class in an ambient with b3 = 0.
pub fn preset_product(
    m: usize,
    ambient: &SixManifoldTopology,
) -> Result<CycleConfiguration, PresetError> {
    if m == 0 {
        return Err(PresetError::NoSpheres);
    }
    let cols = ambient.b3 as usize;
    let labels = (1..=m).map(|i| format!("P{i}")).collect();
    let classes = IntegerMatrix::zeros(m, cols);
    let pairing = IntegerMatrix::zeros(m, m);
    let disjoint = (0..m)
        .map(|i| (0..m).filter(|&j| j != i).collect())
        .collect();
    Ok(CycleConfiguration::new(
        labels,
        classes,
        Some(pairing),
        disjoint,
    )?)
}

pub fn product_provenance(m: usize, ambient: &str) -> Provenance {
    Provenance {
        generator: "preset product".to_string(),
        parameters: BTreeMap::from([
            ("m".to_string(), m.to_string()),
            ("ambient".to_string(), ambient.to_string()),
        ]),
        assumptions: vec![PRODUCT_CITATION.to_string()],
    }
}

/// Surgery on all m spheres of the product preset: n = m, r = 0.
pub fn product_transition(
    m: usize,
    ambient: &SixManifoldTopology,
) -> Result<(Transition, SixManifoldTopology), PresetError> {
    let t = Transition {
        null_homologous_sphere: m > 0,
        ..Transition::new(m as u64, 0, true)
    };
    Ok((t, apply_transition(ambient, &t)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardLefschetzReport {
    pub descriptor: PresetDescriptor,
    pub labels: Vec<String>,
    pub transition: Transition,
    pub before: SixManifoldTopology,
    pub after: SixManifoldTopology,
    pub flags: ObstructionFlags,
    pub hard_lefschetz_violated: bool,
    pub explanation: String,
    pub citations: Vec<String>,
}

pub fn preset_hard_lefschetz(ambient: Ambient) -> Result<HardLefschetzReport, PresetError> {
    let before = ambient.topology();
    let config = preset_product(1, &before)?;
    let (transition, after) = product_transition(1, &before)?;
    let flags = obstruction_flags(&after, Some(&transition));
    Ok(HardLefschetzReport {
        descriptor: PresetDescriptor::new("hard-lefschetz", &[("ambient", ambient.to_string())])?,
        labels: config.labels().to_vec(),
        transition,
        before,
        after,
        hard_lefschetz_violated: flags.hard_lefschetz_violated,
        flags,
        explanation: "the exceptional curve of a null-homologous sphere is the boundary image of \
                      a 4-cycle D with [omega] . D = C; C has positive area but pairs to zero with \
                      every class, so cup with [omega] is not injective on H4"
            .to_string(),
        citations: vec![
            PRODUCT_CITATION.to_string(),
            HARD_LEFSCHETZ_CITATION.to_string(),
        ],
    })
}
