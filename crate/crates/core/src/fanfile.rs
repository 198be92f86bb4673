//! On-disk fan format: JSON with 0-based indices, either explicit rays and
//! maximal cones or a primitive-relation presentation (basis ray indices
//! plus symbolic relations), exactly one of the two.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{fan_from_primitive_data, Fan, FanError, SymbolicRelation};
use crate::lattice::LatticeVector;

#[derive(Debug, Error)]
pub enum FanFileError {
    #[error("malformed fan file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("fan file must contain exactly one of rays+max_cones or primitive_presentation")]
    AmbiguousSource,
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitivePresentation {
    pub basis: [usize; 4],
    pub relations: Vec<SymbolicRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<[i64; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_cones: Option<Vec<[usize; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_presentation: Option<PrimitivePresentation>,
}

impl FanFile {
    pub fn parse(text: &str) -> Result<FanFile, FanFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(self).expect("fan files always serialize")
    }

    pub fn from_fan(fan: &Fan) -> FanFile {
        FanFile {
            name: fan.name.clone(),
            rays: Some(fan.rays().iter().map(|r| r.0).collect()),
            max_cones: Some(fan.max_cones().to_vec()),
            primitive_presentation: None,
        }
    }

    pub fn into_fan(&self) -> Result<Fan, FanFileError> {
        match (&self.rays, &self.max_cones, &self.primitive_presentation) {
            (Some(rays), Some(cones), None) => {
                let rays: Vec<LatticeVector> = rays.iter().map(|&r| LatticeVector(r)).collect();
                let cones: Vec<Vec<usize>> = cones.iter().map(|c| c.to_vec()).collect();
                Ok(Fan::new(self.name.clone(), rays, cones)?)
            }
            (None, None, Some(p)) => {
                let n = p
                    .relations
                    .iter()
                    .flat_map(|r| {
                        r.lhs
                            .iter()
                            .copied()
                            .chain(r.rhs.iter().map(|&(j, _)| j))
                    })
                    .chain(p.basis.iter().copied())
                    .max()
                    .map_or(0, |m| m + 1);
                Ok(fan_from_primitive_data(
                    self.name.clone(),
                    n,
                    p.basis,
                    &p.relations,
                )?)
            }
            _ => Err(FanFileError::AmbiguousSource),
        }
    }
}
